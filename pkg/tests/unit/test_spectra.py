import numpy as np
import pytest

from rotorwave.core.errors import (
    ConfigurationError,
    DomainError,
    SpectrumCoverageError,
    ValidationError,
)
from rotorwave.spectra import IdealRotor, Tabulated, build_spectrum, register, registered_kinds
from rotorwave.spectra.base import SpectrumModel


def test_ideal_rotor_energies():
    rotor = IdealRotor(0.5)
    assert rotor.energies([0, 1, 2, 10]).tolist() == [0.0, 1.0, 3.0, 55.0]
    assert rotor.derivatives(10.0) == (10.5, 0.5)


@pytest.mark.parametrize("B", [0.0, -1.0, float("nan")])
def test_ideal_rotor_needs_positive_constant(B):
    with pytest.raises(DomainError):
        IdealRotor(B)


def test_tabulated_lookup_and_gaps():
    spectrum = Tabulated(((0, 0.0), (2, 6.0), (4, 20.0)))
    assert spectrum.energies([4, 0]).tolist() == [20.0, 0.0]
    with pytest.raises(SpectrumCoverageError) as excinfo:
        spectrum.energies([2, 3, 6])
    assert excinfo.value.missing == [3, 6]


def test_tabulated_rejects_disordered_levels():
    with pytest.raises(ValidationError):
        Tabulated(((0, 0.0), (4, 20.0), (2, 6.0)))
    with pytest.raises(ValidationError):
        Tabulated(((0, 0.0), (2, 6.0), (4, 5.0)))
    with pytest.raises(ValidationError):
        Tabulated(())


def test_negative_or_fractional_spin_is_a_domain_error():
    with pytest.raises(DomainError):
        IdealRotor(1.0).energies([-1])
    with pytest.raises(DomainError):
        IdealRotor(1.0).energies([1.5])


def test_contiguous_table_differences_match_ideal_rotor():
    levels = tuple((I, I * (I + 1.0)) for I in range(31))
    first, second = Tabulated(levels).derivatives(10.0)
    assert first == pytest.approx(21.0, rel=1e-14)
    assert second == pytest.approx(1.0, rel=1e-14)


def test_even_band_uses_its_own_spacing():
    levels = tuple((I, I * (I + 1.0)) for I in range(0, 31, 2))
    first, second = Tabulated(levels).derivatives(10.2)
    assert first == pytest.approx(21.0, rel=1e-14)
    assert second == pytest.approx(1.0, rel=1e-14)


def test_differences_need_both_neighbours():
    levels = tuple((I, I * (I + 1.0)) for I in range(0, 31, 2))
    with pytest.raises(SpectrumCoverageError) as excinfo:
        Tabulated(levels).derivatives(30.0)
    assert 32 in excinfo.value.missing
    uneven = Tabulated(((0, 0.0), (2, 6.0), (3, 12.0), (4, 20.0)))
    with pytest.raises(SpectrumCoverageError):
        uneven.derivatives(2.0)


def test_sparse_band_is_refused():
    sparse = Tabulated(tuple((I, I * (I + 1.0)) for I in range(0, 41, 10)))
    with pytest.raises(SpectrumCoverageError) as excinfo:
        sparse.derivatives(20.0)
    assert excinfo.value.missing == [18, 19, 21, 22]
    assert sparse.energies([20]).tolist() == [420.0]


def test_descriptors_rebuild_equal_models():
    ideal = IdealRotor(0.25)
    table = Tabulated(((0, 0.0), (2, 1.5), (4, 5.0)))
    assert build_spectrum(ideal.descriptor()) == ideal
    assert build_spectrum(table.descriptor()) == table
    assert {"ideal", "tabulated"} <= set(registered_kinds())


def test_unknown_or_malformed_descriptor():
    with pytest.raises(ConfigurationError):
        build_spectrum({"kind": "morse"})
    with pytest.raises(ConfigurationError):
        build_spectrum({"kind": "ideal"})


def test_register_adds_a_kind(monkeypatch):
    from rotorwave import spectra

    monkeypatch.setattr(spectra, "_REGISTRY", dict(spectra._REGISTRY))

    @register("linear-test")
    class Linear(SpectrumModel):
        def __init__(self, a):
            self.a = a

        def energies(self, I):
            return self.a * np.asarray(I, dtype=float)

        def derivatives(self, i_bar):
            return self.a, 0.0

        def descriptor(self):
            return {"kind": self.kind, "a": self.a}

        @classmethod
        def from_descriptor(cls, data):
            return cls(data["a"])

    built = build_spectrum({"kind": "linear-test", "a": 2.0})
    assert isinstance(built, Linear)
    assert built.energies([3]).tolist() == [6.0]
