import math

import numpy as np
import pytest

from rotorwave.core.errors import DomainError, SpectrumCoverageError, ValidationError
from rotorwave.engine.coherent_state import CoherentStateParams, expand_cs, suggest_lmax
from rotorwave.engine.evolution import (
    autocorrelation,
    autocorrelation_series,
    propagate,
    timescales,
)
from rotorwave.engine.wavepacket import WavePacket
from rotorwave.ingest import bundled_levels, surrogate_amplitudes
from rotorwave.settings import settings
from rotorwave.spectra import IdealRotor, Tabulated


@pytest.fixture
def surrogate():
    return surrogate_amplitudes(10.0, 3.0, 40).to_wavepacket()


def test_ideal_rotor_timescales():
    ts = timescales(IdealRotor(1.0), 10.0)
    assert ts.t_rev == pytest.approx(2 * math.pi, rel=1e-14)
    assert ts.t_cl == pytest.approx(2 * math.pi / 21, rel=1e-14)
    assert ts.fundamental_period == pytest.approx(math.pi, rel=1e-14)


def test_tabulated_ideal_band_gives_the_same_timescales():
    levels = tuple((I, I * (I + 1.0)) for I in range(0, 41, 2))
    ts = timescales(Tabulated(levels), 10.0)
    assert ts.t_rev == pytest.approx(2 * math.pi, rel=1e-12)
    assert ts.t_cl == pytest.approx(2 * math.pi / 21, rel=1e-12)
    assert ts.fundamental_period is None


def test_timescales_need_a_rotating_packet():
    with pytest.raises(DomainError):
        timescales(IdealRotor(1.0), 0.5)
    flat = Tabulated(((0, 0.0), (2, 5.0), (4, 10.0), (6, 15.0)))
    with pytest.raises(ValidationError):
        timescales(flat, 2.0)


def test_uranium_band_in_seconds():
    scheme = bundled_levels()
    ts = timescales(scheme.to_spectrum(), 10.0)
    t_rev_s = settings.seconds(ts.t_rev)
    t_cl_s = settings.seconds(ts.t_cl)
    assert 1e-20 <= t_rev_s <= 1e-18
    assert 1e-21 <= t_cl_s <= 1e-19
    assert t_cl_s < t_rev_s


def test_zero_time_is_identity(surrogate):
    wp = propagate(surrogate, IdealRotor(1.0), 0.0)
    assert np.array_equal(wp.coeffs, surrogate.coeffs)


def test_norm_is_conserved(surrogate):
    for t in (0.1, 1.7, 123.4):
        wp = propagate(surrogate, IdealRotor(1.0), t)
        assert abs(wp.norm_squared() - surrogate.norm_squared()) < 1e-14


def test_full_revival_and_half_period(surrogate):
    rotor = IdealRotor(1.0)
    t_rev = timescales(rotor, surrogate.mean_i()).t_rev
    assert abs(autocorrelation(surrogate, propagate(surrogate, rotor, t_rev))) == pytest.approx(
        1.0, abs=1e-10
    )
    assert abs(
        autocorrelation(surrogate, propagate(surrogate, rotor, t_rev / 2))
    ) == pytest.approx(1.0, abs=1e-10)


def test_circular_state_returns_at_half_revival():
    params = CoherentStateParams(20.0, 1.0)
    wp = expand_cs(params, suggest_lmax(params, 1e-10), 1e-10)
    later = propagate(wp, IdealRotor(1.0), math.pi)
    assert abs(autocorrelation(wp, later)) / wp.norm_squared() == pytest.approx(1.0, abs=1e-12)


def test_group_law():
    wp = surrogate_amplitudes(8.0, 2.0, 16, even_only=False).to_wavepacket()
    rotor = IdealRotor(0.25)
    rng = np.random.default_rng(11)
    for t1, t2 in rng.uniform(0.0, 0.5, size=(100, 2)):
        stepped = propagate(propagate(wp, rotor, t1), rotor, t2)
        direct = propagate(wp, rotor, t1 + t2)
        assert np.max(np.abs(stepped.coeffs - direct.coeffs)) < 1e-13


def test_missing_levels_are_reported(surrogate):
    short = Tabulated(tuple((I, I * (I + 1.0)) for I in range(0, 11)))
    with pytest.raises(SpectrumCoverageError) as excinfo:
        propagate(surrogate, short, 1.0)
    assert 12 in excinfo.value.missing
    assert 11 not in excinfo.value.missing


def test_series_matches_pointwise_overlaps(surrogate):
    spectrum = Tabulated(tuple((I, 0.8 * I * (I + 1.0) + 1e-4 * I**3) for I in range(0, 41, 2)))
    times = np.linspace(0.0, 3.0, 13)
    series = autocorrelation_series(surrogate, spectrum, times)
    for t, value in zip(times, series):
        expected = autocorrelation(surrogate, propagate(surrogate, spectrum, t))
        assert value == pytest.approx(expected, abs=1e-12)


def test_overlap_needs_a_common_axis():
    a = WavePacket.from_entries([(1, 0, 1.0)], axis="z")
    b = WavePacket.from_entries([(1, 0, 1.0)], axis="x")
    with pytest.raises(ValidationError):
        autocorrelation(a, b)
