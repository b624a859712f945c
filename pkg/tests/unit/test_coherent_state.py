import math

import numpy as np
import pytest

from rotorwave.core.errors import DomainError, ResourceError, TruncationError, ValidationError
from rotorwave.engine.coherent_state import (
    CoherentStateParams,
    bandwidth,
    evaluate_cs,
    expand_cs,
    suggest_lmax,
)
from rotorwave.engine.sphere_basis import QuadratureGrid
from rotorwave.settings import settings


@pytest.mark.parametrize("N", [1.0, 5.0, 20.0])
@pytest.mark.parametrize("eta", [0.0, 0.3, 1.0])
def test_closed_form_is_normalized(N, eta):
    params = CoherentStateParams(N, eta)
    grid = QuadratureGrid(n_theta=200, n_phi=400)
    theta, phi = grid.mesh()
    density = np.abs(evaluate_cs(params, theta, phi)) ** 2
    assert grid.integrate(density) == pytest.approx(1.0, abs=1e-9)


def test_circular_state_has_only_stretched_components():
    params = CoherentStateParams(20.0, 1.0)
    wp = expand_cs(params, suggest_lmax(params, 1e-10), 1e-10)
    assert wp.axis == "z"
    off_diagonal = sum(abs(b) ** 2 for I, M, b in wp.items() if M != I)
    assert off_diagonal < 1e-10
    assert wp.norm_defect < 1e-10


def test_linear_state_is_axial_in_its_own_frame():
    params = CoherentStateParams(20.0, 0.0)
    wp = expand_cs(params, suggest_lmax(params, 1e-10), 1e-10)
    assert wp.axis == "x"
    off_axis = sum(abs(b) ** 2 for _, M, b in wp.items() if M != 0)
    assert off_axis < 1e-20


@pytest.mark.parametrize("eta", [0.0, 0.5, -0.7, 1.0])
def test_expansion_reproduces_closed_form(eta):
    params = CoherentStateParams(3.0, eta)
    wp = expand_cs(params, 40, 1e-12)
    rng = np.random.default_rng(7)
    theta = rng.uniform(0.0, math.pi, 25)
    phi = rng.uniform(0.0, 2 * math.pi, 25)
    assert np.allclose(wp.evaluate(theta, phi), evaluate_cs(params, theta, phi), atol=1e-9)


def test_truncation_below_tolerance_is_reported():
    params = CoherentStateParams(20.0, 1.0)
    with pytest.raises(TruncationError) as excinfo:
        expand_cs(params, 5, 1e-10)
    assert excinfo.value.l_max == 5
    assert excinfo.value.achieved_defect > 1e-10


def test_suggested_order_meets_tolerance():
    params = CoherentStateParams(5.0, 0.4)
    l_max = suggest_lmax(params, 1e-10)
    wp = expand_cs(params, l_max, 1e-10)
    assert 0.0 <= wp.norm_defect < 1e-10
    # bigger packets need more harmonics
    assert suggest_lmax(CoherentStateParams(20.0, 0.4), 1e-10) > l_max


def test_renormalize_keeps_recorded_defect():
    params = CoherentStateParams(2.0, 0.6)
    raw = expand_cs(params, 30, 1e-6)
    wp = expand_cs(params, 30, 1e-6, renormalize=True)
    assert wp.norm_squared() == pytest.approx(1.0, abs=1e-14)
    assert wp.norm_defect == raw.norm_defect


def test_lmax_cap_is_enforced(monkeypatch):
    monkeypatch.setattr(settings, "lmax_cap", 8)
    with pytest.raises(ResourceError):
        suggest_lmax(CoherentStateParams(20.0, 1.0), 1e-10)


@pytest.mark.parametrize("N, eta", [(0.0, 0.5), (-1.0, 0.5), (float("inf"), 0.5), (1.0, 1.2)])
def test_parameters_outside_domain(N, eta):
    with pytest.raises(DomainError):
        CoherentStateParams(N, eta)


def test_large_n_prefactor_does_not_overflow():
    params = CoherentStateParams(400.0, 1.0)
    assert math.isfinite(params.log_prefactor())
    assert np.isfinite(evaluate_cs(params, math.pi / 2, 0.0))


def test_flipping_eta_mirrors_the_m_columns():
    forward = expand_cs(CoherentStateParams(5.0, 0.4), 30, 1e-10)
    mirrored = expand_cs(CoherentStateParams(5.0, -0.4), 30, 1e-10)
    assert np.allclose(np.abs(forward.coeffs), np.abs(mirrored.coeffs[:, ::-1]), atol=1e-12)


def test_circular_weights_peak_below_n():
    params = CoherentStateParams(20.0, 1.0)
    wp = expand_cs(params, suggest_lmax(params, 1e-10), 1e-10, renormalize=True)
    # weights ∝ (2N)^{2I+1}/(2I+1)!, so the mean is (2N coth 2N - 1) / 2
    assert int(np.argmax(wp.i_weights())) == 19
    assert wp.mean_i() == pytest.approx(19.5, abs=1e-6)


@pytest.mark.parametrize(
    "N, eta, tol", [(0.5, 0.3, 1e-2), (0.5, 1.0, 1e-2), (0.5, -0.4, 1e-2), (20.0, 1.0, 1e-10)]
)
def test_suggested_order_is_the_smallest(N, eta, tol):
    params = CoherentStateParams(N, eta)
    l_max = suggest_lmax(params, tol)
    expand_cs(params, l_max, tol)
    for lower in {l_max - 1, l_max - 5}:
        if lower < 0:
            continue
        with pytest.raises(TruncationError):
            expand_cs(params, lower, tol)


def test_suggested_order_grows_with_tightening_tolerance():
    params = CoherentStateParams(20.0, 0.3)
    orders = [suggest_lmax(params, tol) for tol in (1e-4, 1e-8, 1e-12)]
    assert orders == sorted(orders)
    assert all(suggest_lmax(CoherentStateParams(0.5, eta), 1e-6) <= 10 for eta in (0.0, 0.5, 1.0))


def test_low_order_projection_reports_the_true_defect():
    params = CoherentStateParams(0.5, 0.3)
    with pytest.raises(TruncationError) as excinfo:
        expand_cs(params, 0, 1e-2)
    # |⟨Y00|Ψ⟩|² = 2N sinh²k / (k² sinh 2N) with k = N√(1 - η²)
    k = 0.5 * math.sqrt(1.0 - 0.3**2)
    p_0 = math.sinh(k) ** 2 / (k * k * math.sinh(1.0))
    assert excinfo.value.achieved_defect == pytest.approx(1.0 - p_0, rel=1e-10)

    reference = expand_cs(params, 30, 1e-12)
    truncated = expand_cs(params, 2, 1.0)
    expected = 1.0 - float(np.sum(reference.i_weights()[:3]))
    assert truncated.norm_defect == pytest.approx(expected, abs=1e-13)
    assert truncated.norm_defect > 0.0


def test_bandwidth_exceeds_the_packet_size():
    for N in (0.5, 3.0, 20.0):
        assert bandwidth(CoherentStateParams(N, 0.0)) > N


def test_overshooting_projection_is_refused(monkeypatch):
    monkeypatch.setattr(
        "rotorwave.engine.coherent_state._project_cs",
        lambda params, l_max, oversample: np.full((l_max + 1, 2 * l_max + 1), 1.0 + 0j),
    )
    with pytest.raises(ValidationError):
        expand_cs(CoherentStateParams(1.0, 1.0), 2, 1e-6)
