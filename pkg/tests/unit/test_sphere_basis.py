import math
from decimal import Decimal, localcontext

import numpy as np
import pytest
from scipy.special import lpmv

from rotorwave.core.errors import ConfigurationError, DomainError
from rotorwave.engine.sphere_basis import (
    HarmonicIndex,
    QuadratureGrid,
    gauss_legendre,
    iter_legendre_columns,
    legendre_table,
    normalized_legendre,
    project,
    synthesize,
    table_shape,
    valid_mask,
    ylm,
)


def _oracle(l, m, x):
    norm = math.sqrt((2 * l + 1) / 2 * math.factorial(l - m) / math.factorial(l + m))
    return norm * lpmv(m, l, x)


def _random_table(l_max, seed=0):
    rng = np.random.default_rng(seed)
    table = rng.normal(size=table_shape(l_max)) + 1j * rng.normal(size=table_shape(l_max))
    table[~valid_mask(l_max)] = 0.0
    return table


def test_low_order_closed_forms():
    x = 0.3
    s = math.sqrt(1 - x * x)
    assert normalized_legendre(0, 0, x) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert normalized_legendre(1, 0, x) == pytest.approx(math.sqrt(1.5) * x, abs=1e-15)
    # Condon-Shortley sign on the sectoral term
    assert normalized_legendre(1, 1, x) == pytest.approx(-math.sqrt(3) / 2 * s, abs=1e-15)
    assert normalized_legendre(2, 0, x) == pytest.approx(
        math.sqrt(2.5) * (3 * x * x - 1) / 2, abs=1e-15
    )


def test_matches_unnormalized_oracle_up_to_degree_20():
    xs = np.linspace(-0.99, 0.99, 7)
    for l in range(21):
        for m in range(l + 1):
            for x in xs:
                assert normalized_legendre(l, m, x) == pytest.approx(
                    _oracle(l, m, x), abs=1e-9, rel=1e-9
                )


def test_table_agrees_with_scalar_and_oracle():
    xs = np.array([-0.8, -0.1, 0.0, 0.45, 0.97])
    table = legendre_table(20, xs)
    assert table.shape == (21, 21, 5)
    for l in range(21):
        for m in range(l + 1):
            expected = np.array([_oracle(l, m, x) for x in xs])
            assert np.allclose(table[l, m], expected, rtol=1e-9, atol=1e-9)
    assert np.all(table[3, 5] == 0.0)


def test_high_degree_stays_finite():
    value = normalized_legendre(400, 400, 0.3)
    assert math.isfinite(value) and value != 0.0
    for _, column in iter_legendre_columns(400, np.array([0.3, 0.999])):
        assert np.all(np.isfinite(column))


def test_sectoral_value_against_extended_precision():
    with localcontext() as ctx:
        ctx.prec = 50
        l = 40
        expected = (
            (-1) ** l
            * (Decimal(2 * l + 1) / 2 * math.factorial(2 * l)).sqrt()
            / (Decimal(2) ** l * math.factorial(l))
            * Decimal("0.75") ** (l // 2)
        )
    assert normalized_legendre(40, 40, 0.5) == pytest.approx(float(expected), rel=1e-12)


def test_orthonormality_under_gauss_legendre():
    x, w = gauss_legendre(40)
    table = legendre_table(15, x)
    for m in range(4):
        block = table[m:, m, :]
        gram = (block * w) @ block.T
        assert np.allclose(gram, np.eye(block.shape[0]), atol=1e-12)


def test_invalid_indices_are_rejected():
    with pytest.raises(DomainError):
        HarmonicIndex(2, 3)
    with pytest.raises(DomainError):
        normalized_legendre(-1, 0, 0.2)
    with pytest.raises(DomainError):
        normalized_legendre(2, 1, 1.5)


def test_ylm_low_orders():
    theta, phi = 0.7, 1.9
    y11 = ylm(HarmonicIndex(1, 1), theta, phi)
    assert y11 == pytest.approx(
        -math.sqrt(3 / (8 * math.pi)) * math.sin(theta) * np.exp(1j * phi), abs=1e-14
    )
    y1m1 = ylm(HarmonicIndex(1, -1), theta, phi)
    assert y1m1 == pytest.approx(-np.conj(y11), abs=1e-14)
    y10 = ylm(HarmonicIndex(1, 0), theta, phi)
    assert y10 == pytest.approx(math.sqrt(3 / (4 * math.pi)) * math.cos(theta), abs=1e-14)


def test_synthesize_matches_direct_sum():
    l_max = 5
    table = _random_table(l_max, seed=3)
    theta, phi = 1.1, -0.4
    direct = sum(
        table[I, M + l_max] * ylm(HarmonicIndex(I, M), theta, phi)
        for I in range(l_max + 1)
        for M in range(-I, I + 1)
    )
    assert synthesize(table, theta, phi) == pytest.approx(direct, abs=1e-12)


def test_quadrature_weights_cover_the_sphere():
    grid = QuadratureGrid.for_lmax(10, 2)
    assert grid.weights.sum() == pytest.approx(4 * math.pi, rel=1e-14)
    assert len(grid.nodes) == grid.n_theta * grid.n_phi
    assert grid.resolves(10) and not grid.resolves(11 * 2)


def test_projection_inverts_synthesis():
    l_max = 8
    table = _random_table(l_max, seed=1)
    grid = QuadratureGrid.for_lmax(l_max, 2)
    recovered = project(lambda th, ph: synthesize(table, th, ph), l_max, grid)
    assert np.allclose(recovered, table, atol=1e-11)


def test_projection_matches_brute_force_quadrature():
    l_max = 6

    def f(theta, phi):
        return np.exp(np.sin(theta) * np.cos(phi) + 0.5j * np.cos(theta))

    grid = QuadratureGrid.for_lmax(l_max, 3)
    fast = project(f, l_max, grid)
    theta, phi = grid.mesh()
    values = f(theta, phi)
    for I in range(l_max + 1):
        for M in range(-I, I + 1):
            y = np.vectorize(lambda t, p: ylm(HarmonicIndex(I, M), t, p))(theta, phi)
            slow = grid.integrate(np.conj(y) * values)
            assert fast[I, M + l_max] == pytest.approx(slow, abs=1e-9)


def test_under_resolved_grid_is_refused():
    with pytest.raises(ConfigurationError):
        project(lambda th, ph: np.ones_like(th), 8, QuadratureGrid(4, 17))
    with pytest.raises(ConfigurationError):
        QuadratureGrid(0, 4)
