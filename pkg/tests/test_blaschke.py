import numpy as np
import pytest
from hypothesis import given

from prescribed_zeros.analytic import AnalyticFunction, polynomial
from prescribed_zeros.blaschke import BlaschkeProduct, schwarz_bound_check
from prescribed_zeros.errors import PreconditionError
from prescribed_zeros.geometry import make_grid
from prescribed_zeros.sequences import PointSequence, uniform_separation_products
from tests.strategies import disc_points, separated_sequences


def test_single_factor_oracle():
    B = BlaschkeProduct(PointSequence([0.5]))
    # c = |a|/a = 1, B(z) = (0.5 - z) / (1 - 0.5 z)
    assert B(0) == pytest.approx(0.5)
    assert B(0.5) == pytest.approx(0.0)
    d1, w = B.derivative_at_zero(0)
    assert d1 == pytest.approx(-1 / 0.75)
    assert w == pytest.approx(1.0)


def test_zero_at_origin_uses_minus_one():
    B = BlaschkeProduct(PointSequence([0.0]))
    assert B(0.3) == pytest.approx(0.3)


def test_empty_product_is_one():
    B = BlaschkeProduct(PointSequence([]))
    assert np.all(B(np.array([0.1, 0.5j])) == 1)


@given(separated_sequences(1, 6), disc_points(0.99))
def test_modulus_bounded_and_unimodular_on_circle(pts, z):
    B = BlaschkeProduct(PointSequence(pts))
    assert abs(B(z)) <= 1 + 1e-12
    u = np.exp(1j * np.linspace(0, 2 * np.pi, 16))
    # evaluate just inside the circle
    assert np.allclose(np.abs(B(0.999999 * u)), 1.0, atol=1e-4)


@given(separated_sequences(1, 6), disc_points(0.9))
def test_closed_form_jet_matches_cauchy(pts, z):
    B = BlaschkeProduct(PointSequence(pts))
    num = AnalyticFunction(lambda s: B(s), None)
    for a, b in zip(B.derivatives(z), num.derivatives(z)):
        assert abs(a - b) < 1e-6 * max(1.0, abs(a))


@given(separated_sequences(2, 6, min_rho=0.2))
def test_factorised_derivatives_at_zeros(pts):
    if len(pts) < 2:
        return
    seq = PointSequence(pts)
    B = BlaschkeProduct(seq)
    d1, d2 = B.derivatives_at_zeros()
    _, j1, j2, _ = B.derivatives(seq.points)
    assert np.allclose(d1, j1, rtol=1e-9, atol=1e-12)
    assert np.allclose(d2, j2, rtol=1e-8, atol=1e-10)
    # the weighted derivative at z_n equals the product of the other rho-distances
    w = np.array([B.derivative_at_zero(n)[1] for n in range(len(seq))])
    assert np.allclose(w, uniform_separation_products(seq), rtol=1e-10)


def test_schwarz_bound_check():
    g = polynomial([0, 1])
    grid = make_grid(0.9, 6, 32)
    rep = schwarz_bound_check(g, 0.0, 0.5, 2.0, grid, norm=1.0)
    assert rep.n_points > 0 and rep.max_ratio == pytest.approx(1.0)
    with pytest.raises(PreconditionError):
        schwarz_bound_check(g, 0.3, 0.5, 2.0, grid)
    with pytest.raises(PreconditionError):
        schwarz_bound_check(g, 0.0, 1.5, 2.0, grid)


def test_schwarz_bound_for_blaschke_product_is_finite():
    g = BlaschkeProduct(PointSequence([0.0, 0.5]))
    rep = schwarz_bound_check(g, 0.0, 0.3, 0.0, make_grid(0.29, 6, 32))
    assert rep.n_points > 0 and np.isfinite(rep.max_ratio)
