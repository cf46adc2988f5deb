import warnings

import numpy as np
import pytest
from hypothesis import given, settings

from prescribed_zeros.analytic import constant, exp, polynomial
from prescribed_zeros.blaschke import BlaschkeProduct
from prescribed_zeros.builder import (
    build_coefficient,
    corona_coefficient,
    interpolation_targets,
    kernel_matrix,
    ode_residual,
    solve_interpolation,
    zero_free_example,
)
from prescribed_zeros.errors import DegenerateInputError, PreconditionError
from prescribed_zeros.geometry import make_grid
from prescribed_zeros.sequences import PointSequence
from tests.strategies import separated_sequences


def test_single_zero_at_origin_gives_zero_coefficient():
    b = build_coefficient(PointSequence([0.0]))
    z = make_grid(0.99, 6, 32).points
    assert np.max(np.abs(b.A(z))) == 0.0
    assert np.max(np.abs(b.f(z) - z)) <= 1e-14


def test_single_zero_target():
    # B = (a - z)/(1 - a z): B'' / B'^2 at a equals 2a / ... ; target -B''/(2B'^2) = a
    p = interpolation_targets(PointSequence([0.5]))
    B = BlaschkeProduct(PointSequence([0.5]))
    _, d1, d2, _ = B.derivatives(0.5)
    assert p.targets[0] == pytest.approx(-d2 / (2 * d1**2))


def test_empty_sequence_refused():
    with pytest.raises(DegenerateInputError):
        build_coefficient(PointSequence([]))


def test_kernel_matrix_diagonal():
    seq = PointSequence([0.5, 0.2j])
    M = kernel_matrix(seq)
    assert np.allclose(np.diag(M), 1.0)


@settings(max_examples=15)
@given(separated_sequences(1, 5, max_modulus=0.8, min_rho=0.3))
def test_interpolant_hits_targets(pts):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        prob = interpolation_targets(PointSequence(pts))
    k = solve_interpolation(prob)
    assert np.allclose(k(prob.nodes.points), prob.targets, atol=1e-8 * max(1, np.max(np.abs(prob.targets))))


@settings(max_examples=10)
@given(separated_sequences(1, 5, max_modulus=0.8, min_rho=0.3))
def test_built_solution_vanishes_and_solves_ode(pts):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        b = build_coefficient(PointSequence(pts), check_points=30)
    assert np.max(np.abs(b.f(b.zeros.points))) < 1e-12
    assert b.diagnostics["ode_identity_residual"] < 1e-7
    # f' does not vanish at the prescribed zeros
    _, d1, _, _ = b.f.derivatives(b.zeros.points)
    assert np.min(np.abs(d1)) > 0


def test_scalar_and_vector_paths_agree(small_bundle):
    rng = np.random.default_rng(1)
    z = 0.99 * np.sqrt(rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
    z = np.concatenate([z, small_bundle.zeros.points + 1e-4])
    vec = small_bundle.A(z)
    sc = np.array([small_bundle.A.scalar(v) for v in z])
    assert np.allclose(sc, vec, rtol=1e-11, atol=1e-11)


def test_coefficient_regular_at_zeros(small_bundle):
    z = small_bundle.zeros.points
    v = small_bundle.A(z)
    assert np.all(np.isfinite(v))
    near = small_bundle.A(z + 1e-3)
    assert np.allclose(v, near, rtol=0.05, atol=1.0)


def test_ode_residual_closed_form(small_bundle):
    z = np.array([0.1, -0.2 + 0.4j, 0.7j])
    assert np.max(ode_residual(small_bundle.A, small_bundle.f, z)) < 1e-9


def test_zero_free_example_g_zero():
    pair = zero_free_example(constant(0.0))
    z = make_grid(0.95, 5, 16).points
    assert np.max(np.abs(pair.A(z) + 1.0)) < 1e-12
    assert np.allclose(pair.f1(z), np.exp(z), rtol=1e-12)
    assert np.allclose(pair.f2(z), np.exp(-z), rtol=1e-12)
    assert pair.inf_grid_sum > 0


def test_zero_free_example_general_g():
    g = polynomial([0.1, 0.3j, 0.2])
    pair = zero_free_example(g)
    z = np.array([0.2, -0.4j, 0.5 + 0.3j])
    for F in (pair.f1, pair.f2):
        f0, _, f2, _ = F.derivatives(z)
        assert np.allclose(f2 + pair.A(z) * f0, 0, atol=1e-10)


def test_corona_coefficient():
    e = exp(polynomial([0, 1]))
    em = exp(polynomial([0, -1])) * 0.5
    A = corona_coefficient(e, e, em, em)
    z = make_grid(0.95, 5, 16).points
    assert np.max(np.abs(A(z) + 1.0)) < 1e-12
    with pytest.raises(PreconditionError):
        corona_coefficient(e, e, em, em * 2.0)
