import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from prescribed_zeros.analytic import constant, polynomial
from prescribed_zeros.carleson import (
    AreaMeasureSpec,
    CarlesonBox,
    PointMeasure,
    PolarQuadrature,
    area_invariant_profile,
    box_constant,
    dyadic_boxes,
    invariant_constant_area,
    invariant_constant_point,
    kernel,
)
from prescribed_zeros.errors import DiscDomainError
from prescribed_zeros.geometry import DiscGrid, make_grid
from prescribed_zeros.sequences import PointSequence
from tests.strategies import disc_points, separated_sequences

ORIGIN = DiscGrid.from_points([0j])


def test_single_point_invariant_constant():
    # sup_a K_a(0.5) (1 - 0.5) is attained at a = 0.5: (4/3)(1/2)
    res = invariant_constant_point(PointMeasure(PointSequence([0.5]), 1.0))
    assert res.constant == pytest.approx(2.0 / 3.0, abs=1e-6)
    assert res.maximizer == pytest.approx(0.5)


@pytest.mark.parametrize("p", [0.25, 0.5, 1.0])
def test_area_constant_of_unit_coefficient_at_origin(p):
    # int (1 - |z|^2)^(2 + p) dm = pi / (3 + p)
    res = invariant_constant_area(AreaMeasureSpec(constant(1.0), p), ORIGIN)
    assert res.constant == pytest.approx(math.pi / (3 + p), rel=5e-3)
    assert res.stable


def test_area_profile_stable_for_polynomial():
    A = polynomial([1.0, 0.5])
    prof = area_invariant_profile(A, [1.0], DiscGrid.from_points([0j, 0.3]), refine_top=2)
    assert prof[1.0].constant > 0 and prof[1.0].refinement_delta < 0.01


def test_kernel_at_own_centre():
    assert kernel(0.5, 0.5, 1.0) == pytest.approx(1.0 / 0.75)
    assert kernel(0.0, 0.3j, 0.5) == pytest.approx(1.0)


@given(disc_points(0.95), disc_points(0.95), st.floats(0.1, 1.0))
def test_kernel_positive_and_bounded(a, z, p):
    v = kernel(a, z, p)
    assert 0 < v <= (4.0 / (1 - abs(a) ** 2)) ** p + 1e-12


@settings(max_examples=20)
@given(separated_sequences(1, 6), st.sampled_from([0.25, 0.5, 1.0]))
def test_point_constants_finite(pts, p):
    m = PointMeasure(PointSequence(pts), p)
    inv = invariant_constant_point(m)
    box = box_constant(m)
    assert 0 < inv.constant < math.inf
    assert 0 <= box.constant < math.inf


def test_box_constant_single_atom():
    m = PointMeasure(PointSequence([0.5]), 1.0)
    res = box_constant(m, [CarlesonBox(0.0, 1.0), CarlesonBox(0.0, 0.5)])
    # mass 0.5, best box has |I| = 0.5
    assert res.constant == pytest.approx(1.0)


def test_box_contains():
    b = CarlesonBox(0.0, 0.25)
    assert b.contains(0.9)
    assert not b.contains(-0.9)
    assert not b.contains(0.5)
    with pytest.raises(DiscDomainError):
        CarlesonBox(0.0, 2.0)


def test_dyadic_boxes_count():
    assert len(dyadic_boxes(2)) == 2 + 4 + 8


def test_area_box_constant_runs():
    res = box_constant(AreaMeasureSpec(constant(1.0), 1.0, 0.99), dyadic_boxes(3))
    assert res.constant > 0 and res.refinement_delta is not None


def test_empty_point_measure():
    res = invariant_constant_point(PointMeasure(PointSequence([]), 0.5))
    assert res.constant == 0.0


def test_exponent_validation():
    with pytest.raises(DiscDomainError):
        PointMeasure(PointSequence([0.1]), 0.0)
    with pytest.raises(DiscDomainError):
        AreaMeasureSpec(constant(1.0), 1.5)
    with pytest.raises(DiscDomainError):
        area_invariant_profile(constant(1.0), [2.0], ORIGIN)


def test_refined_quadrature_doubles():
    q = PolarQuadrature().refined()
    assert q.radial_nodes == 12 and q.angular_min == 64


def test_profile_matches_direct_sum_for_small_grid():
    A = polynomial([0.0, 1.0])
    grid = make_grid(0.5, 2, 4).union([0j])
    prof = area_invariant_profile(A, [0.5, 1.0], grid, refine_top=len(grid))
    single = invariant_constant_area(AreaMeasureSpec(A, 1.0), grid)
    assert prof[1.0].constant == pytest.approx(single.constant, rel=1e-3)


def test_box_and_invariant_constants_comparable():
    seqs = [
        [0.5],
        [0.5, -0.5, 0.3j],
        list(PointSequence.exponential(8).points),
        [0.9 * np.exp(2j * np.pi * k / 12) for k in range(12)],
        [0.0, 0.99, -0.99j],
    ]
    ratios = []
    for pts in seqs:
        for p in (0.25, 0.5, 1.0):
            m = PointMeasure(PointSequence(pts), p)
            ratios.append(invariant_constant_point(m).constant / box_constant(m).constant)
    # comparability on this suite: a single positive c with invariant >= c * box
    c = min(ratios)
    assert c > 0.1
