import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from prescribed_zeros.errors import DegenerateInputError, DiscDomainError, SequenceFormatError
from prescribed_zeros.sequences import (
    LatticeParams,
    PointSequence,
    blaschke_sum,
    boundary_log_distance,
    counting_integral,
    density_lower,
    density_upper,
    dumps_sequence,
    lattice_j_bounds,
    loads_sequence,
    local_separation,
    read_sequence,
    seip_lattice,
    seip_lattice_truncated,
    separation_constant,
    uniform_separation_constant,
    write_sequence,
)
from tests.strategies import disc_points, separated_sequences


def test_exponential_sequence():
    s = PointSequence.exponential(3)
    assert np.allclose(s.points, [0.5, 0.75, 0.875])
    assert blaschke_sum(s) == pytest.approx(0.875)


def test_duplicates_rejected():
    with pytest.raises(DegenerateInputError):
        PointSequence([0.1, 0.1])
    with pytest.raises(DiscDomainError):
        PointSequence([1.0])


def test_separation_two_points():
    s = PointSequence([0.5, -0.5])
    assert separation_constant(s) == pytest.approx(0.8)
    assert uniform_separation_constant(s) == pytest.approx(0.8)
    assert np.all(local_separation(PointSequence([0.2])) == 1.0)
    with pytest.raises(DegenerateInputError):
        separation_constant(PointSequence([0.2]))


@given(separated_sequences())
def test_uniform_separation_below_separation(pts):
    if len(pts) < 2:
        return
    s = PointSequence(pts)
    assert uniform_separation_constant(s) <= separation_constant(s) + 1e-15


def test_counting_integral_closed_form():
    s = PointSequence([0.0, 0.5])
    # from zeta = 0: rho = 0 and 0.5, r = 0.75
    assert counting_integral(s, 0j, 0.75) == pytest.approx(0.75 + 0.25)
    with pytest.raises(DiscDomainError):
        counting_integral(s, 0j, 1.0)


@given(st.lists(disc_points(0.95), min_size=1, max_size=8, unique=True), disc_points(0.9), st.floats(0.05, 0.95))
def test_counting_integral_monotone_in_r(pts, zeta, r):
    s = PointSequence(pts)
    a = counting_integral(s, zeta, r * 0.5)
    b = counting_integral(s, zeta, r)
    assert 0 <= a <= b


def test_density_estimates_ordered():
    s = seip_lattice_truncated(math.exp(2 * math.pi), 2.0, 1e-3)
    up = density_upper(s, 0.9)
    lo = density_lower(s, 0.9)
    assert lo.value <= up.value
    assert up.r_max == 0.9


def test_boundary_log_distance_oracle():
    # int log|e^{it} - a| dt = 0 for |a| < 1
    assert abs(boundary_log_distance(PointSequence([0.5]))) < 1e-8
    with pytest.raises(DegenerateInputError):
        boundary_log_distance(PointSequence([]))


def test_lattice_params_and_guard():
    p = LatticeParams(math.exp(2 * math.pi), 2.0)
    assert p.density == pytest.approx(0.5)
    with pytest.raises(DiscDomainError):
        LatticeParams(1.0, 1.0)
    with pytest.raises(DiscDomainError):
        LatticeParams(2.0, -1.0)


def test_truncated_lattice_matches_index_enumeration():
    a, b, eps = 3.0, 1.5, 1e-2
    lo, hi = lattice_j_bounds(a, eps)
    full = seip_lattice(LatticeParams(a, b, (lo - 2, hi + 2), (-200, 200)))
    trunc = seip_lattice_truncated(a, b, eps)
    keep = full.points[np.abs(full.points) < 1 - eps]
    assert sorted(np.round(keep, 12), key=lambda z: (z.real, z.imag)) == sorted(
        np.round(trunc.points, 12), key=lambda z: (z.real, z.imag)
    )


def test_nested_truncations_increase_blaschke_sum():
    a, b = math.exp(2 * math.pi), 2.0
    sums = [blaschke_sum(seip_lattice_truncated(a, b, eps)) for eps in (1e-1, 1e-2, 1e-3, 1e-4)]
    assert all(x < y for x, y in zip(sums, sums[1:]))


def test_sequence_roundtrip(tmp_path):
    s = PointSequence([0.1 + 0.2j, -0.5])
    path = tmp_path / "s.json"
    write_sequence(s, path)
    assert read_sequence(path) == s
    assert loads_sequence(dumps_sequence(s)) == s


@pytest.mark.parametrize(
    "text, where",
    [
        ("", "line 1 column 1"),
        ('{"pts": []}', "document"),
        ('{"points": []}', "points"),
        ('{"points": [{"re": 1.0, "im": 0.0}]}', "points[0]"),
        ('{"points": [{"re": "x", "im": 0.0}]}', "points[0].re"),
        ('{"points": [{"re": 0.1, "im": 0.0}, {"re": 0.1, "im": 0.0}]}', "points[1]"),
    ],
)
def test_sequence_format_errors_locate_the_problem(text, where):
    with pytest.raises(SequenceFormatError) as exc:
        loads_sequence(text)
    assert where in str(exc.value)


def test_lattice_ring_sums_grow_linearly():
    # a=2, b=5: rings j = 0, -1, ..., -20 lie well inside the truncation
    from prescribed_zeros.sequences import lattice_ring

    contrib = np.array([np.sum(1 - np.abs(lattice_ring(2.0, 5.0, j, 1e-8))) for j in range(0, -21, -1)])
    partial = np.cumsum(contrib)
    m = np.arange(1, partial.size + 1)
    c = float(np.min(partial / m))
    assert c > 0.5
    assert np.all(partial >= c * m) and np.all(np.diff(partial) > 0)


@given(st.lists(disc_points(0.9), min_size=1, max_size=6, unique=True))
def test_density_proxy_of_finite_sequence_decays(pts):
    s = PointSequence(pts)
    assert density_upper(s, 1 - 1e-8).value < density_upper(s, 1 - 1e-2).value
