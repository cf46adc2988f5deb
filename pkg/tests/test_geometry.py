import numpy as np
import pytest
from hypothesis import given

from prescribed_zeros.errors import DiscDomainError
from prescribed_zeros.geometry import (
    DiscGrid,
    PseudoDisc,
    automorphism,
    automorphism_derivatives,
    cayley,
    disc_point,
    grid_radii,
    make_grid,
    pseudo_distance,
)
from tests.strategies import disc_points


def test_pseudo_distance_oracles():
    assert pseudo_distance(0, 0.5) == pytest.approx(0.5, abs=1e-15)
    # rho(0.5, -0.5) = 1 / (1 + 0.25)
    assert pseudo_distance(0.5, -0.5) == pytest.approx(0.8, abs=1e-15)
    assert isinstance(pseudo_distance(0.1, 0.2j), float)


def test_disc_point_rejects_boundary_and_nan():
    for bad in (1.0, 1j, 2.0, complex("nan")):
        with pytest.raises(DiscDomainError):
            disc_point(bad)


def test_automorphism_examples():
    phi = automorphism(0.5)
    assert phi(0) == pytest.approx(0.5)
    assert phi(0.5) == pytest.approx(0.0)
    assert automorphism(0)(0.3 + 0.2j) == pytest.approx(-(0.3 + 0.2j))


@given(disc_points(), disc_points())
def test_automorphism_is_involution(a, z):
    phi = automorphism(a)
    assert abs(phi(phi(z)) - z) < 1e-10


@given(disc_points(), disc_points(), disc_points())
def test_pseudo_distance_is_mobius_invariant(a, z, w):
    phi = automorphism(a)
    assert abs(pseudo_distance(phi(z), phi(w)) - pseudo_distance(z, w)) < 1e-9


@given(disc_points(), disc_points())
def test_pseudo_distance_symmetric_and_bounded(z, w):
    d = pseudo_distance(z, w)
    assert 0.0 <= d < 1.0
    assert d == pytest.approx(pseudo_distance(w, z), abs=1e-14)


@given(disc_points(), disc_points(0.9))
def test_automorphism_derivative_matches_difference_quotient(a, z):
    phi = automorphism(a)
    d1, _, _ = automorphism_derivatives(a, z)
    h = 1e-6
    fd = (phi(z + h) - phi(z - h)) / (2 * h)
    assert abs(fd - d1) < 1e-6 * max(1.0, abs(d1))


def test_cayley():
    assert cayley(1j) == pytest.approx(0.0)
    w = cayley(np.array([1 + 1j, -3 + 0.1j]))
    assert np.all(np.abs(w) < 1)
    with pytest.raises(DiscDomainError):
        cayley(1.0)


def test_pseudo_disc_contains():
    d = PseudoDisc(0.5, 0.3)
    assert d.contains(0.5)
    assert not d.contains(0.0)


def test_grid_radii_geometric():
    r = grid_radii(0.999, 5)
    assert r[-1] == pytest.approx(0.999)
    gaps = 1 - r
    assert np.allclose(gaps[:-1] / gaps[1:], 2.0)
    # ratio is reduced when doubling would reach the origin
    assert np.all(grid_radii(0.5, 8) > 0)


def test_make_grid_shapes_and_union():
    g = make_grid(0.99, 4, 16)
    assert len(g) == 64
    assert g.max_modulus == pytest.approx(0.99)
    u = g.union([0j])
    assert len(u) == 65 and u.scheme == "custom"
    pg = make_grid(0.9, 3, 8, "pseudo-uniform")
    assert np.max(np.abs(pg.points)) <= 0.9 + 1e-12
    with pytest.raises(DiscDomainError):
        DiscGrid.from_points([])
