"""Pseudo-hyperbolic geometry of the unit disc.

Points of the disc are plain Python/numpy complex numbers. Functions accept
scalars or arrays and broadcast like numpy ufuncs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import DiscDomainError

#: Points with modulus at or above ``1 - BOUNDARY_TOL`` are rejected.
BOUNDARY_TOL = 1e-12


def disc_point(z) -> complex:
    """Validate ``z`` as an interior point of the disc and return it as complex."""
    z = complex(z)
    if not np.isfinite(z.real) or not np.isfinite(z.imag) or abs(z) >= 1.0 - BOUNDARY_TOL:
        raise DiscDomainError(f"point {z!r} is not strictly inside the unit disc")
    return z


def disc_points(zs) -> np.ndarray:
    """Array version of :func:`disc_point`."""
    arr = np.asarray(zs, dtype=complex).ravel()
    if arr.size and (not np.all(np.isfinite(arr)) or np.max(np.abs(arr)) >= 1.0 - BOUNDARY_TOL):
        raise DiscDomainError("all points must lie strictly inside the unit disc")
    return arr


def pseudo_distance(z, w):
    """Pseudo-hyperbolic distance ``|z - w| / |1 - conj(z) w|``.

    The denominator cannot vanish for interior points, so no guard is needed.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    out = np.abs(z - w) / np.abs(1.0 - np.conj(z) * w)
    return float(out) if out.ndim == 0 else out


def automorphism(a):
    """Return the involutive disc automorphism ``z -> (a - z) / (1 - conj(a) z)``."""
    a = complex(a)
    ac = a.conjugate()

    def phi(z):
        z = np.asarray(z, dtype=complex)
        out = (a - z) / (1.0 - ac * z)
        return complex(out) if out.ndim == 0 else out

    return phi


def automorphism_derivatives(a, z):
    """First three derivatives of ``phi_a`` at ``z``.

    ``phi_a'(z) = -(1 - |a|^2) / (1 - conj(a) z)^2`` and the higher ones follow
    by differentiating the power of ``1 - conj(a) z``.
    """
    a = complex(a)
    ac = a.conjugate()
    u = 1.0 / (1.0 - ac * np.asarray(z, dtype=complex))
    s = -(1.0 - abs(a) ** 2)
    return s * u**2, 2.0 * s * ac * u**3, 6.0 * s * ac**2 * u**4


def cayley(zeta):
    """Cayley transform ``(zeta - i) / (zeta + i)`` from the upper half-plane."""
    zeta = np.asarray(zeta, dtype=complex)
    if np.any(zeta.imag <= 0):
        raise DiscDomainError("Cayley transform needs Im(zeta) > 0")
    out = (zeta - 1j) / (zeta + 1j)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PseudoDisc:
    """Open pseudo-hyperbolic disc ``{z : rho(z, center) < radius}``."""

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", disc_point(self.center))
        if not 0.0 < self.radius < 1.0:
            raise DiscDomainError("pseudo-hyperbolic radius must lie in (0, 1)")

    def contains(self, z):
        return np.asarray(pseudo_distance(self.center, z)) < self.radius


@dataclass(frozen=True)
class DiscGrid:
    """Finite point set standing in for the whole disc in supremum searches."""

    points: np.ndarray
    max_modulus: float
    scheme: Literal["polar", "pseudo-uniform", "custom"] = "custom"
    shape: tuple = field(default=())

    def __post_init__(self):
        pts = disc_points(self.points)
        if pts.size == 0:
            raise DiscDomainError("grid must be nonempty")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size

    def __iter__(self):
        return iter(self.points)

    @classmethod
    def from_points(cls, points) -> "DiscGrid":
        pts = disc_points(points)
        mm = float(np.max(np.abs(pts))) if pts.size else 0.0
        return cls(pts, mm, "custom")

    def union(self, other) -> "DiscGrid":
        other_pts = other.points if isinstance(other, DiscGrid) else disc_points(other)
        pts = np.concatenate([self.points, other_pts])
        return DiscGrid.from_points(pts)

    def mapped(self, f) -> "DiscGrid":
        """Image of the grid under a map of the disc into itself."""
        return DiscGrid.from_points(np.asarray(f(self.points), dtype=complex))


def grid_radii(max_modulus: float, radial_count: int) -> np.ndarray:
    """Radii whose distances to the boundary shrink geometrically, ratio 1/2.

    The outermost radius is ``max_modulus``. If doubling would push the
    innermost radius to or past the origin, the ratio is reduced so that all
    radii stay positive.
    """
    gap = 1.0 - max_modulus
    if radial_count == 1:
        return np.array([max_modulus])
    q = min(2.0, (1.0 / gap) ** (1.0 / radial_count))
    expo = np.arange(radial_count - 1, -1, -1)
    return 1.0 - gap * q**expo


def make_grid(
    max_modulus: float,
    radial_count: int,
    angular_count: int,
    scheme: Literal["polar", "pseudo-uniform"] = "polar",
) -> DiscGrid:
    """Deterministic grid of ``radial_count * angular_count`` points.

    ``polar``: a tensor grid of :func:`grid_radii` times equally spaced
    angles ``2 pi k / angular_count``.
    ``pseudo-uniform``: the same number of points spread along a golden-angle
    spiral whose hyperbolic radius grows uniformly up to ``max_modulus``.
    """
    if not 0.0 < max_modulus < 1.0:
        raise DiscDomainError("max_modulus must lie in (0, 1)")
    if radial_count < 1 or angular_count < 1:
        raise ValueError("grid counts must be at least 1")
    if max_modulus >= 1.0 - BOUNDARY_TOL:
        raise DiscDomainError("max_modulus too close to the boundary")

    if scheme == "polar":
        radii = grid_radii(max_modulus, radial_count)
        angles = 2.0 * np.pi * np.arange(angular_count) / angular_count
        pts = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
        return DiscGrid(pts, float(max_modulus), "polar", (radial_count, angular_count))
    if scheme == "pseudo-uniform":
        n = radial_count * angular_count
        # equal hyperbolic area per point; area of radius t is 2 pi (cosh t - 1)
        t_max = 2.0 * np.arctanh(max_modulus)
        idx = np.arange(1, n + 1)
        area = np.cosh(t_max) - 1.0
        t = np.arccosh(1.0 + area * idx / n)
        r = np.minimum(np.tanh(t / 2.0), max_modulus)
        golden = np.pi * (3.0 - np.sqrt(5.0))
        pts = r * np.exp(1j * golden * idx)
        return DiscGrid(pts, float(max_modulus), "pseudo-uniform", (n,))
    raise ValueError(f"unknown grid scheme {scheme!r}")
