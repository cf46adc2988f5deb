"""Carleson-measure constants for point masses on sequences and for ``|A|^2 (1-|z|^2)^(2+p) dm``.

Two forms are computed: the box form ``sup_I mu(Q(I)) / |I|^p`` (arc lengths
normalised so the circle has length 1) and the conformally invariant form
``sup_a int ((1 - |a|^2) / |1 - conj(a) z|^2)^p dmu(z)``. Area measures use the
unnormalised Lebesgue measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .analytic import AnalyticFunction
from .errors import DiscDomainError, QuadratureError
from .geometry import DiscGrid, automorphism, make_grid
from .sequences import PointSequence

DEFAULT_TRUNCATION = 1.0 - 1e-4
REFINEMENT_TOL = 0.01
#: Centres re-evaluated with the refined rule, per exponent.
REFINE_TOP = 3


@dataclass(frozen=True)
class PointMeasure:
    """``sum_n (1 - |z_n|)^p delta_{z_n}``."""

    sequence: PointSequence
    p: float

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise DiscDomainError("p must lie in (0, 1]")

    @property
    def atoms(self) -> np.ndarray:
        return self.sequence.points

    @property
    def masses(self) -> np.ndarray:
        return (1.0 - np.abs(self.atoms)) ** self.p


@dataclass(frozen=True)
class PolarQuadrature:
    """Polar product rule: Gauss-Legendre in r on panels ``[1 - 2^-j, 1 - 2^-(j+1)]``
    and the trapezoid rule in theta with ``angular_factor / (1 - r)`` nodes per panel,
    clipped to ``[angular_min, angular_max]``."""

    radial_nodes: int = 6
    angular_min: int = 32
    angular_factor: float = 4.0
    angular_max: int = 1024

    def refined(self) -> "PolarQuadrature":
        return PolarQuadrature(
            self.radial_nodes * 2, self.angular_min * 2, self.angular_factor * 2, self.angular_max * 2
        )

    def panels(self, r0: float, r1: float):
        """Radial panel edges between ``r0`` and ``r1``, halving the distance to the boundary."""
        edges = [r0]
        gap = 1.0 - r0
        while True:
            gap /= 2.0
            nxt = 1.0 - gap
            if nxt >= r1 - 1e-15:
                break
            edges.append(nxt)
        edges.append(r1)
        return list(zip(edges, edges[1:]))

    def disc_nodes(self, radius: float):
        """Nodes and weights for ``int_{|w| <= radius} F dm``."""
        x, wx = np.polynomial.legendre.leggauss(self.radial_nodes)
        pts, wts = [], []
        for lo, hi in self.panels(0.0, radius):
            r = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x
            wr = 0.5 * (hi - lo) * wx * r
            nth = int(np.clip(np.ceil(self.angular_factor / (1.0 - hi)), self.angular_min, self.angular_max))
            th = 2.0 * np.pi * (np.arange(nth) + 0.5) / nth
            pts.append((r[:, None] * np.exp(1j * th)[None, :]).ravel())
            wts.append(np.repeat(wr * 2.0 * np.pi / nth, nth))
        return np.concatenate(pts), np.concatenate(wts)


@dataclass(frozen=True)
class AreaMeasureSpec:
    """``|A(z)|^2 (1 - |z|^2)^(2 + p) dm(z)`` restricted to ``|z| <= truncation_radius``."""

    A: AnalyticFunction
    p: float
    truncation_radius: float = DEFAULT_TRUNCATION
    quadrature: PolarQuadrature = field(default_factory=PolarQuadrature)

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise DiscDomainError("p must lie in (0, 1]")
        if not 0.0 < self.truncation_radius < 1.0:
            raise DiscDomainError("truncation radius must lie in (0, 1)")


@dataclass(frozen=True)
class CarlesonBox:
    """Box over the arc centred at angle ``arc_center`` of normalised length ``arc_length``."""

    arc_center: float
    arc_length: float

    def __post_init__(self):
        if not 0.0 < self.arc_length <= 1.0:
            raise DiscDomainError("arc length must lie in (0, 1]")

    @property
    def half_angle(self) -> float:
        return np.pi * self.arc_length

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        dtheta = np.angle(z * np.exp(-1j * self.arc_center))
        return (np.abs(z) >= 1.0 - self.arc_length) & (np.abs(dtheta) <= self.half_angle)


@dataclass(frozen=True)
class CarlesonResult:
    constant: float
    maximizer: object
    p: float
    truncation: float | None = None
    refinement_delta: float | None = None
    stable: bool = True

    def record(self, measure_id: str) -> dict:
        return {
            "measure": measure_id,
            "p": self.p,
            "constant": self.constant,
            "maximizer": str(self.maximizer),
            "truncation": self.truncation,
            "refinement_delta": self.refinement_delta,
            "stable": self.stable,
        }


def kernel(a, z, p: float):
    """``((1 - |a|^2) / |1 - conj(a) z|^2)^p``."""
    a = np.asarray(a, dtype=complex)
    return ((1.0 - np.abs(a) ** 2) / np.abs(1.0 - np.conj(a) * z) ** 2) ** p


def default_centers(atoms=(), max_modulus: float = 0.999, radial: int = 6, angular: int = 16) -> DiscGrid:
    """The measure's atoms plus a boundary-clustered polar grid."""
    grid = make_grid(max_modulus, radial, angular).union([0j])
    atoms = np.asarray(atoms, dtype=complex)
    return grid.union(atoms) if atoms.size else grid


def invariant_constant_point(m: PointMeasure, centers: DiscGrid | None = None) -> CarlesonResult:
    """``max_a sum_n K_a(z_n)^p (1 - |z_n|)^p`` over the centres, summed exactly."""
    if len(m.sequence) == 0:
        return CarlesonResult(0.0, None, m.p)
    centers = default_centers(m.atoms) if centers is None else centers
    a = centers.points
    vals = (kernel(a[:, None], m.atoms[None, :], m.p) * m.masses[None, :]).sum(axis=1)
    i = int(np.argmax(vals))
    return CarlesonResult(float(vals[i]), complex(a[i]), m.p)


def _transported_density(A: AnalyticFunction, a: complex, w: np.ndarray) -> np.ndarray:
    """``|A(phi_a(w))|^2 |phi_a'(w)|^4``; the kernel and weight are absorbed by the substitution."""
    phi = automorphism(a)
    dphi = (1.0 - abs(a) ** 2) / np.abs(1.0 - np.conj(a) * w) ** 2
    return np.abs(A(phi(w))) ** 2 * dphi**2


def _area_profile(A, ps, points, truncation, quad):
    nodes, weights = quad.disc_nodes(truncation)
    wr = 1.0 - np.abs(nodes) ** 2
    powers = [wr ** (2.0 + p) for p in ps]
    table = np.empty((len(ps), len(points)))
    for j, a in enumerate(points):
        dens = _transported_density(A, complex(a), nodes) * weights
        for i, pw in enumerate(powers):
            table[i, j] = np.dot(dens, pw)
    return table


def area_invariant_profile(
    A: AnalyticFunction,
    ps: Sequence[float],
    centers: DiscGrid | None = None,
    truncation: float = DEFAULT_TRUNCATION,
    quadrature: PolarQuadrature | None = None,
    atoms=(),
    refine_top: int = REFINE_TOP,
) -> dict:
    """Invariant constants of ``mu_{A,p}`` for several p sharing one set of evaluations.

    The integral at centre ``a`` is computed after the substitution
    ``z = phi_a(w)``, which turns it into ``int |A(phi_a(w)) phi_a'(w)^2|^2
    (1 - |w|^2)^(2 + p) dm(w)``; the polar rule is applied in ``w`` and the
    truncation ``|w| <= truncation`` is taken in these centre-adapted
    coordinates (for ``a = 0`` it is the disc ``|z| <= truncation``).

    Every centre is evaluated with the base rule; the ``refine_top`` leading
    centres for each p are re-evaluated with the refined rule (twice the
    nodes in each direction) and the supremum is taken over the refined
    values. The relative change at the maximiser is reported, and results
    changing by more than 1% are flagged unstable.
    """
    for p in ps:
        if not 0.0 < p <= 1.0:
            raise DiscDomainError("p must lie in (0, 1]")
    centers = default_centers(atoms) if centers is None else centers
    quad = PolarQuadrature() if quadrature is None else quadrature
    pts = centers.points
    coarse = _area_profile(A, ps, pts, truncation, quad)
    lead = np.unique(np.concatenate([np.argsort(-row)[:refine_top] for row in coarse]))
    fine = _area_profile(A, ps, pts[lead], truncation, quad.refined())
    out = {}
    for i, p in enumerate(ps):
        j = int(np.argmax(fine[i]))
        val = float(fine[i, j])
        base = coarse[i, lead[j]]
        delta = abs(val - base) / val if val > 0 else 0.0
        out[p] = CarlesonResult(val, complex(pts[lead[j]]), p, truncation, float(delta), bool(delta <= REFINEMENT_TOL))
    return out


def invariant_constant_area(
    s: AreaMeasureSpec, centers: DiscGrid | None = None, strict: bool = False
) -> CarlesonResult:
    """Invariant constant of an area measure; ``strict`` raises on unstable quadrature."""
    res = area_invariant_profile(s.A, [s.p], centers, s.truncation_radius, s.quadrature)[s.p]
    if strict and not res.stable:
        raise QuadratureError(f"quadrature refinements differ by {res.refinement_delta:.3g}")
    return res


def dyadic_boxes(levels: int = 8, extra_centers=()) -> list:
    """Arcs of length ``2^-m`` centred on a half-overlapping grid, plus arcs centred at given angles."""
    boxes = []
    for m in range(levels + 1):
        length = 2.0**-m
        count = 2 ** (m + 1)
        for k in range(count):
            boxes.append(CarlesonBox(2.0 * np.pi * k / count, length))
        for th in extra_centers:
            boxes.append(CarlesonBox(float(th), length))
    return boxes


def _box_area_mass(A, p, box, truncation, quad):
    r0 = 1.0 - box.arc_length
    if r0 >= truncation:
        return 0.0
    x, wx = np.polynomial.legendre.leggauss(quad.radial_nodes)
    total = 0.0
    for lo, hi in quad.panels(r0, truncation):
        r = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x
        wr = 0.5 * (hi - lo) * wx * r
        span = 2.0 * box.half_angle
        nth = int(np.clip(np.ceil(quad.angular_factor * span / (2 * np.pi * (1.0 - hi))), 8, quad.angular_max))
        tx, tw = np.polynomial.legendre.leggauss(nth)
        th = box.arc_center + box.half_angle * tx
        z = r[:, None] * np.exp(1j * th)[None, :]
        f = np.abs(A(z)) ** 2 * (1.0 - r[:, None] ** 2) ** (2.0 + p)
        total += float(np.einsum("i,ij,j->", wr, f, tw * box.half_angle))
    return total


def box_constant(
    measure,
    boxes: Sequence[CarlesonBox] | None = None,
) -> CarlesonResult:
    """``max over boxes of mu(Q(I)) / |I|^p`` for a :class:`PointMeasure` or :class:`AreaMeasureSpec`."""
    if boxes is None:
        extra = np.angle(measure.atoms) if isinstance(measure, PointMeasure) else ()
        boxes = dyadic_boxes(8, extra)
    if not boxes:
        raise ValueError("need at least one box")
    p = measure.p
    if isinstance(measure, PointMeasure):
        if len(measure.sequence) == 0:
            return CarlesonResult(0.0, None, p)
        vals = [measure.masses[box.contains(measure.atoms)].sum() / box.arc_length**p for box in boxes]
        i = int(np.argmax(vals))
        return CarlesonResult(float(vals[i]), boxes[i], p)
    if isinstance(measure, AreaMeasureSpec):
        coarse = np.array(
            [_box_area_mass(measure.A, p, b, measure.truncation_radius, measure.quadrature) for b in boxes]
        )
        fine_q = measure.quadrature.refined()
        i = int(np.argmax(coarse))
        fine = _box_area_mass(measure.A, p, boxes[i], measure.truncation_radius, fine_q)
        val = fine / boxes[i].arc_length**p
        delta = abs(fine - coarse[i]) / fine if fine > 0 else 0.0
        return CarlesonResult(float(val), boxes[i], p, measure.truncation_radius, float(delta), bool(delta <= REFINEMENT_TOL))
    raise TypeError("measure must be a PointMeasure or AreaMeasureSpec")
