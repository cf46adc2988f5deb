"""Jet-evaluable analytic functions on the disc.

An :class:`AnalyticFunction` wraps a vectorised evaluator. Derivatives up to
order three come either from a closed-form jet routine or, failing that, from
the trapezoidal Cauchy integral on a small circle around the point.
Sums, products, ``exp`` and precomposition with disc automorphisms propagate
closed-form jets through the Leibniz and Faa di Bruno rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import CriticalPointError, DiscDomainError
from .geometry import DiscGrid, automorphism, automorphism_derivatives, disc_point

CAUCHY_NODES = 64
CAUCHY_MAX_RADIUS = 0.1
CRITICAL_TOL = 1e-12
POLE_THRESHOLD = 1e6

_GL5_X, _GL5_W = np.polynomial.legendre.leggauss(5)


def _scalar_or_array(out, like):
    if np.ndim(like) == 0:
        return complex(np.asarray(out).reshape(()))
    return out


@dataclass(frozen=True)
class Jet:
    """Value and first three complex derivatives at a point (or array of points)."""

    value: complex
    d1: complex
    d2: complex
    d3: complex

    def __iter__(self):
        return iter((self.value, self.d1, self.d2, self.d3))

    def __getitem__(self, m):
        return (self.value, self.d1, self.d2, self.d3)[m]


def cauchy_radius(z):
    return np.minimum(0.25 * (1.0 - np.abs(z)), CAUCHY_MAX_RADIUS)


def cauchy_jet(evaluator, z, nodes: int = CAUCHY_NODES, radius=None):
    """Derivatives 0..3 of ``evaluator`` at ``z`` by the trapezoidal Cauchy rule.

    ``f^(m)(z) = m! / (N r^m) * sum_k f(z + r w_k) w_k^(-m)``, ``w_k`` the N-th
    roots of unity.
    """
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    r = cauchy_radius(flat) if radius is None else np.broadcast_to(np.asarray(radius, float), flat.shape)
    omega = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    ring = flat[:, None] + r[:, None] * omega[None, :]
    vals = np.asarray(evaluator(ring), dtype=complex)
    vals = np.broadcast_to(vals, ring.shape)
    out = []
    for m in range(4):
        dm = math.factorial(m) * np.mean(vals * omega[None, :] ** (-m), axis=1) / r**m
        out.append(dm.reshape(z.shape))
    return out


class AnalyticFunction:
    """Analytic function on the disc with jet evaluation up to order three.

    Parameters
    ----------
    evaluator
        Vectorised map from complex arrays to complex arrays.
    jet_fn
        Optional closed-form jet: returns ``(f, f', f'', f''')`` for an array
        argument. Without it derivatives use Cauchy quadrature.
    label
        Human-readable tag carried into reports.
    """

    def __init__(self, evaluator: Callable, jet_fn: Callable | None = None, label: str = ""):
        self._evaluator = evaluator
        self._jet_fn = jet_fn
        self.label = label

    @property
    def derivative_mode(self) -> str:
        return "closed-form" if self._jet_fn is not None else "cauchy-quadrature"

    def __repr__(self):
        return f"AnalyticFunction({self.label or '?'}, {self.derivative_mode})"

    def __call__(self, z):
        arr = np.asarray(z, dtype=complex)
        out = np.broadcast_to(np.asarray(self._evaluator(arr), dtype=complex), arr.shape)
        return _scalar_or_array(out, z)

    def derivatives(self, z):
        """Tuple ``(f, f', f'', f''')`` as arrays shaped like ``z``."""
        arr = np.asarray(z, dtype=complex)
        if self._jet_fn is None:
            parts = cauchy_jet(self._evaluator, arr)
        else:
            parts = self._jet_fn(arr)
        return tuple(np.broadcast_to(np.asarray(p, dtype=complex), arr.shape) for p in parts)

    def jet(self, z, order: int = 3) -> Jet:
        return jet(self, z, order)

    # algebra -----------------------------------------------------------

    def __add__(self, other):
        other = as_function(other)
        return AnalyticFunction(
            lambda z: self._evaluator(z) + other._evaluator(z),
            lambda z: tuple(a + b for a, b in zip(self.derivatives(z), other.derivatives(z))),
            f"({self.label} + {other.label})",
        )

    __radd__ = __add__

    def __neg__(self):
        return AnalyticFunction(
            lambda z: -np.asarray(self._evaluator(z)),
            lambda z: tuple(-a for a in self.derivatives(z)),
            f"-{self.label}",
        )

    def __sub__(self, other):
        return self + (-as_function(other))

    def __rsub__(self, other):
        return as_function(other) + (-self)

    def __mul__(self, other):
        other = as_function(other)
        return AnalyticFunction(
            lambda z: self._evaluator(z) * other._evaluator(z),
            lambda z: leibniz(self.derivatives(z), other.derivatives(z)),
            f"{self.label}*{other.label}",
        )

    __rmul__ = __mul__


def as_function(obj) -> AnalyticFunction:
    if isinstance(obj, AnalyticFunction):
        return obj
    if np.isscalar(obj) or np.ndim(obj) == 0:
        return constant(complex(obj))
    raise TypeError(f"cannot treat {type(obj).__name__} as an analytic function")


def constant(c) -> AnalyticFunction:
    c = complex(c)
    zero = 0j
    return AnalyticFunction(
        lambda z: np.full(np.shape(z), c, dtype=complex),
        lambda z: (np.full(np.shape(z), c, dtype=complex), zero, zero, zero),
        label=repr(c),
    )


def identity() -> AnalyticFunction:
    return AnalyticFunction(lambda z: z, lambda z: (z, 1.0 + 0j, 0j, 0j), label="z")


def polynomial(coeffs: Sequence[complex]) -> AnalyticFunction:
    """Polynomial with ``coeffs[m]`` the coefficient of ``z**m``."""
    p = np.polynomial.Polynomial(np.asarray(coeffs, dtype=complex))
    derivs = [p, p.deriv(1), p.deriv(2), p.deriv(3)]
    return AnalyticFunction(p, lambda z: tuple(d(z) for d in derivs), label=f"poly{list(coeffs)}")


def leibniz(f, g):
    """Jet of a product from the jets of the factors."""
    f0, f1, f2, f3 = f
    g0, g1, g2, g3 = g
    return (
        f0 * g0,
        f1 * g0 + f0 * g1,
        f2 * g0 + 2 * f1 * g1 + f0 * g2,
        f3 * g0 + 3 * f2 * g1 + 3 * f1 * g2 + f0 * g3,
    )


def exp_jet(f):
    """Jet of ``exp(f)`` from the jet of ``f``."""
    f0, f1, f2, f3 = f
    e = np.exp(f0)
    return (e, f1 * e, (f2 + f1 * f1) * e, (f3 + 3 * f1 * f2 + f1**3) * e)


def chain_jet(outer, inner):
    """Jet of ``F(G(z))`` given ``outer`` = jet of F at G(z) and the jet of G."""
    F0, F1, F2, F3 = outer
    _, g1, g2, g3 = inner
    return (
        F0,
        F1 * g1,
        F2 * g1 * g1 + F1 * g2,
        F3 * g1**3 + 3 * F2 * g1 * g2 + F1 * g3,
    )


def exp(F: AnalyticFunction) -> AnalyticFunction:
    return AnalyticFunction(
        lambda z: np.exp(F._evaluator(z)),
        lambda z: exp_jet(F.derivatives(z)),
        f"exp({F.label})",
    )


def compose_mobius(F: AnalyticFunction, a) -> AnalyticFunction:
    """``F o phi_a`` with ``phi_a(z) = (a - z) / (1 - conj(a) z)``."""
    a = disc_point(a)
    phi = automorphism(a)

    def jet_fn(z):
        w = phi(z)
        p1, p2, p3 = automorphism_derivatives(a, z)
        return chain_jet(F.derivatives(w), (w, p1, p2, p3))

    return AnalyticFunction(lambda z: F._evaluator(phi(z)), jet_fn, f"{F.label}(phi_{a})")


def jet(F: AnalyticFunction, z, order: int = 3) -> Jet:
    """Jet of ``F`` at ``z``; entries above ``order`` are ``nan``."""
    if not 0 <= order <= 3:
        raise ValueError("jet order must lie in 0..3")
    parts = list(F.derivatives(z))
    for m in range(order + 1, 4):
        parts[m] = np.full(np.shape(parts[m]), np.nan + 0j)
    if np.ndim(z) == 0:
        parts = [complex(np.asarray(p).reshape(())) for p in parts]
    return Jet(*parts)


class GrowthNorm(NamedTuple):
    value: float
    max_modulus: float
    argmax: complex


def growth_norm(F: AnalyticFunction, alpha: float, grid: DiscGrid) -> GrowthNorm:
    """Grid lower bound for ``sup (1 - |z|^2)^alpha |F(z)|``."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    pts = grid.points
    vals = (1.0 - np.abs(pts) ** 2) ** alpha * np.abs(F(pts))
    i = int(np.argmax(vals))
    return GrowthNorm(float(vals[i]), grid.max_modulus, complex(pts[i]))


def schwarzian(W: AnalyticFunction, z) -> complex:
    """``(W''/W')' - (W''/W')^2 / 2`` computed as ``W'''/W' - 3/2 (W''/W')^2``."""
    _, d1, d2, d3 = W.derivatives(np.asarray(z, dtype=complex))
    if np.any(np.abs(d1) < CRITICAL_TOL):
        raise CriticalPointError(f"W' vanishes (|W'| < {CRITICAL_TOL}) at the evaluation point")
    q = d2 / d1
    return _scalar_or_array(d3 / d1 - 1.5 * q * q, z)


def spherical_derivative(W: AnalyticFunction, z) -> float:
    """``|W'| / (1 + |W|^2)``, switching to the chart ``1/W`` near poles."""
    z = disc_point(z)
    with np.errstate(all="ignore"):
        w0 = complex(W(z))
    if np.isfinite(w0) and abs(w0) <= POLE_THRESHOLD:
        _, d1, _, _ = W.derivatives(np.asarray(z))
        return float(abs(complex(d1)) / (1.0 + abs(w0) ** 2))
    v0, v1, _, _ = cauchy_jet(lambda s: 1.0 / np.asarray(W(s), dtype=complex), np.asarray(z))
    return float(abs(complex(v1)) / (1.0 + abs(complex(v0)) ** 2))


@dataclass(frozen=True)
class PathSpec:
    """Polygonal integration path through interior waypoints."""

    waypoints: tuple
    samples_per_segment: int = 8

    def __post_init__(self):
        pts = tuple(disc_point(w) for w in self.waypoints)
        if len(pts) < 2:
            raise DiscDomainError("a path needs at least two waypoints")
        for p, q in zip(pts, pts[1:]):
            if p == q:
                raise DiscDomainError("consecutive waypoints must differ")
        if self.samples_per_segment < 1:
            raise ValueError("samples_per_segment must be positive")
        object.__setattr__(self, "waypoints", pts)

    @property
    def segments(self):
        return list(zip(self.waypoints, self.waypoints[1:]))

    @property
    def length(self) -> float:
        return float(sum(abs(q - p) for p, q in self.segments))


def segment_integrals(F, start, ends, subintervals: int = 8):
    """Straight-line integrals of ``F`` from ``start`` to each point of ``ends``.

    Composite 5-point Gauss-Legendre; vectorised over the endpoints.
    """
    ends = np.asarray(ends, dtype=complex)
    flat = ends.ravel()
    edges = np.linspace(0.0, 1.0, subintervals + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (mid[:, None] + half[:, None] * _GL5_X[None, :]).ravel()
    wts = (half[:, None] * _GL5_W[None, :]).ravel()
    dz = flat - start
    nodes = start + dz[:, None] * t[None, :]
    vals = np.asarray(F(nodes), dtype=complex)
    out = (np.broadcast_to(vals, nodes.shape) @ wts) * dz
    return out.reshape(ends.shape)


def path_primitive(F: AnalyticFunction, path: PathSpec) -> complex:
    """``int_path F dz`` by composite Gauss-Legendre on each straight segment."""
    total = 0j
    for p, q in path.segments:
        total += complex(segment_integrals(F, p, np.array([q]), path.samples_per_segment)[0])
    return total
