"""Coefficients ``A`` for which ``f'' + A f = 0`` has a solution vanishing on a given sequence.

For a uniformly separated sequence with Blaschke product ``B`` the solution is
``f = B exp(h)`` with ``h = B k``, where ``k`` interpolates
``k(z_n) = -B''(z_n) / (2 B'(z_n)^2)``. Then

    A = -f''/f = -(B'' + 2 B' h') / B - (h')^2 - h''

and the numerator ``B'' + 2 B' h'`` vanishes at every ``z_n``, so ``A`` is
analytic. Near each zero the quotient is replaced by a Cauchy integral over a
small circle where the direct formula is well conditioned.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .analytic import (
    AnalyticFunction,
    exp_jet,
    growth_norm,
    leibniz,
    segment_integrals,
)
from .blaschke import BlaschkeProduct
from .errors import ConstructionError, DegenerateInputError, InterpolationError, PreconditionError
from .geometry import DiscGrid, make_grid, pseudo_distance
from .sequences import PointSequence, local_separation, uniform_separation_products

log = logging.getLogger(__name__)

SEPARATION_WARNING = 0.05
SINGULAR_FACTOR = 0.05
PATCH_RADIUS_FACTOR = 4.0
PATCH_NODES = 64
CONDITION_LIMIT = 1e10
RIDGE = 1e-10
RESIDUAL_LIMIT = 1e-8
SCALAR_LIMIT = 64
_DIRECT_CHUNK = 2_000_000
ODE_RESIDUAL_LIMIT = 1e-7


@dataclass(frozen=True)
class InterpolationProblem:
    nodes: PointSequence
    targets: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.targets, dtype=complex).ravel()
        if t.size != len(self.nodes):
            raise ValueError("need one target per node")
        object.__setattr__(self, "targets", t)


def interpolation_targets(seq: PointSequence, B: BlaschkeProduct | None = None) -> InterpolationProblem:
    """Targets ``-B''(z_n) / (2 B'(z_n)^2)`` from the factorised derivatives at the zeros."""
    if len(seq) == 0:
        raise DegenerateInputError("need at least one node")
    if len(seq) > 1:
        usep = float(uniform_separation_products(seq).min())
        if usep < SEPARATION_WARNING:
            warnings.warn(f"uniform separation {usep:.3g} is below {SEPARATION_WARNING}", stacklevel=2)
    B = BlaschkeProduct(seq) if B is None else B
    d1, d2 = B.derivatives_at_zeros()
    if np.any(np.abs(d1) < 1e-12):
        raise DegenerateInputError("B' vanishes at a zero; points are numerically coincident")
    return InterpolationProblem(seq, -d2 / (2.0 * d1**2))


def derivative_interpolation_targets(g: AnalyticFunction, nodes: PointSequence) -> np.ndarray:
    """Values ``-g''(z_n) / (2 g'(z_n))`` that ``h'`` must take at the zeros of ``g``."""
    _, g1, g2, _ = g.derivatives(nodes.points)
    return -g2 / (2.0 * g1)


def zero_diagnostics(seq: PointSequence, B: BlaschkeProduct | None = None) -> dict:
    """Infimum of ``(1 - |z_n|^2)|B'(z_n)|`` and supremum of ``(1 - |z_n|^2)|B''/B'|`` over the zeros."""
    B = BlaschkeProduct(seq) if B is None else B
    d1, d2 = B.derivatives_at_zeros()
    w = 1.0 - np.abs(seq.points) ** 2
    return {
        "inf_weighted_derivative": float(np.min(w * np.abs(d1))),
        "sup_weighted_log_derivative": float(np.max(w * np.abs(d2 / d1))),
        "sup_target_ratio": float(np.max(np.abs(d2) / np.abs(d1) ** 2)),
    }


class KernelInterpolant(AnalyticFunction):
    """``k(z) = sum_n c_n ((1 - |z_n|^2) / (1 - conj(z_n) z))^2``."""

    def __init__(self, nodes: PointSequence, coeffs, residual=0.0, condition=1.0, regularized=False):
        self.nodes = nodes
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.residual = float(residual)
        self.condition = float(condition)
        self.regularized = bool(regularized)
        self._ac = np.conj(nodes.points)
        self._w2 = (1.0 - np.abs(nodes.points) ** 2) ** 2
        super().__init__(self._evaluate, self._jet, label="k")

    def _u(self, z):
        z = np.asarray(z, dtype=complex)
        ac = self._ac.reshape((-1,) + (1,) * z.ndim)
        return ac, 1.0 / (1.0 - ac * z)

    def _weights(self, z):
        return (self.coeffs * self._w2).reshape((-1,) + (1,) * np.ndim(z))

    def _evaluate(self, z):
        _, u = self._u(z)
        return np.sum(self._weights(z) * u**2, axis=0)

    def _jet(self, z):
        ac, u = self._u(z)
        cw = self._weights(z)
        u2 = u * u
        return (
            np.sum(cw * u2, axis=0),
            np.sum(2.0 * cw * ac * u2 * u, axis=0),
            np.sum(6.0 * cw * ac**2 * u2 * u2, axis=0),
            np.sum(24.0 * cw * ac**3 * u2 * u2 * u, axis=0),
        )


def kernel_matrix(nodes: PointSequence) -> np.ndarray:
    """``M[m, n] = ((1 - |z_n|^2) / (1 - conj(z_n) z_m))^2``."""
    z = nodes.points
    return ((1.0 - np.abs(z[None, :]) ** 2) / (1.0 - np.conj(z[None, :]) * z[:, None])) ** 2


def solve_interpolation(problem: InterpolationProblem) -> KernelInterpolant:
    """Solve ``k(z_m) = target_m`` in the kernel basis.

    Dense LU with partial pivoting; if the condition number exceeds ``1e10``
    the ridge-regularised normal equations are solved instead.
    """
    M = kernel_matrix(problem.nodes)
    t = problem.targets
    cond = float(np.linalg.cond(M))
    regularized = not np.isfinite(cond) or cond > CONDITION_LIMIT
    if regularized:
        MH = M.conj().T
        c = np.linalg.solve(MH @ M + RIDGE * np.eye(M.shape[0]), MH @ t)
    else:
        c = np.linalg.solve(M, t)
    residual = float(np.max(np.abs(M @ c - t))) if t.size else 0.0
    if residual > RESIDUAL_LIMIT:
        raise InterpolationError(
            f"interpolation residual {residual:.3g} exceeds {RESIDUAL_LIMIT}",
            {"residual": residual, "condition": cond, "regularized": regularized},
        )
    return KernelInterpolant(problem.nodes, c, residual, cond, regularized)


class BundleCoefficient(AnalyticFunction):
    """``A = -(B'' + 2B'h')/B - (h')^2 - h''`` with Cauchy patches around the zeros of ``B``."""

    def __init__(self, B: BlaschkeProduct, k: KernelInterpolant, eps: np.ndarray):
        self.B = B
        self.k = k
        self.zeros = B.zeros.points
        self.eps = np.asarray(eps, dtype=float)
        self.patch_radius = PATCH_RADIUS_FACTOR * self.eps * (1.0 - np.abs(self.zeros))
        self._omega = np.exp(2j * np.pi * np.arange(PATCH_NODES) / PATCH_NODES)
        self._ring = self.zeros[:, None] + self.patch_radius[:, None] * self._omega[None, :]
        self._scalar_data = list(zip(self.zeros.tolist(), np.conj(self.zeros).tolist(), B._c.tolist()))
        self._kernel_data = list(zip(self.k._ac.tolist(), (self.k.coeffs * self.k._w2).tolist()))
        self._patch_data = list(zip(self.zeros.tolist(), np.conj(self.zeros).tolist(), self.eps.tolist()))
        self._ring_vals = self.direct(self._ring) if self.zeros.size else None
        super().__init__(self._evaluate, None, label="A")

    def scalar(self, z: complex) -> complex:
        """Single-point evaluation in plain complex arithmetic, for ODE right-hand sides."""
        z = complex(z)
        if len(self._scalar_data) > SCALAR_LIMIT:
            return complex(self(z))
        for n, (a, ac, e) in enumerate(self._patch_data):
            if abs(a - z) <= e * abs(1.0 - ac * z):
                R = self.patch_radius[n]
                kern = R * self._omega / (self._ring[n] - z)
                return complex(np.mean(self._ring_vals[n] * kern))
        Bv, s1, s2 = 1.0 + 0j, 0j, 0j
        for a, ac, c in self._scalar_data:
            u = 1.0 / (1.0 - ac * z)
            v = 1.0 / (a - z)
            Bv *= c * (a - z) * u
            s1 += ac * u - v
            s2 += (ac * u) ** 2 - v * v
        # s1 = B'/B, s1^2 + s2 = B''/B
        k0 = k1 = k2 = 0j
        for ac, cw in self._kernel_data:
            u = 1.0 / (1.0 - ac * z)
            u2 = cw * u * u
            k0 += u2
            k1 += 2.0 * ac * u2 * u
            k2 += 6.0 * ac * ac * u2 * u * u
        b1, b2 = Bv * s1, Bv * (s1 * s1 + s2)
        h1 = b1 * k0 + Bv * k1
        h2 = b2 * k0 + 2.0 * b1 * k1 + Bv * k2
        return -(s1 * s1 + s2) - 2.0 * s1 * h1 - h1 * h1 - h2

    def direct(self, z):
        """The quotient formula, valid away from the zeros.

        With ``s1 = B'/B`` and ``s2 = (B'/B)'`` summed factor by factor,
        ``B''/B = s1^2 + s2``, ``h' = B (s1 k + k')`` and
        ``h'' = B ((s1^2 + s2) k + 2 s1 k' + k'')``.
        """
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        out = np.empty(flat.shape, dtype=complex)
        n = max(1, self.zeros.size + self.k.coeffs.size)
        step = max(1, _DIRECT_CHUNK // n)
        for i in range(0, flat.size, step):
            out[i:i + step] = self._direct_flat(flat[i:i + step])
        return out.reshape(z.shape)

    def _direct_flat(self, z):
        if 0 < self.zeros.size <= SCALAR_LIMIT and self.k.nodes == self.B.zeros:
            return self._direct_loop(z)
        Bv = self.B(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.zeros.size:
                a = self.zeros[:, None]
                au = np.conj(a) / (1.0 - np.conj(a) * z[None, :])
                v = 1.0 / (a - z[None, :])
                s1 = np.sum(au - v, axis=0)
                s2 = np.sum(au * au - v * v, axis=0)
            else:
                s1 = s2 = np.zeros(z.shape, dtype=complex)
            k0, k1, k2, _ = self.k.derivatives(z)
            q = s1 * s1 + s2
            h1 = Bv * (s1 * k0 + k1)
            h2 = Bv * (q * k0 + 2.0 * s1 * k1 + k2)
            return -q - 2.0 * s1 * h1 - h1 * h1 - h2

    def _direct_loop(self, z):
        # one pass over the zeros, which double as the kernel nodes
        Bv = np.ones(z.shape, dtype=complex)
        s1 = np.zeros(z.shape, dtype=complex)
        s2 = np.zeros(z.shape, dtype=complex)
        k0 = np.zeros(z.shape, dtype=complex)
        k1 = np.zeros(z.shape, dtype=complex)
        k2 = np.zeros(z.shape, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            for (a, ac, c), (_, cw) in zip(self._scalar_data, self._kernel_data):
                u = 1.0 / (1.0 - ac * z)
                d = a - z
                Bv *= c * d * u
                au = ac * u
                v = 1.0 / d
                s1 += au - v
                s2 += au * au - v * v
                t = cw * u * u
                k0 += t
                t = t * au
                k1 += 2.0 * t
                k2 += 6.0 * t * au
            q = s1 * s1 + s2
            h1 = Bv * (s1 * k0 + k1)
            h2 = Bv * (q * k0 + 2.0 * s1 * k1 + k2)
            return -q - 2.0 * s1 * h1 - h1 * h1 - h2

    def in_patch(self, z):
        """Index of the patch containing each point, or -1."""
        z = np.asarray(z, dtype=complex)
        idx = np.full(z.shape, -1, dtype=int)
        if self.zeros.size == 0:
            return idx
        if self.zeros.size <= SCALAR_LIMIT:
            for n, (a, ac, e) in reversed(list(enumerate(self._patch_data))):
                idx[np.abs(a - z) <= e * np.abs(1.0 - ac * z)] = n
            return idx
        rho = pseudo_distance(self.zeros.reshape((-1,) + (1,) * z.ndim), z)
        rho = np.asarray(rho)
        hit = rho <= self.eps.reshape((-1,) + (1,) * z.ndim)
        any_hit = hit.any(axis=0)
        idx[any_hit] = np.argmax(hit, axis=0)[any_hit]
        return idx

    def _evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        idx = self.in_patch(z)
        out = np.empty(z.shape, dtype=complex)
        free = idx < 0
        if free.any():
            out[free] = self.direct(z[free])
        for n in np.unique(idx[~free]):
            sel = idx == n
            zs = z[sel]
            # Cauchy integral formula on the circle of radius R about z_n
            R = self.patch_radius[n]
            kern = R * self._omega[None, :] / (self._ring[n][None, :] - zs[:, None])
            out[sel] = np.mean(self._ring_vals[n][None, :] * kern, axis=1)
        return out


@dataclass
class CoefficientBundle:
    """Output of :func:`build_coefficient`."""

    A: AnalyticFunction
    f: AnalyticFunction
    h: AnalyticFunction
    k: AnalyticFunction
    B: BlaschkeProduct
    zeros: PointSequence
    diagnostics: dict = field(default_factory=dict)

    def manifest(self) -> dict:
        return {
            "zeros": [[float(z.real), float(z.imag)] for z in self.zeros.points],
            "diagnostics": {k: v for k, v in sorted(self.diagnostics.items())},
        }


def _f_jet(B, h):
    def jet_fn(z):
        return leibniz(B.derivatives(z), exp_jet(h.derivatives(z)))

    return jet_fn


def _check_points(seq, eps, count, rng):
    """Random points with ``|z| <= 0.999`` outside twice every patch radius."""
    pts = []
    while len(pts) < count:
        r = 0.999 * np.sqrt(rng.random(4 * count))
        z = r * np.exp(2j * np.pi * rng.random(4 * count))
        if len(seq):
            rho = pseudo_distance(seq.points[:, None], z[None, :])
            ok = np.all(rho > 2.0 * eps[:, None], axis=0)
            z = z[ok]
        pts.extend(z.tolist())
    return np.asarray(pts[:count])


def ode_residual(bundle_A, f, z) -> np.ndarray:
    """``|f'' + A f| / max(|f''|, |A f|, |f| / (1 - |z|^2)^2)`` at the given points.

    The last term is the size of ``A f`` for a coefficient of unit growth
    norm; it keeps the ratio meaningful when ``f''`` and ``A f`` both vanish.
    """
    z = np.asarray(z, dtype=complex)
    f0, _, f2, _ = f.derivatives(z)
    Af = bundle_A(z) * f0
    natural = np.abs(f0) / (1.0 - np.abs(z) ** 2) ** 2
    scale = np.maximum(np.maximum(np.maximum(np.abs(f2), np.abs(Af)), natural), 1e-300)
    return np.abs(f2 + Af) / scale


def build_coefficient(
    seq: PointSequence,
    check_points: int = 100,
    seed: int = 0,
    norm_grid: DiscGrid | None = None,
) -> CoefficientBundle:
    """Run the prescribed-zero construction on a finite uniformly separated sequence."""
    if len(seq) == 0:
        raise DegenerateInputError("need at least one prescribed zero")
    B = BlaschkeProduct(seq)
    problem = interpolation_targets(seq, B)
    k = solve_interpolation(problem)

    h = AnalyticFunction(lambda z: B(z) * k(z), lambda z: leibniz(B.derivatives(z), k.derivatives(z)), "h")
    f = AnalyticFunction(lambda z: B(z) * np.exp(B(z) * k(z)), _f_jet(B, h), "f")
    eps = SINGULAR_FACTOR * local_separation(seq)
    A = BundleCoefficient(B, k, eps)

    rng = np.random.default_rng(seed)
    pts = _check_points(seq, eps, check_points, rng)
    res = ode_residual(A, f, pts)
    worst = float(res.max()) if res.size else 0.0

    grid = norm_grid if norm_grid is not None else make_grid(0.999, 12, 128).union(seq.points)
    h2 = growth_norm(A, 2.0, grid)
    diag = {
        "n_zeros": len(seq),
        "interp_residual": k.residual,
        "interp_condition": k.condition,
        "interp_regularized": k.regularized,
        "ode_identity_residual": worst,
        "h2_norm_grid": h2.value,
        "h2_norm_grid_max_modulus": h2.max_modulus,
        "singular_radius": float(eps.min()),
        "uniform_separation": float(uniform_separation_products(seq).min()) if len(seq) > 1 else 1.0,
    }
    diag.update(zero_diagnostics(seq, B))
    if worst > ODE_RESIDUAL_LIMIT:
        raise ConstructionError(f"ODE identity residual {worst:.3g} exceeds {ODE_RESIDUAL_LIMIT}", diag)
    log.debug("built coefficient for %d zeros: %s", len(seq), diag)
    return CoefficientBundle(A, f, h, k, B, seq, diag)


def lattice_beta(density_upper: float) -> float:
    """``(D+ + 1) / 2``, the interpolation-density parameter of the lattice step; reported only."""
    if not density_upper >= 0:
        raise ValueError("density must be non-negative")
    return 0.5 * (density_upper + 1.0)


# zero-free solutions and the corona identity ----------------------------------


@dataclass
class ZeroFreePair:
    A: AnalyticFunction
    f1: AnalyticFunction
    f2: AnalyticFunction
    h: AnalyticFunction
    inf_grid_sum: float


def zero_free_example(g: AnalyticFunction, grid: DiscGrid | None = None, subintervals: int = 16) -> ZeroFreePair:
    """``h' = exp(-2g)``, ``h(0) = 0``; ``f1 = exp(g + h)``, ``f2 = exp(g - h)`` and
    ``A = -g'' - (g')^2 - (h')^2``."""

    def h_value(z):
        return segment_integrals(lambda s: np.exp(-2.0 * np.asarray(g(s))), 0j, z, subintervals)

    def h_jet(z):
        g0, g1, g2, _ = g.derivatives(z)
        e = np.exp(-2.0 * g0)
        return h_value(z), e, -2.0 * g1 * e, (4.0 * g1 * g1 - 2.0 * g2) * e

    h = AnalyticFunction(h_value, h_jet, "h")

    def A_value(z):
        _, g1, g2, _ = g.derivatives(z)
        g0 = g(z)
        return -g2 - g1 * g1 - np.exp(-4.0 * np.asarray(g0))

    def exp_of(sign):
        def jet_fn(z):
            gj, hj = g.derivatives(z), h.derivatives(z)
            return exp_jet(tuple(a + sign * b for a, b in zip(gj, hj)))

        return AnalyticFunction(lambda z: np.exp(g(z) + sign * h(z)), jet_fn, "exp(g+h)" if sign > 0 else "exp(g-h)")

    f1, f2 = exp_of(1.0), exp_of(-1.0)
    grid = make_grid(0.99, 8, 32) if grid is None else grid
    inf_sum = float(np.min(np.abs(f1(grid.points)) + np.abs(f2(grid.points))))
    return ZeroFreePair(AnalyticFunction(A_value, None, "A"), f1, f2, h, inf_sum)


def corona_coefficient(f1, f2, g1, g2, grid: DiscGrid | None = None) -> AnalyticFunction:
    """``A = f1 g1'' + f2 g2'' + 2 (f1' g1' + f2' g2')`` given ``f1 g1 + f2 g2 = 1``."""
    grid = make_grid(0.99, 8, 32) if grid is None else grid
    z = grid.points
    defect = float(np.max(np.abs(f1(z) * g1(z) + f2(z) * g2(z) - 1.0)))
    if defect >= 1e-10:
        raise PreconditionError(f"f1 g1 + f2 g2 differs from 1 by {defect:.3g} on the grid")

    def value(z):
        a, b, c, d = (F.derivatives(z) for F in (f1, f2, g1, g2))
        return a[0] * c[2] + b[0] * d[2] + 2.0 * (a[1] * c[1] + b[1] * d[1])

    return AnalyticFunction(value, None, "A_corona")
