"""Direct integration of ``f'' + A f = 0`` in the disc and the checks built on it.

The integrator is a Dormand-Prince 5(4) pair applied to ``(f, f')`` along a
parametrised curve ``z(t)``: ``d/dt (f, f') = z'(t) (f', -A(z) f)``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .analytic import AnalyticFunction, PathSpec, compose_mobius, polynomial, segment_integrals
from .errors import AccuracyError, ContourError, DiscDomainError, PathThroughZeroError, StepSizeError
from .geometry import DiscGrid, disc_point

DEFAULT_TOL = 1e-10
NUDGE = 1e-3
MAX_STEPS = 2_000_000

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


class OdeState(NamedTuple):
    position: complex
    f: complex
    fprime: complex


@dataclass
class SolutionTrace:
    """States at every accepted step; ``waypoint_index[i]`` locates the i-th waypoint."""

    positions: np.ndarray
    f: np.ndarray
    fprime: np.ndarray
    tolerance_achieved: float
    waypoint_index: list = field(default_factory=list)

    @property
    def states(self):
        return [OdeState(complex(z), complex(a), complex(b)) for z, a, b in zip(self.positions, self.f, self.fprime)]

    @property
    def final(self) -> OdeState:
        return OdeState(complex(self.positions[-1]), complex(self.f[-1]), complex(self.fprime[-1]))

    def at_waypoints(self):
        i = self.waypoint_index
        return self.positions[i], self.f[i], self.fprime[i]

    def to_csv(self, path) -> None:
        """Columns: path parameter (arc length), Re z, Im z, Re f, Im f, Re f', Im f'."""
        s = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(self.positions)))])
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["s", "re_z", "im_z", "re_f", "im_f", "re_fprime", "im_fprime"])
            for row in zip(s, self.positions, self.f, self.fprime):
                w.writerow([repr(float(row[0]))] + [repr(float(v)) for c in row[1:] for v in (c.real, c.imag)])


def _coef(A) -> Callable:
    if hasattr(A, "scalar"):
        return A.scalar
    if isinstance(A, AnalyticFunction):
        return lambda z: complex(A(z))
    return A


def _integrate_curve(Af, y, z_of, dz_of, t0, t1, tol, max_dt=None, out=None):
    """Adaptive DP5(4) from ``t0`` to ``t1``; appends ``(z, f, f')`` to ``out``.

    Error scale per component: ``tol * max(|f|, |dz f'|)`` and
    ``tol * max(|f'|, |dz A f|)`` with ``dz`` the step's displacement.
    Returns the final state and the largest accepted error ratio times ``tol``.
    """
    span = t1 - t0
    length = abs(dz_of(t0)) * abs(span)
    dt = span / 16.0 if max_dt is None else math.copysign(min(abs(span) / 16.0, max_dt), span)
    t = t0
    f, fp = y
    worst = 0.0
    k = [None] * 7
    steps = 0

    def rhs(tt, ff, gg):
        z = z_of(tt)
        dz = dz_of(tt)
        return dz * gg, -dz * Af(z) * ff

    k[0] = rhs(t, f, fp)
    while (t1 - t) * math.copysign(1.0, span) > 1e-15 * abs(span):
        if steps > MAX_STEPS:
            raise StepSizeError("too many steps")
        if abs(t1 - t) < abs(dt):
            dt = t1 - t
        # a trial step may overflow; the non-finite error estimate rejects it
        with np.errstate(over="ignore", invalid="ignore"):
            for s in range(1, 7):
                df = sum(_A[s][j] * k[j][0] for j in range(s))
                dg = sum(_A[s][j] * k[j][1] for j in range(s))
                k[s] = rhs(t + _C[s] * dt, f + dt * df, fp + dt * dg)
            nf = f + dt * sum(_B5[j] * k[j][0] for j in range(6))
            ng = fp + dt * sum(_B5[j] * k[j][1] for j in range(6))
            ef = dt * sum(_E[j] * k[j][0] for j in range(7))
            eg = dt * sum(_E[j] * k[j][1] for j in range(7))
        step_len = abs(dz_of(t)) * abs(dt)
        a_abs = abs(k[6][1]) / max(abs(dz_of(t + dt)), 1e-300)
        sc_f = tol * max(abs(f), abs(nf), step_len * abs(ng), 1e-300)
        sc_g = tol * max(abs(fp), abs(ng), step_len * a_abs, 1e-300)
        err = max(abs(ef) / sc_f, abs(eg) / sc_g)
        if not np.isfinite(err):
            err = 1e10
        if err <= 1.0:
            t += dt
            f, fp = nf, ng
            k[0] = k[6]
            worst = max(worst, err * tol)
            steps += 1
            if out is not None:
                out.append((z_of(t), f, fp))
            fac = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
        else:
            fac = max(0.2, 0.9 * err ** -0.2)
        dt *= fac
        if max_dt is not None and abs(dt) > max_dt:
            dt = math.copysign(max_dt, dt)
        if abs(dt) * abs(dz_of(t)) < 1e-14 * max(length, 1e-300):
            raise StepSizeError("step size underflow: coefficient too large or singular along the path")
    return (f, fp), worst


def integrate(A, initial: OdeState, path: PathSpec, tol: float = DEFAULT_TOL) -> SolutionTrace:
    """Integrate along the polygon ``initial.position -> path waypoints``.

    If the path's first waypoint differs from the initial position, a leading
    segment from the initial position is added.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    Af = _coef(A)
    wps = list(path.waypoints)
    z0 = disc_point(initial.position)
    if wps[0] != z0:
        wps.insert(0, z0)
    rows = [(z0, complex(initial.f), complex(initial.fprime))]
    wp_index = [0]
    y = (complex(initial.f), complex(initial.fprime))
    worst = 0.0
    for p, q in zip(wps, wps[1:]):
        d = q - p
        y, w = _integrate_curve(Af, y, lambda t, p=p, d=d: p + t * d, lambda t, d=d: d, 0.0, 1.0, tol, out=rows)
        worst = max(worst, w)
        wp_index.append(len(rows) - 1)
    arr = np.array(rows, dtype=complex)
    return SolutionTrace(arr[:, 0], arr[:, 1], arr[:, 2], worst, wp_index)


def evaluate_solution(A, initial: OdeState, points, tol: float = DEFAULT_TOL):
    """Solution values ``(f, f')`` at ``points``, integrating along rays from ``initial.position``.

    Points on a common ray are reached in a single pass ordered by distance.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    z0 = complex(initial.position)
    fv = np.empty(pts.shape, dtype=complex)
    gv = np.empty(pts.shape, dtype=complex)
    d = pts - z0
    key = np.round(np.angle(d), 12)
    at_base = np.abs(d) == 0
    fv[at_base], gv[at_base] = initial.f, initial.fprime
    for kval in np.unique(key[~at_base]):
        idx = np.where((key == kval) & ~at_base)[0]
        idx = idx[np.argsort(np.abs(d[idx]))]
        ray = [z0]
        slot = []
        for i in idx:
            if pts[i] != ray[-1]:
                ray.append(pts[i])
            slot.append(len(ray) - 1)
        trace = integrate(A, initial, PathSpec(tuple(ray)), tol)
        _, fs, gs = trace.at_waypoints()
        fv[idx], gv[idx] = fs[slot], gs[slot]
    shape = np.shape(points)
    return fv.reshape(shape), gv.reshape(shape)


class OdeSolution(AnalyticFunction):
    """Solution evaluator backed by direct integration from an initial state."""

    def __init__(self, A, initial: OdeState, tol: float = DEFAULT_TOL, label: str = "ode"):
        self.A = A
        self.initial = initial
        self.tol = tol
        super().__init__(lambda z: evaluate_solution(A, initial, z, tol)[0], None, label)

    def with_derivative(self, z):
        return evaluate_solution(self.A, self.initial, z, self.tol)


# argument principle --------------------------------------------------------


@dataclass(frozen=True)
class WindingReport:
    count: int
    raw: complex
    radius: float
    center: complex
    min_abs_f: float
    closure_error: float
    steps: int


def _circle_trace(Af, start_state, center, radius, theta0, tol, max_dtheta):
    rows = [(start_state.position, start_state.f, start_state.fprime)]

    def z_of(t):
        return center + radius * complex(math.cos(t), math.sin(t))

    def dz_of(t):
        return 1j * radius * complex(math.cos(t), math.sin(t))

    y, _ = _integrate_curve(
        Af, (start_state.f, start_state.fprime), z_of, dz_of, theta0, theta0 + 2 * math.pi, tol, max_dtheta, rows
    )
    return np.array(rows, dtype=complex)


def contour_winding(
    A,
    initial: OdeState,
    radius: float,
    center: complex = 0j,
    tol: float = DEFAULT_TOL,
    theta0: float = 0.0,
    max_steps_per_turn: int = 256,
) -> WindingReport:
    """``(1 / 2 pi i) \\oint f'/f dz`` over ``|z - center| = radius``.

    The solution is carried radially from ``initial`` to the contour, then
    around it. The integral of ``f'/f`` over each accepted step is the
    principal logarithm of ``f_{k+1}/f_k``; steps are kept short enough that
    every such increment turns by less than ``pi/2``. If ``|f|`` on the contour
    drops to ``10 tol`` or below the radius is nudged (shrunk, then grown) by
    ``1e-3 radius``.
    """
    Af = _coef(A)
    center = complex(center)
    radii = [radius, radius * (1 - NUDGE), radius * (1 + NUDGE)]
    for r in radii:
        if abs(center) + r >= 1.0:
            continue
        start = center + r * complex(math.cos(theta0), math.sin(theta0))
        if start != initial.position:
            s0 = integrate(Af, initial, PathSpec((initial.position, start)), tol).final
        else:
            s0 = initial
        max_dtheta = 2 * math.pi / max_steps_per_turn
        for _ in range(6):
            rows = _circle_trace(Af, s0, center, r, theta0, tol, max_dtheta)
            f = rows[:, 1]
            incr = np.log(f[1:] / f[:-1])
            if np.all(np.abs(incr.imag) < math.pi / 2):
                break
            max_dtheta /= 4
        else:
            raise AccuracyError("could not resolve the argument of f along the contour")
        absf = np.abs(f)
        if absf.min() <= 10 * tol:
            continue
        raw = incr.sum() / (2j * math.pi)
        n = int(round(raw.real))
        closure = abs(f[-1] - f[0]) / absf.max()
        if abs(raw - n) > 0.1:
            raise AccuracyError(f"argument-principle value {raw} is not near an integer")
        return WindingReport(n, complex(raw), r, center, float(absf.min()), float(closure), len(rows) - 1)
    raise ContourError("contour passes too close to a zero of the solution after two nudges")


def count_zeros(A, initial: OdeState, radius: float, center: complex = 0j, tol: float = DEFAULT_TOL) -> int:
    return contour_winding(A, initial, radius, center, tol).count


# verification of built bundles -------------------------------------------------


@dataclass
class VerificationReport:
    passed: bool
    max_abs_f_at_zeros: float
    count: int
    expected_count: int
    winding: WindingReport | None
    radial_rel_error: float
    messages: list = field(default_factory=list)

    def record(self) -> dict:
        return {
            "passed": self.passed,
            "max_abs_f_at_zeros": self.max_abs_f_at_zeros,
            "count": self.count,
            "expected_count": self.expected_count,
            "raw_winding": None if self.winding is None else self.winding.raw,
            "contour_radius": None if self.winding is None else self.winding.radius,
            "radial_rel_error": self.radial_rel_error,
        }


def initial_state(F: AnalyticFunction, z0=0j) -> OdeState:
    v, d1, _, _ = F.derivatives(np.asarray(z0, dtype=complex))
    return OdeState(complex(z0), complex(v), complex(d1))


def radial_agreement(bundle, radius: float, tol: float = DEFAULT_TOL, samples: int = 64) -> float:
    """Largest relative gap between the integrated and closed-form solution on ``[0, radius]``.

    The scale at ``z`` is ``max(|f|, (1 - |z|^2) |f'|)``, which stays positive
    through simple zeros.
    """
    zs = np.linspace(0.0, radius, samples + 1)[1:]
    zs = np.unique(np.concatenate([zs, bundle.zeros.points[(bundle.zeros.points.imag == 0)
                                                         & (bundle.zeros.points.real > 0)
                                                         & (bundle.zeros.points.real <= radius)].real]))
    trace = integrate(bundle.A, initial_state(bundle.f), PathSpec(tuple([0j] + list(zs.astype(complex)))), tol)
    _, f_ode, _ = trace.at_waypoints()
    f0, f1, _, _ = bundle.f.derivatives(zs.astype(complex))
    scale = np.maximum(np.abs(f0), (1 - zs**2) * np.abs(f1))
    return float(np.max(np.abs(f_ode[1:] - f0) / scale))


def verify_prescribed_zeros(
    bundle, tol: float = DEFAULT_TOL, radius: float = 0.995, zero_tol: float = 1e-10, radial_tol: float = 1e-6
) -> VerificationReport:
    """Check vanishing at the zeros, the argument-principle count, and radial agreement.

    Failures of individual checks are collected in ``messages`` (count ``-1``
    when the contour integral itself could not be resolved) rather than raised.
    """
    msgs = []
    zeros = bundle.zeros.points
    fz = float(np.max(np.abs(bundle.f(zeros)))) if zeros.size else 0.0
    if fz >= zero_tol:
        msgs.append(f"|f(z_n)| up to {fz:.3g}")
    expected = int(np.sum(np.abs(zeros) <= radius))
    init = initial_state(bundle.f)
    if init.f == 0 and init.fprime == 0:
        raise DiscDomainError("solution has a double zero at the origin")
    try:
        wr = contour_winding(bundle.A, init, radius, tol=tol)
        count = wr.count
        if count != expected:
            msgs.append(f"argument principle counts {count} (raw {wr.raw:.6g}), expected {expected}")
    except (AccuracyError, ContourError, StepSizeError) as exc:
        wr, count = None, -1
        msgs.append(f"argument principle failed: {exc}")
    try:
        rel = radial_agreement(bundle, radius, tol)
    except StepSizeError as exc:
        rel = math.inf
        msgs.append(f"radial re-integration failed: {exc}")
    if rel > radial_tol and math.isfinite(rel):
        msgs.append(f"radial re-integration differs by {rel:.3g} relative")
    return VerificationReport(not msgs, fz, count, expected, wr, rel, msgs)


# second solutions -----------------------------------------------------------


def second_solution(f: AnalyticFunction, base, z, waypoints=(), subintervals: int = 16):
    """Reduction of order: ``g = f * int_base^z dz / f^2``; returns ``(g(z), g'(z))``.

    ``W(f, g) = f g' - f' g = 1``. Raises if ``|f|`` falls below ``1e-10`` on
    the polygonal path ``base -> waypoints -> z``.
    """
    pts = [disc_point(base)] + [disc_point(w) for w in waypoints] + [disc_point(z)]
    total = 0j
    for p, q in zip(pts, pts[1:]):
        probe = p + (q - p) * np.linspace(0.0, 1.0, 8 * subintervals + 1)
        if np.min(np.abs(f(probe))) < 1e-10:
            raise PathThroughZeroError("reduction-of-order path passes through a zero of f")
        total += complex(
            segment_integrals(lambda s: 1.0 / np.asarray(f(s)) ** 2, p, np.array([q]), subintervals)[0]
        )
    fz, f1, _, _ = f.derivatives(np.asarray(pts[-1]))
    fz, f1 = complex(fz), complex(f1)
    return fz * total, f1 * total + 1.0 / fz


def choose_base(f: AnalyticFunction, candidates=(0j, 0.5, 0.5j, -0.5, -0.5j), floor: float = 1e-8) -> complex:
    """First candidate point where ``|f|`` exceeds ``floor``."""
    for c in candidates:
        if abs(complex(f(complex(c)))) > floor:
            return complex(c)
    raise PathThroughZeroError("no admissible base point for reduction of order")


class ReducedSecondSolution:
    """Evaluator of ``g = f int_base dz / f^2`` with ``W(f, g) = 1``.

    Points are reached along the segment from ``base``; a segment meeting a
    zero of ``f`` is rerouted once through a waypoint turned by ``turn``
    radians about the base. At the zeros of ``f`` themselves the Wronskian
    forces ``g(z_n) = -1 / f'(z_n)``, which is used directly.
    """

    def __init__(self, f: AnalyticFunction, base=None, zeros=(), turn: float = 0.5, subintervals: int = 16):
        self.f = f
        self.base = choose_base(f) if base is None else disc_point(base)
        self.zeros = np.asarray(zeros, dtype=complex)
        self.turn = turn
        self.subintervals = subintervals
        if self.zeros.size:
            _, d1, _, _ = f.derivatives(self.zeros)
            self._at_zero = {complex(z): -1.0 / complex(d) for z, d in zip(self.zeros, d1)}
        else:
            self._at_zero = {}

    def _one(self, z):
        z = complex(z)
        if z in self._at_zero:
            return self._at_zero[z]
        if z == self.base:
            return 0j
        try:
            return second_solution(self.f, self.base, z, (), self.subintervals)[0]
        except PathThroughZeroError:
            mid = self.base + 0.5 * (z - self.base) * complex(math.cos(self.turn), math.sin(self.turn))
            return second_solution(self.f, self.base, z, (mid,), self.subintervals)[0]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            out = np.array([self._one(v) for v in z.ravel()], dtype=complex)
        return out.reshape(z.shape) if z.ndim else out[0]


def wronskian_partner(state: OdeState) -> OdeState:
    """Initial data ``(g, g')`` at the same point with ``f g' - f' g = 1``."""
    if abs(state.f) >= abs(state.fprime):
        return OdeState(state.position, 0j, 1.0 / state.f)
    return OdeState(state.position, -1.0 / state.fprime, 0j)


def wronskian(f, fp, g, gp):
    return f * gp - fp * g


# conformal transport -----------------------------------------------------------


def conformal_transport(A: AnalyticFunction, a) -> AnalyticFunction:
    """``z -> A(phi_a(z)) phi_a'(z)^2``, the coefficient satisfied by transported solutions."""
    a = disc_point(a)
    w = 1.0 - abs(a) ** 2
    ac = a.conjugate()

    def dsq_jet(z):
        u = 1.0 / (1.0 - ac * z)
        s = w * w
        return s * u**4, 4 * s * ac * u**5, 20 * s * ac**2 * u**6, 120 * s * ac**3 * u**7

    dsq = AnalyticFunction(lambda z: dsq_jet(z)[0], dsq_jet, "phi'^2")
    return compose_mobius(A, a) * dsq


def transport_solution(f: AnalyticFunction, a) -> AnalyticFunction:
    """``(f o phi_a) (phi_a')^(-1/2)``.

    ``phi_a'(z) = -(1 - |a|^2) / (1 - conj(a) z)^2`` has the global analytic
    square root ``i sqrt(1 - |a|^2) / (1 - conj(a) z)``, so the branch is fixed
    once on the whole disc and no path tracking is needed.
    """
    a = disc_point(a)
    s = math.sqrt(1.0 - abs(a) ** 2)
    inv_sqrt = polynomial([-1j / s, 1j * a.conjugate() / s])
    return compose_mobius(f, a) * inv_sqrt


def newton_zero(F: AnalyticFunction, z0, tol: float = 1e-14, maxiter: int = 50) -> complex:
    z = complex(z0)
    for _ in range(maxiter):
        v, d1, _, _ = F.derivatives(np.asarray(z))
        step = complex(v) / complex(d1)
        z -= step
        if abs(step) < tol * max(1.0, abs(z)):
            break
    return z


# oscillation bound ---------------------------------------------------------------


class OscillationBound(NamedTuple):
    value: float | None
    at_most_one_zero: bool


def theorem1_bound(norm: float) -> OscillationBound:
    """Upper bound on the upper uniform density of zeros when ``||A||_{H^inf_2} = norm``.

    With ``t = 1 - 2 sqrt(N) / (N + 1) = (sqrt(N) - 1)^2 / (N + 1)`` the bound is
    ``(2 pi + 1) t^(1/2) (1 - t^(1/2))^(-2)``. For ``N <= 1`` every non-trivial
    solution has at most one zero; ``N = 1`` returns the value 0 together with
    that flag, ``N < 1`` returns no value.
    """
    if not math.isfinite(norm):
        raise ValueError("norm must be finite")
    if norm < 1.0:
        return OscillationBound(None, True)
    t = (math.sqrt(norm) - 1.0) ** 2 / (norm + 1.0)
    s = math.sqrt(t)
    return OscillationBound((2.0 * math.pi + 1.0) * s / (1.0 - s) ** 2, norm <= 1.0)


# normality ---------------------------------------------------------------------


@dataclass
class NormalityReport:
    sup_sampled: float
    argmax: complex
    per_point: np.ndarray
    at_zeros: np.ndarray

    def growth_ratios(self) -> np.ndarray:
        v = self.at_zeros
        return v[1:] / v[:-1] if v.size > 1 else np.empty(0)


def values_at_zeros(f: AnalyticFunction, zeros) -> np.ndarray:
    """``(1 - |z_n|^2) / |g(z_n)|^2 = (1 - |z_n|^2) |f'(z_n)|^2`` for any ``g`` with ``W(f, g) = 1``."""
    zeros = np.asarray(zeros, dtype=complex)
    if zeros.size == 0:
        return np.empty(0)
    _, d1, _, _ = f.derivatives(zeros)
    return (1.0 - np.abs(zeros) ** 2) * np.abs(d1) ** 2


def normality_diagnostic(f, g, grid: DiscGrid, zeros=(), base=None) -> NormalityReport:
    """Samples of ``(1 - |z|^2) w^#(z) = (1 - |z|^2) / (|f|^2 + |g|^2)`` for ``w = g/f``.

    ``f`` and ``g`` are callables returning solution values; the identity uses
    ``W(f, g) = 1``. At prescribed zeros ``z_n`` of ``f`` the value is
    ``(1 - |z_n|^2) / |g(z_n)|^2``. If ``base`` is given as ``(z, f, f', g, g')``
    the Wronskian there is checked first.
    """
    if base is not None:
        _, f0, f1, g0, g1 = base
        if abs(wronskian(f0, f1, g0, g1) - 1.0) > 1e-9:
            raise DiscDomainError("solutions are not Wronskian-normalised")
    pts = grid.points
    with np.errstate(over="ignore"):
        # overflow of |f| or |g| means the value underflows to 0
        vals = (1.0 - np.abs(pts) ** 2) / (np.abs(f(pts)) ** 2 + np.abs(g(pts)) ** 2)
    i = int(np.argmax(vals))
    zeros = np.asarray(zeros, dtype=complex)
    at_zeros = (1.0 - np.abs(zeros) ** 2) / np.abs(g(zeros)) ** 2 if zeros.size else np.empty(0)
    return NormalityReport(float(vals[i]), complex(pts[i]), vals, np.asarray(at_zeros, dtype=float))


def solution_ratio(f: AnalyticFunction, g=None) -> AnalyticFunction:
    """``w = g / f`` with derivatives from ``w' = 1/f^2`` (valid when ``W(f, g) = 1``).

    The derivatives of ``w`` involve ``f`` only, so ``g`` may be omitted when
    just those are needed (for the Schwarzian); the value is then ``nan``.
    """

    def value(z):
        if g is None:
            return np.full(np.shape(z), np.nan + 0j)
        return np.asarray(g(z)) / np.asarray(f(z))

    def jet_fn(z):
        f0, f1, f2, _ = f.derivatives(z)
        return value(z), 1.0 / f0**2, -2.0 * f1 / f0**3, (-2.0 * f2 * f0 + 6.0 * f1 * f1) / f0**4

    return AnalyticFunction(value, jet_fn, "w")
