"""Finite Blaschke products with stable derivatives, including at their own zeros."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import AnalyticFunction, growth_norm, leibniz
from .errors import PreconditionError
from .geometry import DiscGrid, disc_point, pseudo_distance
from .sequences import PointSequence

#: Above this many zeros the value is accumulated as a sum of complex logarithms.
LOG_ACCUMULATION_THRESHOLD = 32
_CHUNK = 4_000_000


def _unimodular(zeros: np.ndarray) -> np.ndarray:
    """Constants making ``c (a - z) / (1 - conj(a) z)`` the standard factor.

    For ``a != 0`` this is ``|a| / a``; for ``a = 0`` it is ``-1`` so that the
    factor reduces to ``z``.
    """
    c = -np.ones(zeros.size, dtype=complex)
    nz = zeros != 0
    # through the argument: complex division overflows for subnormal moduli
    c[nz] = np.exp(-1j * np.angle(zeros[nz]))
    return c


class BlaschkeProduct(AnalyticFunction):
    """``B(z) = prod_n c_n (z_n - z) / (1 - conj(z_n) z)`` over a finite sequence."""

    def __init__(self, zeros: PointSequence):
        if not isinstance(zeros, PointSequence):
            zeros = PointSequence(zeros)
        self.zeros = zeros
        self._a = zeros.points
        self._ac = np.conj(self._a)
        self._c = _unimodular(self._a)
        self._w = 1.0 - np.abs(self._a) ** 2
        super().__init__(self._evaluate, self._jet, label=f"B[{len(zeros)}]")

    def __len__(self):
        return len(self.zeros)

    def factors(self, z) -> np.ndarray:
        """Factor values ``b_n(z)``, shape ``(n_zeros,) + z.shape``."""
        z = np.asarray(z, dtype=complex)
        a = self._a.reshape((-1,) + (1,) * z.ndim)
        ac = self._ac.reshape(a.shape)
        c = self._c.reshape(a.shape)
        return c * (a - z) / (1.0 - ac * z)

    def _evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        if self._a.size == 0:
            return np.ones(z.shape, dtype=complex)
        flat = z.ravel()
        out = np.empty(flat.shape, dtype=complex)
        step = max(1, _CHUNK // self._a.size)
        for i in range(0, flat.size, step):
            b = self.factors(flat[i:i + step])
            if self._a.size <= LOG_ACCUMULATION_THRESHOLD:
                out[i:i + step] = np.prod(b, axis=0)
            else:
                with np.errstate(divide="ignore", invalid="ignore"):
                    logs = np.log(b)
                zero = ~np.isfinite(logs.real)
                logs[zero] = 0.0
                vals = np.exp(logs.sum(axis=0))
                vals[zero.any(axis=0)] = 0.0
                out[i:i + step] = vals
        return out.reshape(z.shape)

    def _jet(self, z):
        z = np.asarray(z, dtype=complex)
        if self._a.size == 0:
            one = np.ones(z.shape, dtype=complex)
            return one, 0 * one, 0 * one, 0 * one
        flat = z.ravel()
        parts = [np.empty(flat.shape, dtype=complex) for _ in range(4)]
        step = max(1, _CHUNK // self._a.size)
        for i in range(0, flat.size, step):
            for p, q in zip(parts, self._jet_flat(flat[i:i + step])):
                p[i:i + step] = q
        return tuple(p.reshape(z.shape) for p in parts)

    def _jet_flat(self, z):
        # The factor nearest to z is differentiated directly; the remaining
        # product Q is differentiated through its logarithmic derivative,
        # which is regular near z. No division by a vanishing factor occurs.
        a = self._a[:, None]
        ac = self._ac[:, None]
        c = self._c[:, None]
        w = self._w[:, None]
        d = a - z[None, :]
        u = 1.0 / (1.0 - ac * z[None, :])
        cols = np.arange(z.size)
        near = np.argmin(np.abs(d), axis=0)

        b = c * d * u
        b_rest = b.copy()
        b_rest[near, cols] = 1.0
        d_safe = d.copy()
        d_safe[near, cols] = 1.0
        inv = 1.0 / d_safe
        L1 = -inv + ac * u
        L2 = -inv**2 + ac**2 * u**2
        L3 = -2.0 * inv**3 + 2.0 * ac**3 * u**3
        for L in (L1, L2, L3):
            L[near, cols] = 0.0
        if self._a.size <= LOG_ACCUMULATION_THRESHOLD:
            Q = np.prod(b_rest, axis=0)
        else:
            Q = np.exp(np.log(b_rest).sum(axis=0))
        S1, S2, S3 = L1.sum(axis=0), L2.sum(axis=0), L3.sum(axis=0)
        q_jet = (Q, Q * S1, Q * (S1 * S1 + S2), Q * (S1**3 + 3 * S1 * S2 + S3))

        an, acn, cn, wn = self._a[near], self._ac[near], self._c[near], self._w[near]
        un = 1.0 / (1.0 - acn * z)
        k = -cn * wn
        b_jet = (cn * (an - z) * un, k * un**2, 2.0 * k * acn * un**3, 6.0 * k * acn**2 * un**4)
        return leibniz(b_jet, q_jet)

    # derivatives at the zeros --------------------------------------------

    def _others_at(self, n: int):
        a_n = self._a[n]
        mask = np.arange(self._a.size) != n
        a, ac, c = self._a[mask], self._ac[mask], self._c[mask]
        d = a - a_n
        u = 1.0 / (1.0 - ac * a_n)
        prod = np.prod(c * d * u) if a.size else 1.0 + 0j
        logderiv = np.sum(-1.0 / d + ac * u) if a.size else 0j
        return complex(prod), complex(logderiv)

    def _check_index(self, n):
        if not 0 <= n < len(self):
            raise IndexError(f"zero index {n} out of range for {len(self)} zeros")

    def derivative_at_zero(self, n: int):
        """``(B'(z_n), (1 - |z_n|^2) |B'(z_n)|)`` from the factorised form."""
        self._check_index(n)
        P, _ = self._others_at(n)
        d1 = -self._c[n] / self._w[n] * P
        return complex(d1), float(self._w[n] * abs(d1))

    def second_derivative_at_zero(self, n: int) -> complex:
        """``B''(z_n) = b_n'' P + 2 b_n' P S`` with ``P``, ``S`` the product and log-derivative of the other factors."""
        self._check_index(n)
        P, S = self._others_at(n)
        c, w, ac = self._c[n], self._w[n], self._ac[n]
        b1 = -c / w
        b2 = -2.0 * c * ac / w**2
        return complex(b2 * P + 2.0 * b1 * P * S)

    def derivatives_at_zeros(self):
        """Arrays of ``B'(z_n)`` and ``B''(z_n)`` for every zero."""
        d1 = np.array([self.derivative_at_zero(n)[0] for n in range(len(self))], dtype=complex)
        d2 = np.array([self.second_derivative_at_zero(n) for n in range(len(self))], dtype=complex)
        return d1, d2


def eval_B(B: BlaschkeProduct, z):
    return B(z)


def derivative_at_zero(B: BlaschkeProduct, n: int):
    return B.derivative_at_zero(n)


def second_derivative_at_zero(B: BlaschkeProduct, n: int) -> complex:
    return B.second_derivative_at_zero(n)


@dataclass(frozen=True)
class SchwarzBoundReport:
    max_ratio: float
    norm: float
    n_points: int
    argmax: complex


def schwarz_bound_check(
    g: AnalyticFunction,
    z0,
    delta: float,
    alpha: float,
    grid: DiscGrid,
    norm: float | None = None,
) -> SchwarzBoundReport:
    """Empirical constant in ``|g(z)| <= C ||g|| rho(z, z0) / (1 - |z0|^2)^alpha`` on ``Delta(z0, delta)``.

    ``norm`` defaults to the grid estimate of the growth norm of ``g``.
    """
    z0 = disc_point(z0)
    if abs(complex(g(z0))) >= 1e-10:
        raise PreconditionError("g must vanish at z0")
    if not 0.0 < delta < 1.0:
        raise PreconditionError("delta must lie in (0, 1)")
    if norm is None:
        norm = growth_norm(g, alpha, grid).value
    pts = grid.points
    rho = pseudo_distance(z0, pts)
    inside = (rho < delta) & (rho > 0)
    if not inside.any():
        return SchwarzBoundReport(0.0, float(norm), 0, z0)
    zi, ri = pts[inside], rho[inside]
    ratio = np.abs(g(zi)) * (1.0 - abs(z0) ** 2) ** alpha / (norm * ri)
    i = int(np.argmax(ratio))
    return SchwarzBoundReport(float(ratio[i]), float(norm), int(inside.sum()), complex(zi[i]))
