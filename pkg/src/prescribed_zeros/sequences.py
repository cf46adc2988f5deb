"""Finite point sequences in the disc and their separation and density statistics."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import DegenerateInputError, DiscDomainError, SequenceFormatError
from .geometry import BOUNDARY_TOL, DiscGrid, cayley, disc_points, pseudo_distance

#: Default boundary cutoff for lattice truncations.
LATTICE_EPS = 1e-6


class PointSequence:
    """Ordered finite list of pairwise distinct points of the disc."""

    def __init__(self, points=()):
        pts = disc_points(points)
        if pts.size > 1:
            # exact duplicates only; near-coincident points are legal but poorly separated
            if np.unique(pts).size != pts.size:
                raise DegenerateInputError("sequence points must be pairwise distinct")
        pts.setflags(write=False)
        self._points = pts

    @property
    def points(self) -> np.ndarray:
        return self._points

    def __len__(self):
        return self._points.size

    def __iter__(self):
        return iter(self._points)

    def __getitem__(self, i):
        return self._points[i]

    def __repr__(self):
        return f"PointSequence(n={len(self)})"

    def __eq__(self, other):
        return isinstance(other, PointSequence) and np.array_equal(self.points, other.points)

    def mapped(self, f) -> "PointSequence":
        return PointSequence(np.asarray(f(self._points), dtype=complex))

    @classmethod
    def exponential(cls, n: int) -> "PointSequence":
        """``{1 - 2^-k : k = 1..n}``, the running example of a uniformly separated sequence."""
        return cls(1.0 - 2.0 ** -np.arange(1, n + 1, dtype=float))


def pairwise_rho(seq: PointSequence) -> np.ndarray:
    z = seq.points
    return pseudo_distance(z[:, None], z[None, :])


def local_separation(seq: PointSequence) -> np.ndarray:
    """For each point, pseudo-hyperbolic distance to its nearest neighbour (1 if alone)."""
    if len(seq) < 2:
        return np.ones(len(seq))
    rho = pairwise_rho(seq)
    np.fill_diagonal(rho, np.inf)
    return rho.min(axis=1)


def _require_pairs(seq: PointSequence):
    if len(seq) < 2:
        raise DegenerateInputError("separation needs at least two points")


def separation_constant(seq: PointSequence) -> float:
    """``min_{n != k} rho(z_n, z_k)``."""
    _require_pairs(seq)
    return float(local_separation(seq).min())


def uniform_separation_products(seq: PointSequence) -> np.ndarray:
    """``prod_{n != k} rho(z_n, z_k)`` for each k, accumulated as a log-sum."""
    _require_pairs(seq)
    rho = pairwise_rho(seq)
    np.fill_diagonal(rho, 1.0)
    with np.errstate(divide="ignore"):
        return np.exp(np.log(rho).sum(axis=0))


def uniform_separation_constant(seq: PointSequence) -> float:
    return float(uniform_separation_products(seq).min())


def blaschke_sum(seq: PointSequence) -> float:
    """``sum (1 - |z_n|)`` over the finite truncation."""
    return float(np.sum(1.0 - np.abs(seq.points)))


def counting_integral(seq: PointSequence, zeta, r: float, _rho=None) -> float:
    """``int_0^r n(seq, zeta, s) ds`` in closed form.

    A point at distance ``rho < r`` from ``zeta`` is counted for ``s`` in
    ``(rho, r)``, so it contributes ``r - rho``.
    """
    if not 0.0 < r < 1.0:
        raise DiscDomainError("radius must lie in (0, 1)")
    rho = pseudo_distance(zeta, seq.points) if _rho is None else _rho
    rho = np.asarray(rho)
    return float(np.sum(np.clip(r - rho, 0.0, None)))


class DensityEstimate(NamedTuple):
    value: float
    r_max: float
    n_centers: int
    extremal_center: complex


def default_density_centers(seq: PointSequence) -> DiscGrid:
    return DiscGrid.from_points(np.concatenate([[0j], seq.points]))


def _density_values(seq, r_max, centers, chunk=2_000_000):
    if not 0.0 < r_max < 1.0:
        raise DiscDomainError("r_max must lie in (0, 1)")
    c = centers.points
    z = seq.points
    out = np.zeros(c.size)
    if z.size == 0:
        return out
    # chunk over centers to bound memory
    step = max(1, chunk // max(1, z.size))
    for i in range(0, c.size, step):
        rho = pseudo_distance(c[i:i + step, None], z[None, :])
        out[i:i + step] = np.clip(r_max - rho, 0.0, None).sum(axis=1)
    return out / math.log(1.0 / (1.0 - r_max))


def density_upper(seq: PointSequence, r_max: float, centers: DiscGrid | None = None) -> DensityEstimate:
    """Finite proxy for the upper uniform density at radius ``r_max``."""
    centers = default_density_centers(seq) if centers is None else centers
    vals = _density_values(seq, r_max, centers)
    i = int(np.argmax(vals))
    return DensityEstimate(float(vals[i]), r_max, len(centers), complex(centers.points[i]))


def density_lower(seq: PointSequence, r_max: float, centers: DiscGrid | None = None) -> DensityEstimate:
    """Finite proxy for the lower uniform density at radius ``r_max``."""
    centers = default_density_centers(seq) if centers is None else centers
    vals = _density_values(seq, r_max, centers)
    i = int(np.argmin(vals))
    return DensityEstimate(float(vals[i]), r_max, len(centers), complex(centers.points[i]))


# Seip lattice ---------------------------------------------------------------


@dataclass(frozen=True)
class LatticeParams:
    """Parameters of the lattice ``{a^j (b k + i)}`` and its index ranges (inclusive)."""

    a: float
    b: float
    j_range: tuple = (0, 0)
    k_range: tuple = (0, 0)

    def __post_init__(self):
        if not self.a > 1.0:
            raise DiscDomainError("lattice parameter a must exceed 1")
        if not self.b > 0.0:
            raise DiscDomainError("lattice parameter b must be positive")
        for lo, hi in (self.j_range, self.k_range):
            if lo > hi:
                raise DiscDomainError("lattice index ranges must be nonempty")

    @property
    def density(self) -> float:
        """Uniform density ``2 pi / (b log a)`` of the full lattice."""
        return 2.0 * math.pi / (self.b * math.log(self.a))


def seip_lattice(params: LatticeParams) -> PointSequence:
    """Cayley image of ``a^j (b k + i)`` over the index ranges."""
    j = np.arange(params.j_range[0], params.j_range[1] + 1, dtype=float)
    k = np.arange(params.k_range[0], params.k_range[1] + 1, dtype=float)
    zeta = (params.a ** j)[:, None] * (params.b * k[None, :] + 1j)
    w = np.asarray(cayley(zeta.ravel()), dtype=complex)
    w = w[np.abs(w) < 1.0 - BOUNDARY_TOL]
    _, idx = np.unique(w, return_index=True)
    return PointSequence(w[np.sort(idx)])


def lattice_ring(a: float, b: float, j: int, eps: float = LATTICE_EPS) -> np.ndarray:
    """Cayley images of ``a^j (b k + i)`` with modulus below ``1 - eps``, ordered by k.

    With ``zeta = a^j (b k + i)``, ``1 - |w|^2 = 4 a^j / (a^{2j}(b^2 k^2 + 1) + 2 a^j + 1)``
    decreases in ``|k|``, so the admissible k form a symmetric interval.
    """
    tau = 1.0 - (1.0 - eps) ** 2
    aj = a ** j
    rhs = 4.0 * aj / tau - aj * aj - 2.0 * aj - 1.0
    if rhs < 0:
        return np.empty(0, dtype=complex)
    kmax = int(math.floor(math.sqrt(rhs) / (aj * b)))
    k = np.arange(-kmax, kmax + 1, dtype=float)
    w = (aj * (b * k + 1j) - 1j) / (aj * (b * k + 1j) + 1j)
    return w[np.abs(w) < 1.0 - eps]


def lattice_j_bounds(a: float, eps: float = LATTICE_EPS) -> tuple:
    """Smallest and largest j whose ring has a point of modulus below ``1 - eps``.

    The k = 0 point ``cayley(i a^j) = (a^j - 1) / (a^j + 1)`` is the innermost
    point of its ring.
    """
    # |w| = |a^j - 1| / (a^j + 1) < 1 - eps  <=>  a^j in ((eps)/(2 - eps), (2 - eps)/eps)
    lo = math.log(eps / (2.0 - eps)) / math.log(a)
    hi = math.log((2.0 - eps) / eps) / math.log(a)
    return math.floor(lo) + 1, math.ceil(hi) - 1


def seip_lattice_truncated(a: float, b: float, eps: float = LATTICE_EPS, j_window=None) -> PointSequence:
    """All lattice points with modulus below ``1 - eps``, optionally restricted to a j-window."""
    jlo, jhi = lattice_j_bounds(a, eps)
    if j_window is not None:
        jlo, jhi = max(jlo, j_window[0]), min(jhi, j_window[1])
    rings = [lattice_ring(a, b, j, eps) for j in range(jlo, jhi + 1)]
    pts = np.concatenate(rings) if rings else np.empty(0, dtype=complex)
    return PointSequence(pts)


def boundary_log_distance(seq: PointSequence, quad_nodes: int = 4096) -> float:
    """Trapezoidal value of ``int_0^{2 pi} log dist(e^{i theta}, seq) d theta``."""
    if len(seq) == 0:
        raise DegenerateInputError("boundary distance needs a nonempty sequence")
    if quad_nodes < 16:
        raise ValueError("quad_nodes must be at least 16")
    theta = 2.0 * np.pi * np.arange(quad_nodes) / quad_nodes
    u = np.exp(1j * theta)
    dist = np.min(np.abs(u[:, None] - seq.points[None, :]), axis=1)
    return float(2.0 * np.pi * np.mean(np.log(dist)))


# file format ----------------------------------------------------------------


def sequence_to_dict(seq: PointSequence) -> dict:
    return {"points": [{"re": float(z.real), "im": float(z.imag)} for z in seq.points]}


def dumps_sequence(seq: PointSequence) -> str:
    return json.dumps(sequence_to_dict(seq), indent=2, sort_keys=True) + "\n"


def write_sequence(seq: PointSequence, path) -> None:
    Path(path).write_text(dumps_sequence(seq))


def loads_sequence(text: str, allow_empty: bool = False) -> PointSequence:
    """Parse ``{"points": [{"re": x, "im": y}, ...]}``, validating every entry."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SequenceFormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict) or "points" not in doc:
        raise SequenceFormatError('missing top-level "points" list', "document")
    raw = doc["points"]
    if not isinstance(raw, list):
        raise SequenceFormatError('"points" must be a list', "points")
    if not raw and not allow_empty:
        raise SequenceFormatError("sequence is empty", "points")
    pts = []
    for i, item in enumerate(raw):
        loc = f"points[{i}]"
        if not isinstance(item, dict) or set(item) != {"re", "im"}:
            raise SequenceFormatError('each point must be an object with keys "re" and "im"', loc)
        vals = []
        for key in ("re", "im"):
            v = item[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise SequenceFormatError(f"{key} must be a finite number", f"{loc}.{key}")
            vals.append(float(v))
        z = complex(*vals)
        if abs(z) >= 1.0 - BOUNDARY_TOL:
            raise SequenceFormatError("point is not strictly inside the unit disc", loc)
        pts.append(z)
    if len(set(pts)) != len(pts):
        seen = set()
        for i, z in enumerate(pts):
            if z in seen:
                raise SequenceFormatError("duplicate point", f"points[{i}]")
            seen.add(z)
    return PointSequence(pts)


def read_sequence(path, allow_empty: bool = False) -> PointSequence:
    return loads_sequence(Path(path).read_text(), allow_empty=allow_empty)
