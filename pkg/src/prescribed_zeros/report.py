"""Run configuration, report records and the command pipelines behind the CLI."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .analytic import growth_norm, schwarzian
from .builder import build_coefficient, lattice_beta
from .carleson import (
    PointMeasure,
    area_invariant_profile,
    box_constant,
    default_centers,
    invariant_constant_point,
)
from .errors import CriticalPointError, PathThroughZeroError
from .geometry import DiscGrid, make_grid
from .oscillation import (
    ReducedSecondSolution,
    initial_state,
    normality_diagnostic,
    solution_ratio,
    values_at_zeros,
    verify_prescribed_zeros,
)
from .sequences import (
    LatticeParams,
    PointSequence,
    blaschke_sum,
    boundary_log_distance,
    density_lower,
    density_upper,
    loads_sequence,
    read_sequence,
    seip_lattice,
    seip_lattice_truncated,
    separation_constant,
    uniform_separation_constant,
)

COMMANDS = ("sequence", "build", "corollary1", "normal")
#: Below this uniform separation ``build`` refuses without ``force``.
REFUSAL_SEPARATION = 1e-3
DENSITY_SWEEP = (0.5, 0.9, 0.99)
#: Sequences larger than this are not used as their own density centres.
SELF_CENTER_LIMIT = 2000
#: Pairwise separation statistics are O(n^2) in memory.
PAIRWISE_LIMIT = 5000
COROLLARY_EPS = (1e-1, 3e-2, 1e-2, 3e-3)


class RefusalError(ValueError):
    """A hypothesis of the requested computation is violated; exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    sequence_file: str | None = None
    lattice: tuple | None = None
    manifest: str | None = None
    p: tuple = (1.0,)
    rmax: float = 0.999
    grid_radial: int = 12
    grid_angular: int = 128
    tol: float = 1e-10
    verify_radius: float = 0.995
    out: str | None = None
    format: str = "json"
    seed: int = 0
    force: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not 0.0 < self.rmax < 1.0:
            raise ValueError("rmax must lie in (0, 1)")
        if not 0.0 < self.verify_radius < 1.0:
            raise ValueError("verify radius must lie in (0, 1)")
        if self.grid_radial < 1 or self.grid_angular < 1:
            raise ValueError("grid sizes must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        for p in self.p:
            if not 0.0 < p <= 1.0:
                raise ValueError("p must lie in (0, 1]")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        if self.lattice is not None and len(self.lattice) not in (2, 6):
            raise ValueError("lattice takes a,b or a,b,jmin,jmax,kmin,kmax")

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True, default=list)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def grid(self) -> DiscGrid:
        return make_grid(self.rmax, self.grid_radial, self.grid_angular)


def _plain(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [_plain(v.real), _plain(v.imag)]
    if v is None or isinstance(v, str):
        return v
    return str(v)


@dataclass
class Report:
    command: str
    config_hash: str
    records: list = field(default_factory=list)
    ok: bool = True

    def add(self, name: str, value, source: str, **extra) -> None:
        rec = {"name": name, "value": _plain(value), "source": source, "command": self.command,
               "config_hash": self.config_hash}
        for k, v in extra.items():
            rec[k] = _plain(v)
        self.records.append(rec)

    def value(self, name: str):
        for r in self.records:
            if r["name"] == name:
                return r["value"]
        raise KeyError(name)

    def to_json(self) -> str:
        doc = {"command": self.command, "config_hash": self.config_hash, "ok": self.ok, "records": self.records}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        keys = ["command", "config_hash", "name", "value", "source"]
        extra = sorted({k for r in self.records for k in r} - set(keys))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys + extra)
        for r in self.records:
            w.writerow([json.dumps(r.get(k)) if isinstance(r.get(k), list) else r.get(k, "") for k in keys + extra])
        return buf.getvalue()

    def write(self, out_dir, fmt: str) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{self.command}.{fmt}"
        path.write_text(self.to_json() if fmt == "json" else self.to_csv())
        return path


# sources ----------------------------------------------------------------


def lattice_params(values) -> LatticeParams:
    a, b = float(values[0]), float(values[1])
    if len(values) == 2:
        return LatticeParams(a, b)
    jmin, jmax, kmin, kmax = (int(v) for v in values[2:])
    return LatticeParams(a, b, (jmin, jmax), (kmin, kmax))


def load_sequence(config: RunConfig) -> PointSequence:
    if config.sequence_file is not None:
        return read_sequence(config.sequence_file)
    if config.lattice is not None:
        params = lattice_params(config.lattice)
        if len(config.lattice) == 2:
            return seip_lattice_truncated(params.a, params.b, 1.0 - config.rmax)
        return seip_lattice(params)
    raise ValueError("a sequence file or lattice parameters are required")


def density_centers(seq: PointSequence) -> DiscGrid:
    grid = make_grid(0.5, 4, 16).union([0j])
    return grid.union(seq.points) if len(seq) <= SELF_CENTER_LIMIT else grid


# commands --------------------------------------------------------------


def _sequence_records(rep: Report, seq: PointSequence, prefix: str = "") -> None:
    rep.add(prefix + "n_points", len(seq), "sequences")
    if len(seq) > PAIRWISE_LIMIT:
        rep.add(prefix + "separation", None, "skipped: pairwise statistics need n <= %d" % PAIRWISE_LIMIT)
    elif len(seq) >= 2:
        rep.add(prefix + "separation", separation_constant(seq), "sequences.separation_constant")
        rep.add(prefix + "uniform_separation", uniform_separation_constant(seq),
                "sequences.uniform_separation_constant")
    rep.add(prefix + "blaschke_sum", blaschke_sum(seq), "sequences.blaschke_sum")


def cmd_sequence(config: RunConfig) -> Report:
    seq = load_sequence(config)
    if len(seq) == 0:
        raise RefusalError("sequence is empty")
    rep = Report("sequence", config.digest())
    _sequence_records(rep, seq)
    centers = density_centers(seq)
    for r in sorted(set(DENSITY_SWEEP) | {config.rmax}):
        up = density_upper(seq, r, centers)
        lo = density_lower(seq, r, centers)
        rep.add("density_upper", up.value, "sequences.density_upper", r_max=r, center=up.extremal_center)
        rep.add("density_lower", lo.value, "sequences.density_lower", r_max=r, center=lo.extremal_center)
    rep.add("beta", lattice_beta(up.value), "builder.lattice_beta", r_max=up.r_max)
    rep.add("boundary_log_distance", boundary_log_distance(seq), "sequences.boundary_log_distance")
    if len(seq) <= PAIRWISE_LIMIT:
        for p in config.p:
            m = PointMeasure(seq, p)
            inv = invariant_constant_point(m).constant
            box = box_constant(m).constant
            rep.add("point_carleson_invariant", inv, "carleson.invariant_constant_point", p=p)
            rep.add("point_carleson_box", box, "carleson.box_constant", p=p)
            rep.add("point_carleson_box_over_invariant", box / inv if inv > 0 else None, "carleson", p=p)
    if config.lattice is not None:
        rep.add("lattice_density", lattice_params(config.lattice).density, "sequences.LatticeParams.density")
    return rep


def _carleson_records(rep, A, zeros, config, prefix=""):
    centers = default_centers(zeros, config.rmax)
    prof = area_invariant_profile(A, list(config.p), centers)
    for p in config.p:
        res = prof[p]
        rep.add(prefix + "carleson_constant", res.constant, "carleson.area_invariant_profile", p=p,
                maximizer=res.maximizer, refinement_delta=res.refinement_delta, stable=res.stable)


def cmd_build(config: RunConfig) -> Report:
    seq = load_sequence(config)
    if len(seq) == 0:
        raise RefusalError("sequence is empty")
    if len(seq) >= 2:
        usep = uniform_separation_constant(seq)
        if usep < REFUSAL_SEPARATION and not config.force:
            raise RefusalError(
                f"uniform separation {usep:.3g} is below {REFUSAL_SEPARATION}; the construction needs a "
                "uniformly separated sequence (use --force to proceed)"
            )
    rep = Report("build", config.digest())
    _sequence_records(rep, seq)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        bundle = build_coefficient(seq, seed=config.seed)
    for k, v in sorted(bundle.diagnostics.items()):
        rep.add(k, v, "builder.build_coefficient")
    gn = growth_norm(bundle.A, 2.0, config.grid().union(seq.points))
    rep.add("growth_norm_A", gn.value, "analytic.growth_norm", alpha=2.0, argmax=gn.argmax)
    ver = verify_prescribed_zeros(bundle, config.tol, config.verify_radius)
    for k, v in ver.record().items():
        rep.add("verify_" + k, v, "oscillation.verify_prescribed_zeros", radius=config.verify_radius)
    for m in ver.messages:
        rep.add("verify_message", m, "oscillation.verify_prescribed_zeros")
    _carleson_records(rep, bundle.A, seq.points, config)
    rep.ok = ver.passed
    if config.out is not None:
        Path(config.out).mkdir(parents=True, exist_ok=True)
        manifest = bundle.manifest()
        manifest["config_hash"] = rep.config_hash
        (Path(config.out) / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return rep


def cmd_corollary1(config: RunConfig) -> Report:
    if config.lattice is None:
        raise ValueError("corollary1 needs --lattice")
    params = lattice_params(config.lattice)
    if params.density >= 1.0:
        raise RefusalError(
            f"2 pi / (b log a) = {params.density:.6g} is not below 1; the lattice is not a zero set "
            "for this construction"
        )
    rep = Report("corollary1", config.digest())
    rep.add("lattice_density", params.density, "sequences.LatticeParams.density")
    for level, eps in enumerate(COROLLARY_EPS):
        seq = seip_lattice_truncated(params.a, params.b, eps)
        tag = f"level{level}_"
        rep.add(tag + "eps", eps, "cli")
        _sequence_records(rep, seq, tag)
        r = 1.0 - eps
        rep.add(tag + "density_upper", density_upper(seq, r, density_centers(seq)).value,
                "sequences.density_upper", r_max=r)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            bundle = build_coefficient(seq, seed=config.seed)
        gn = growth_norm(bundle.A, 2.0, make_grid(r, config.grid_radial, config.grid_angular).union(seq.points))
        rep.add(tag + "growth_norm_A", gn.value, "analytic.growth_norm", alpha=2.0)
        rep.add(tag + "interp_condition", bundle.diagnostics["interp_condition"], "builder.build_coefficient")
    return rep


def _bundle_from_manifest(path):
    doc = json.loads(Path(path).read_text())
    pts = {"points": [{"re": z[0], "im": z[1]} for z in doc["zeros"]]}
    seq = loads_sequence(json.dumps(pts))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_coefficient(seq)


def cmd_normal(config: RunConfig) -> Report:
    if config.manifest is not None:
        bundle = _bundle_from_manifest(config.manifest)
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            bundle = build_coefficient(load_sequence(config), seed=config.seed)
    rep = Report("normal", config.digest())
    zeros = bundle.zeros.points
    at_zeros = values_at_zeros(bundle.f, zeros)
    for z, v in zip(zeros, at_zeros):
        rep.add("value_at_zero", v, "oscillation.values_at_zeros", zero=complex(z))
    for n in range(1, at_zeros.size):
        rep.add("growth_ratio", at_zeros[n] / at_zeros[n - 1], "oscillation.values_at_zeros", index=n)
    rng = np.random.default_rng(config.seed)
    pts = 0.9 * np.sqrt(rng.random(20)) * np.exp(2j * np.pi * rng.random(20))
    # S_w depends on w' = 1/f^2 only
    w = solution_ratio(bundle.f)
    try:
        S = np.array([complex(schwarzian(w, z)) for z in pts])
    except CriticalPointError as exc:
        rep.add("schwarzian_identity_error", None, f"failed: {exc}")
        rep.ok = False
    else:
        A2 = 2.0 * np.asarray(bundle.A(pts))
        rel = float(np.max(np.abs(S - A2) / np.maximum(np.abs(A2), 1.0)))
        rep.add("schwarzian_identity_error", rel, "analytic.schwarzian")
        rep.ok = rel <= 1e-6
    try:
        g = ReducedSecondSolution(bundle.f, zeros=zeros)
        f0 = initial_state(bundle.f, g.base)
        g1 = 1.0 / f0.f  # g(base) = 0, so W = f g' there
        grid = make_grid(config.rmax, config.grid_radial, config.grid_angular).union([0j])
        diag = normality_diagnostic(bundle.f, g, grid, zeros, base=(g.base, f0.f, f0.fprime, 0j, g1))
    except PathThroughZeroError as exc:
        rep.add("sup_sampled", None, f"failed: {exc}")
        rep.ok = False
        return rep
    rep.add("base_point", g.base, "oscillation.ReducedSecondSolution")
    rep.add("sup_sampled", diag.sup_sampled, "oscillation.normality_diagnostic", argmax=diag.argmax)
    return rep


RUNNERS = {"sequence": cmd_sequence, "build": cmd_build, "corollary1": cmd_corollary1, "normal": cmd_normal}


def run(config: RunConfig) -> Report:
    return RUNNERS[config.command](config)
