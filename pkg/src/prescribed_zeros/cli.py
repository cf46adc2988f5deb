"""``pzeros`` command line: sequence statistics, builds, lattice trends, normality."""

from __future__ import annotations

import argparse
import sys

from .errors import (
    AccuracyError,
    ConstructionError,
    ContourError,
    DegenerateInputError,
    DiscDomainError,
    InterpolationError,
    PathThroughZeroError,
    PreconditionError,
    QuadratureError,
    SequenceFormatError,
    StepSizeError,
)
from .report import COMMANDS, RefusalError, RunConfig, run

EXIT_OK, EXIT_COMPUTATION, EXIT_REFUSAL = 0, 1, 2

_REFUSALS = (RefusalError, SequenceFormatError, DiscDomainError, DegenerateInputError, PreconditionError)
_FAILURES = (InterpolationError, ConstructionError, StepSizeError, ContourError, AccuracyError,
             PathThroughZeroError, QuadratureError, ArithmeticError)


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pzeros", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--sequence", metavar="FILE", help='JSON file {"points": [{"re": x, "im": y}, ...]}')
    src.add_argument("--lattice", type=_floats, metavar="a,b[,jmin,jmax,kmin,kmax]",
                     help="lattice a^j (b k + i); with only a,b it is truncated at |z| < rmax")
    src.add_argument("--manifest", metavar="FILE", help="bundle manifest written by build (normal only)")
    p.add_argument("--p", type=float, action="append", help="Carleson exponent, repeatable (default 1)")
    p.add_argument("--rmax", type=float, default=0.999, help="outer radius of grids and truncations")
    p.add_argument("--grid-radial", type=int, default=12)
    p.add_argument("--grid-angular", type=int, default=128)
    p.add_argument("--tol", type=float, default=1e-10, help="ODE local error tolerance")
    p.add_argument("--verify-radius", type=float, default=0.995, help="contour radius for zero counting")
    p.add_argument("--out", metavar="DIR", help="write the report (and manifest) here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force", action="store_true", help="proceed despite a failed hypothesis guard")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        sequence_file=ns.sequence,
        lattice=ns.lattice,
        manifest=ns.manifest,
        p=tuple(ns.p) if ns.p else (1.0,),
        rmax=ns.rmax,
        grid_radial=ns.grid_radial,
        grid_angular=ns.grid_angular,
        tol=ns.tol,
        verify_radius=ns.verify_radius,
        out=ns.out,
        format=ns.format,
        seed=ns.seed,
        force=ns.force,
    )


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = config_from_args(ns)
        report = run(config)
    except _REFUSALS as exc:
        loc = getattr(exc, "location", None)
        print(f"refused: {exc}" + (f" (at {loc})" if loc and loc not in str(exc) else ""), file=sys.stderr)
        return EXIT_REFUSAL
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_REFUSAL
    except _FAILURES as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        diag = getattr(exc, "diagnostics", None)
        if diag:
            print(f"diagnostics: {diag}", file=sys.stderr)
        return EXIT_COMPUTATION
    if config.out is None:
        sys.stdout.write(report.to_json() if config.format == "json" else report.to_csv())
    else:
        path = report.write(config.out, config.format)
        print(path, file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
