"""Command line entry point: ``stgalerkin {solve,study,list-solutions,verify}``.

Exit codes: 0 success, 1 a verify check failed, 2 configuration error,
3 CFL violation, 4 solver failure.
"""
from __future__ import annotations

import argparse
import sys

from ..errors import CflViolation, ConfigInvalid, StGalerkinError
from .config import canonical_scheme, parse_norms, read_config
from .report import emit_report
from .solutions import list_solutions
from .study import StudyConfig, run_study

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_CFL, EXIT_SOLVER = 0, 1, 2, 3, 4

# CLI flag -> StudyConfig field
_FLAG_FIELDS = {
    "method": "scheme", "q": "q", "p": "p", "elements": "M", "slabs": "N", "T": "T",
    "nu": "nu", "c": "c", "delta": "delta", "solution": "solution", "refine": "refine",
    "levels": "levels", "norms": "norms", "cfl_override": "cfl_override", "out": "out",
    "format": "format", "c_cfl": "c_cfl", "tau_h_ratio": "tau_h_ratio", "preflight": "preflight",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_run_flags(p: argparse.ArgumentParser, study: bool) -> None:
    p.add_argument("--config", help="INI config file; flags override its values")
    p.add_argument("--method", help="scheme, e.g. heat-jamet or WaveWalkington")
    p.add_argument("--q", type=int, help="polynomial degree in time")
    p.add_argument("--p", type=int, help="polynomial degree in space")
    p.add_argument("--elements", type=int, help="number of spatial elements M")
    p.add_argument("--slabs", type=int, help="number of time slabs N")
    p.add_argument("--T", type=float, help="final time")
    p.add_argument("--nu", type=float, help="diffusivity (heat)")
    p.add_argument("--c", type=float, help="wave speed (wave)")
    p.add_argument("--delta", type=float, help="damping (WaveVanilla)")
    p.add_argument("--solution", help="manufactured solution id (see list-solutions)")
    p.add_argument("--norms", type=parse_norms,
                   help="comma list, e.g. LinfL2,LinfH1semi,LinfL2@dt,LinfL2@v")
    p.add_argument("--cfl-override", dest="cfl_override", action="store_true", default=None,
                   help="solve even if the step-size restriction is violated")
    p.add_argument("--c-cfl", dest="c_cfl", type=float, help="override the CFL constant")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"))
    if study:
        p.add_argument("--refine", choices=("tau", "h"))
        p.add_argument("--levels", type=int)
        p.add_argument("--tau-h-ratio", dest="tau_h_ratio", type=float,
                       help="keep tau = ratio * h while refining tau")
        p.add_argument("--no-preflight", dest="preflight", action="store_false", default=None,
                       help="skip the fixed-axis contamination check")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stgalerkin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_run_flags(sub.add_parser("solve", help="single solve, errors in the requested norms"), False)
    _add_run_flags(sub.add_parser("study", help="tau- or h-refinement study with orders"), True)
    sub.add_parser("list-solutions", help="list manufactured solutions")
    sub.add_parser("verify", help="run the algebraic identity suite")
    return parser


def config_from_args(args: argparse.Namespace, study: bool) -> StudyConfig:
    values = read_config(args.config) if args.config else {}
    for flag, name in _FLAG_FIELDS.items():
        val = getattr(args, flag, None)
        if val is not None:
            values[name] = val
    if "scheme" in values:
        values["scheme"] = canonical_scheme(values["scheme"])
    if not study:
        values.update(refine="none", levels=1)
    elif values.get("refine", "none") == "none":
        raise ConfigInvalid("study needs --refine tau or --refine h")
    return StudyConfig.from_dict(values)


def _run(args, study: bool) -> int:
    cfg = config_from_args(args, study)
    report = run_study(cfg)
    data = emit_report(report, cfg.format, cfg.out)
    if cfg.out is None:
        sys.stdout.write(data.decode())
    else:
        print(f"wrote {cfg.out}")
    return EXIT_OK


def _verify() -> int:
    from ..identities import CHECKS
    ok = True
    for check in CHECKS:
        res = check()
        ok &= res.passed
        print(f"{'PASS' if res.passed else 'FAIL'}  {res.name}: {res.detail}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-solutions":
            for sid, desc in list_solutions():
                print(f"{sid:22s} {desc}")
            return EXIT_OK
        if args.command == "verify":
            return _verify()
        return _run(args, args.command == "study")
    except CflViolation as exc:
        print(f"CFL violation: {exc}", file=sys.stderr)
        return EXIT_CFL
    except ConfigInvalid as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StGalerkinError as exc:
        print(f"solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (TypeError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
