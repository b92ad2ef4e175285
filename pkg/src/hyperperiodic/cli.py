"""Command line entry point: ``hyperperiodic --problem doc.json --out results/``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .document import ProblemDocument
from .errors import ProblemParseError
from .harness import (EXIT_INTERNAL, EXIT_OK, EXIT_PARSE, REPORT_SCHEMA, RunOptions,
                      manufactured_test, run_solve, write_report)

log = logging.getLogger("hyperperiodic")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hyperperiodic",
        description="Time-periodic solutions of 2x2 hyperbolic systems with reflection boundaries.")
    p.add_argument("--problem", required=True, type=Path, help="problem document (JSON)")
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--k-max", type=int, default=None, help="override the Fourier truncation K")
    p.add_argument("--gamma", type=float, default=None, help="override the Sobolev index")
    p.add_argument("--tol", type=float, default=None, help="relative increment tolerance")
    p.add_argument("--max-iter", type=int, default=None, help="iteration cap")
    p.add_argument("--tol-res", type=float, default=None, help="mode residual tolerance")
    p.add_argument("--tol-bc", type=float, default=None, help="boundary residual tolerance")
    p.add_argument("--emit-samples", action="store_true", help="also write synth.csv")
    p.add_argument("--check-only", action="store_true", help="only evaluate the conditions")
    p.add_argument("--oracle", action="store_true", help="solve with the shooting oracle")
    p.add_argument("--manufactured", action="store_true",
                   help="replace the forcing by a manufactured solution drawn with --seed")
    p.add_argument("--seed", type=int, default=0, help="seed for --manufactured")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def _parse_failure(out: Path, exc: Exception) -> int:
    out.mkdir(parents=True, exist_ok=True)
    write_report(out, {"schema": REPORT_SCHEMA, "status": "parse-error", "exit_code": EXIT_PARSE,
                       "error": str(exc), "certificate": None, "solve": None})
    print(f"error: {exc}", file=sys.stderr)
    return EXIT_PARSE


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        doc = ProblemDocument.load(args.problem)
        spec = doc.to_spec(args.k_max, args.gamma)
    except ProblemParseError as exc:
        return _parse_failure(args.out, exc)
    except OSError as exc:
        return _parse_failure(args.out, exc)

    tol = doc.tolerances
    options = RunOptions(
        tol=args.tol if args.tol is not None else tol["tol"],
        max_iter=args.max_iter if args.max_iter is not None else tol["max_iter"],
        tol_res=args.tol_res if args.tol_res is not None else tol["tol_res"],
        tol_bc=args.tol_bc if args.tol_bc is not None else tol["tol_bc"],
        emit_samples=args.emit_samples,
        check_only=args.check_only,
        oracle=args.oracle,
    )

    if args.manufactured:
        args.out.mkdir(parents=True, exist_ok=True)
        try:
            res = manufactured_test(spec, args.seed)
        except Exception as exc:  # noqa: BLE001
            log.exception("manufactured run failed")
            write_report(args.out, {"schema": REPORT_SCHEMA, "status": "internal-error",
                                    "exit_code": EXIT_INTERNAL, "error": str(exc)})
            return EXIT_INTERNAL
        status = "manufactured-pass" if res.passed else "manufactured-fail"
        code = EXIT_OK if res.passed else 4
        write_report(args.out, {"schema": REPORT_SCHEMA, "status": status, "exit_code": code,
                                "seed": args.seed, "error": res.message or None,
                                "manufactured": {"passed": res.passed,
                                                 "relative_error": res.relative_error,
                                                 "iterations": res.iterations}})
        print(json.dumps({"status": status, "relative_error": res.relative_error}))
        return code

    art = run_solve(spec, args.out, options)
    summary = {"status": art.status, "exit_code": art.exit_code}
    if art.report.get("solve"):
        summary["final_residual"] = art.report["solve"].get("final_residual")
    print(json.dumps(summary))
    return art.exit_code


if __name__ == "__main__":
    sys.exit(main())
