"""Command-line front end.

Every subcommand prints one JSON report to standard output:
{"command", "version", "inputs", "results"} in that key order, plus
"timing_s" when --timing is given (off by default so seeded reports are
byte-identical across runs).  Errors print {"error": {"type", "message"}}
to standard error.  Exit codes: 0 success, 2 invalid input or unknown
name, 3 resource limit exceeded, 1 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .calibration import kcbs_calibration
from .exceptions import NumericError, ResourceLimitError
from .inequalities import (
    CATALOG_IDS,
    InequalityExpr,
    catalog_get,
    expr_to_json,
    load_expr,
    specialize,
)
from .observables import ObservableSet, build_ks18, build_set
from .parity import ks_colorable, parity_stats
from .quantum import (
    certify_state_independence,
    evaluate_inequality,
    haar_sweep,
    max_quantum_value,
)
from .simulate import report_to_json, run_protocol
from .solver import classical_bound
from .states import NAMED_STATES, load_state, make_state


def _resolve_inequality(ineq: str, n: int | None) -> InequalityExpr:
    if ineq in CATALOG_IDS:
        return catalog_get(ineq, n)
    if os.path.exists(ineq):
        expr = load_expr(ineq)
        if n is not None and n != expr.n:
            raise ValueError(f"--n {n} conflicts with the file's n={expr.n}")
        return expr
    raise ValueError(f"unknown inequality {ineq!r} (not a catalog id or readable file)")


def _resolve_state(state: str, obs: ObservableSet):
    if state in NAMED_STATES:
        return make_state(state, dim=obs.dim)
    if os.path.exists(state):
        return load_state(state, dim=obs.dim)
    raise ValueError(f"unknown state {state!r} (not a named state or readable file)")


def _set_for(expr: InequalityExpr) -> ObservableSet:
    return build_set(expr.set_id, expr.n)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(x) if isinstance(x, float) else str(x) for x in row) + "\n")


def _cmd_bound(args) -> dict:
    expr = _resolve_inequality(args.inequality, args.n)
    result = classical_bound(expr)
    return {
        "classical_bound": result.bound,
        "witness": result.witness,
        "evaluations": result.evaluations,
    }


def _cmd_quantum(args) -> dict:
    expr = _resolve_inequality(args.inequality, args.n)
    obs = _set_for(expr)
    rho = _resolve_state(args.state, obs)
    return {"value": evaluate_inequality(rho, obs, expr)}


def _cmd_certify(args) -> dict:
    expr = _resolve_inequality(args.inequality, args.n)
    obs = _set_for(expr)
    cert = certify_state_independence(obs, expr)
    bound = classical_bound(expr)
    return {
        "classical_bound": bound.bound,
        "quantum_constant": cert.constant,
        "residual": cert.residual,
        "state_independent": cert.is_state_independent,
        "gap": cert.constant - bound.bound,
    }


def _cmd_maxval(args) -> dict:
    expr = _resolve_inequality(args.inequality, args.n)
    obs = _set_for(expr)
    return {"max_quantum_value": max_quantum_value(obs, expr)}


def _cmd_colorability(args) -> dict:
    rayset, obs = build_ks18()
    coloring = ks_colorable(rayset)
    stats = parity_stats(obs)
    return {
        "satisfiable": coloring.satisfiable,
        "witness": coloring.witness,
        "context_count": stats.context_count,
        "occurrences": stats.occurrences,
        "minus_identity_contexts": stats.minus_identity_contexts,
        "parity_contradiction": stats.parity_contradiction,
    }


def _cmd_simulate(args) -> dict:
    expr = _resolve_inequality(args.inequality, args.n)
    obs = _set_for(expr)
    rho = _resolve_state(args.state, obs)
    report = run_protocol(rho, obs, expr, args.shots, args.seed)
    if args.csv:
        _write_csv(
            args.csv,
            ["term_index", "estimate", "stderr", "shots"],
            [
                [i, t.estimate, t.standard_error, t.shots]
                for i, t in enumerate(report.terms)
            ],
        )
    return report_to_json(report, args.state)


def _cmd_sweep(args) -> dict:
    expr = _resolve_inequality(args.inequality, args.n)
    obs = _set_for(expr)
    values = haar_sweep(obs, expr, args.states, args.seed)
    if args.csv:
        _write_csv(
            args.csv,
            ["state_index", "value"],
            [[i, float(v)] for i, v in enumerate(values)],
        )
    return {
        "count": int(values.size),
        "seed": args.seed,
        "min": float(values.min()),
        "max": float(values.max()),
        "mean": float(values.mean()),
    }


def _cmd_specialize(args) -> dict:
    expr = _resolve_inequality(args.inequality, args.n)
    with open(args.subs, encoding="utf-8") as fh:
        raw = json.load(fh)
    subs = {str(k): int(v) for k, v in raw.items()}
    specialized, dropped = specialize(expr, subs)
    bound = classical_bound(specialized)
    return {
        "expression": expr_to_json(specialized),
        "dropped_constant": dropped,
        "classical_bound": bound.bound,
        "witness": bound.witness,
        "evaluations": bound.evaluations,
    }


def _cmd_calibrate(args) -> dict:
    report = kcbs_calibration(seed=args.seed)
    return {
        "automorphism_count": report.automorphism_count,
        "pentagon_count": report.pentagon_count,
        "best_paper_value": report.best_paper_value,
        "target": report.target,
        "slack": report.slack,
        "target_matched": report.target_matched,
        "best_product_value": report.best_product_value,
        "best_pentagon": [list(t) for t in report.best_pentagon],
        "qualitative_violation": report.qualitative_violation,
    }


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctxkit",
        description="Noncontextuality inequalities: bounds, certificates, simulation.",
    )
    parser.add_argument("--version", action="version", version=f"ctxkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.set_defaults(handler=handler)
        p.add_argument("--timing", action="store_true", help="include wall time in the report")
        return p

    def add_ineq(p: argparse.ArgumentParser) -> None:
        p.add_argument("--inequality", required=True, help="catalog id or JSON file path")
        p.add_argument("--n", type=int, default=None, help="qubit count for the star family")

    p = add("bound", _cmd_bound, "exact noncontextual bound by exhaustive search")
    add_ineq(p)

    p = add("quantum", _cmd_quantum, "evaluate the inequality in a state")
    add_ineq(p)
    p.add_argument("--state", required=True, help="named state or JSON file path")

    p = add("certify", _cmd_certify, "state-independence certificate plus classical bound")
    add_ineq(p)

    p = add("maxval", _cmd_maxval, "largest eigenvalue of the Bell operator")
    add_ineq(p)

    add("colorability", _cmd_colorability, "coloring search and parity stats for the 18-ray set")

    p = add("simulate", _cmd_simulate, "sequential-measurement protocol estimate")
    add_ineq(p)
    p.add_argument("--state", required=True, help="named state or JSON file path")
    p.add_argument("--shots", type=int, required=True, help="shots per term")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--csv", default=None, help="also write a per-term CSV table")

    p = add("sweep", _cmd_sweep, "evaluate over seeded Haar-random states")
    add_ineq(p)
    p.add_argument("--states", type=int, required=True, help="number of Haar states")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--csv", default=None, help="also write a per-state CSV table")

    p = add("specialize", _cmd_specialize, "substitute +-1 values and recompute the bound")
    add_ineq(p)
    p.add_argument("--subs", required=True, help="JSON file mapping labels to +1/-1")

    p = add("calibrate", _cmd_calibrate, "pentagon relabeling sweep and product-state search")
    p.add_argument("--seed", type=int, default=0)

    return parser


def _inputs_echo(args) -> dict:
    skip = {"command", "handler", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        results = args.handler(args)
    except ResourceLimitError as exc:
        _print_error(exc)
        return 3
    except NumericError as exc:
        _print_error(exc)
        return 1
    except (ValueError, KeyError, OSError) as exc:
        _print_error(exc)
        return 2
    report = {
        "command": args.command,
        "version": __version__,
        "inputs": _inputs_echo(args),
        "results": results,
    }
    if args.timing:
        report["timing_s"] = time.perf_counter() - started
    print(json.dumps(report, indent=2))
    return 0


def _print_error(exc: Exception) -> None:
    message = str(exc.args[0]) if exc.args else str(exc)
    payload = {"error": {"type": type(exc).__name__, "message": message}}
    print(json.dumps(payload), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
