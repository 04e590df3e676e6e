"""Command-line front end.

Every subcommand assembles a plain dict (plus optional row data) and
hands it to one emitter, so a given invocation is byte-for-byte
reproducible: floats are rounded to 15 significant digits before
serialization, JSON keys keep insertion order, and CSV/table renderers
share the same scalar formatting.

Exit codes: 0 success, 2 usage, 3 domain error, 4 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import __version__
from .applications import (
    almost_prime_report,
    goldbach_bound_report,
    goldbach_count,
    twin_bound_report,
    twin_count,
)
from .arith import twin_prime_constant
from .errors import DomainError, ResourceLimitError
from .primes import cached_primes_array, count_checkpoints, primes_array
from .progressions import brun_titchmarsh_check, bv_parameters, bv_sum, pi1_comparison
from .sieve_functions import build_function_table, write_table_csv
from .sifting import (
    build_exclusion_chain,
    build_problem,
    problem_json,
    random_instances,
    sift_count,
    verify_V_identity,
    verify_inclusion_exclusion,
    v1_bound_check,
)


class _UsageError(Exception):
    """Bad argument combination that argparse alone cannot express."""


def _round_floats(value):
    # bool first: it is an int subclass and must pass through untouched
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return float(f"{value:.15g}")
    if isinstance(value, (list, tuple)):
        return [_round_floats(v) for v in value]
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    return value


def _cell(value):
    """One CSV/table cell; nested data collapses to compact JSON."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.15g" % value
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(_round_floats(value), separators=(",", ":"))
    if value is None:
        return ""
    return str(value)


def _emit(payload, rows, fmt, stream):
    if fmt == "json":
        json.dump(_round_floats(payload), stream, separators=(",", ":"))
        stream.write("\n")
        return
    if rows is not None:
        columns, data = rows
    else:
        columns, data = ("field", "value"), [(k, v) for k, v in payload.items()]
    if fmt == "csv":
        w = csv.writer(stream)
        w.writerow(columns)
        for row in data:
            w.writerow([_cell(v) for v in row])
        return
    cells = [[str(c) for c in columns]] + [[_cell(v) for v in row] for row in data]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    for r in cells:
        stream.write("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        stream.write("\n")


class _RawText:
    """Pre-rendered output that bypasses the format switch."""

    def __init__(self, text):
        self.text = text


def _problem_from_args(args):
    if args.kind == "twin":
        if args.x is None:
            raise _UsageError("kind twin requires --x")
        return build_problem("twin", args.x)
    if args.n is None:
        raise _UsageError(f"kind {args.kind} requires --n")
    return build_problem(args.kind, args.n)


def _cmd_primes(args):
    if args.cache:
        pr = cached_primes_array(args.limit, args.cache)
    else:
        pr = primes_array(args.limit)
    payload = {
        "limit": args.limit,
        "count": int(pr.size),
        "largest": int(pr[-1]) if pr.size else None,
    }
    rows = None
    if args.checkpoints:
        ys = [int(part) for part in args.checkpoints.split(",") if part.strip()]
        report = count_checkpoints(args.limit, ys)
        recs = [
            {"y": r.y, "pi": r.pi, "psi": float(r.psi), "theta": float(r.theta)}
            for r in report.rows
        ]
        payload["checkpoints"] = recs
        rows = (("y", "pi", "psi", "theta"), [(r["y"], r["pi"], r["psi"], r["theta"]) for r in recs])
    return payload, rows


def _cmd_bv(args):
    params = bv_parameters(args.x_cal, args.B, args.gamma, args.D)
    agg = bv_sum(
        params,
        kind=args.kind,
        excluded_divisor_k=args.exclude_k,
        with_breakdown=args.breakdown,
        threads=args.threads,
    )
    payload = {
        "x_cal": params.x_cal,
        "B": float(params.B),
        "gamma": float(params.gamma),
        "D": params.D,
        "y0": params.y0,
        "Q1": float(params.Q1),
        "b_gamma": float(params.b_gamma),
        "kind": agg.kind,
        "excluded_divisor_k": agg.excluded_divisor_k,
        "total": float(agg.total),
        "envelope": float(agg.envelope),
        "normalized": float(agg.normalized),
    }
    rows = None
    if args.breakdown:
        g = agg.weight_gamma
        recs = []
        for rec in agg.breakdown:
            err = rec.e_pi if agg.kind == "pi" else rec.e_psi
            recs.append(
                {
                    "d": rec.d,
                    "omega": rec.omega_d,
                    "phi": rec.phi_d,
                    "e_pi": float(rec.e_pi),
                    "argmax_y": rec.argmax_y_pi,
                    "argmax_a": rec.argmax_a_pi,
                    "weighted_term": float(g**rec.omega_d * err),
                }
            )
        payload["breakdown"] = recs
        columns = ("d", "omega", "phi", "e_pi", "argmax_y", "argmax_a", "weighted_term")
        rows = (columns, [tuple(r[c] for c in columns) for r in recs])
    return payload, rows


def _cmd_sievefn(args):
    table = build_function_table(args.s_max, args.step)
    if args.emit == "csv":
        import io

        buf = io.StringIO()
        write_table_csv(table, buf)
        return _RawText(buf.getvalue()), None
    payload = {
        "s_max": float(table.s_max),
        "step": float(table.step),
        "rows": len(table.s_values),
        "F_end": float(table.F_values[-1]),
        "f_end": float(table.f_values[-1]),
    }
    if args.emit == "json":
        payload["table"] = {
            "s": [float(v) for v in table.s_values],
            "F": [float(v) for v in table.F_values],
            "f": [float(v) for v in table.f_values],
            "method": list(table.method_tags),
        }
    return payload, None


def _cmd_sift(args):
    problem = _problem_from_args(args)
    payload = problem_json(problem)
    payload["z"] = args.z
    payload["count"] = sift_count(problem, args.z)
    return payload, None


def _identity_instance(problem, k, z, a_const):
    lhs, rhs, equal = verify_inclusion_exclusion(problem, k, z)
    v_lhs, v_rhs, gap = verify_V_identity(problem, k, z)
    record = {
        "k": k,
        "z": z,
        "inclusion_exclusion": {"lhs": lhs, "rhs": rhs, "equal": equal},
        "v_identity": {"lhs": float(v_lhs), "rhs": float(v_rhs), "abs_gap": float(gap)},
    }
    if a_const is not None:
        b_lhs, b_rhs, holds = v1_bound_check(problem, k, z, a_const)
        record["v1_bound"] = {
            "A": float(a_const),
            "lhs": float(b_lhs),
            "rhs": float(b_rhs),
            "holds": holds,
        }
    return record


def _cmd_identity(args):
    if args.random is not None:
        if args.kind is not None or args.k is not None or args.z is not None:
            raise _UsageError("--random replaces --kind/--k/--z")
        instances = random_instances(args.seed, args.random)
        all_equal = True
        max_gap = 0.0
        v1_all_hold = True
        for problem, k, z in instances:
            _, _, equal = verify_inclusion_exclusion(problem, k, z)
            all_equal = all_equal and equal
            v_lhs, _, gap = verify_V_identity(problem, k, z)
            rel = gap / abs(v_lhs) if v_lhs else gap
            max_gap = max(max_gap, rel)
            a_const = 2.0 if problem.kind == "square_shift" else 1.0
            _, _, holds = v1_bound_check(problem, k, z, a_const)
            v1_all_hold = v1_all_hold and holds
        payload = {
            "seed": args.seed,
            "instances": len(instances),
            "all_equal": all_equal,
            "max_relative_v_gap": float(max_gap),
            "v1_all_hold": v1_all_hold,
        }
        return payload, None
    if args.kind is None or args.k is None or args.z is None:
        raise _UsageError("identity needs --kind, --k and --z (or --random N)")
    problem = _problem_from_args(args)
    payload = problem_json(problem)
    # touch the chain up front so a bad k fails before any verification
    build_exclusion_chain(problem, args.k, args.z)
    payload.update(_identity_instance(problem, args.k, args.z, args.a_const))
    return payload, None


def _cmd_constants(args):
    return twin_prime_constant(args.truncation).to_json_dict(), None


def _cmd_twin(args):
    if args.report:
        rep = twin_bound_report(args.x, eps=args.eps)
        payload = {
            "x": rep.parameter,
            "count": rep.exact_count,
            "constant": float(rep.constant),
            "convention": rep.convention,
            "main_scale": float(rep.main_scale),
            "ratio": float(rep.ratio),
            "theorem_constant": float(rep.theorem_constant),
            "within_theorem": rep.within_theorem,
        }
    else:
        payload = {"x": args.x, "count": twin_count(args.x)}
    return payload, None


def _cmd_goldbach(args):
    if args.report:
        rep = goldbach_bound_report(args.n, eps=args.eps)
        payload = {
            "n": rep.parameter,
            "count": rep.exact_count,
            "constant": float(rep.constant),
            "convention": rep.convention,
            "main_scale": float(rep.main_scale),
            "ratio": float(rep.ratio),
            "theorem_constant": float(rep.theorem_constant),
            "within_theorem": rep.within_theorem,
        }
    else:
        payload = {"n": args.n, "count": goldbach_count(args.n)}
    return payload, None


def _cmd_almostprime(args):
    rep = almost_prime_report(args.n, args.z_exp)
    payload = {
        "n": rep.n,
        "z": rep.z,
        "rough_count": rep.rough_count,
        "max_omega": rep.max_omega,
        "witnesses": [
            [q, v, [[p, e] for p, e in fac]] for q, v, fac in rep.witnesses
        ],
    }
    return payload, None


def _cmd_bt_check(args):
    rep = brun_titchmarsh_check(args.x, args.d_max)
    payload = {
        "x": rep.x,
        "d_max": rep.d_max,
        "max_ratio": float(rep.max_ratio),
        "witness_d": rep.witness_d,
        "witness_a": rep.witness_a,
        "witness_y": rep.witness_y,
    }
    return payload, None


def _cmd_pi1(args):
    rep = pi1_comparison(args.x)
    payload = {
        "x": rep.x,
        "pi1": float(rep.pi1),
        "pi": rep.pi,
        "gap": float(rep.gap),
        "gap_over_sqrt": float(rep.gap_over_sqrt),
    }
    return payload, None


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("json", "csv", "table"),
        default="json",
        help="output encoding (default json)",
    )
    common.add_argument("--threads", type=int, default=1, help="worker threads")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized scans")
    common.add_argument("--cache", default=None, help="advisory prime cache path")

    parser = argparse.ArgumentParser(prog="sievekit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"sievekit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("primes", parents=[common], help="enumerate primes up to a limit")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--checkpoints", default=None, help="comma list of y values")
    p.set_defaults(handler=_cmd_primes)

    p = sub.add_parser("bv", parents=[common], help="averaged progression error sum")
    p.add_argument("--x-cal", dest="x_cal", type=int, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--D", type=int, default=None, help="override the modulus ceiling")
    p.add_argument("--exclude-k", dest="exclude_k", type=int, default=0)
    p.add_argument("--kind", choices=("pi", "psi"), default="pi")
    p.add_argument("--breakdown", action="store_true", help="per-modulus rows")
    p.set_defaults(handler=_cmd_bv)

    p = sub.add_parser("sievefn", parents=[common], help="tabulate the F/f pair")
    p.add_argument("--s-max", dest="s_max", type=float, default=12.0)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--emit", choices=("csv", "json"), default=None, help="full table dump")
    p.set_defaults(handler=_cmd_sievefn)

    kinds = ("twin", "goldbach", "square_shift")

    p = sub.add_parser("sift", parents=[common], help="count unsifted elements")
    p.add_argument("--kind", choices=kinds, required=True)
    p.add_argument("--x", type=int, default=None, help="twin parameter")
    p.add_argument("--n", type=int, default=None, help="goldbach/square_shift parameter")
    p.add_argument("--z", type=int, required=True)
    p.set_defaults(handler=_cmd_sift)

    p = sub.add_parser("identity", parents=[common], help="verify exclusion identities")
    p.add_argument("--kind", choices=kinds, default=None)
    p.add_argument("--x", type=int, default=None, help="twin parameter")
    p.add_argument("--n", type=int, default=None, help="goldbach/square_shift parameter")
    p.add_argument("--k", type=int, default=None, help="squarefree chain modulus")
    p.add_argument("--z", type=int, default=None)
    p.add_argument("--a-const", dest="a_const", type=float, default=None)
    p.add_argument("--random", type=int, default=None, help="check N seeded instances")
    p.set_defaults(handler=_cmd_identity)

    p = sub.add_parser("constants", parents=[common], help="twin constant report")
    p.add_argument("--truncation", type=int, default=10**6)
    p.set_defaults(handler=_cmd_constants)

    p = sub.add_parser("twin", parents=[common], help="twin pair count up to x")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--report", action="store_true", help="full bound comparison")
    p.set_defaults(handler=_cmd_twin)

    p = sub.add_parser("goldbach", parents=[common], help="prime decompositions of n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--report", action="store_true", help="full bound comparison")
    p.set_defaults(handler=_cmd_goldbach)

    p = sub.add_parser("almostprime", parents=[common], help="rough values of n - q**2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z-exp", dest="z_exp", type=float, required=True)
    p.set_defaults(handler=_cmd_almostprime)

    p = sub.add_parser("bt-check", parents=[common], help="progression count ratio scan")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--d-max", dest="d_max", type=int, required=True)
    p.set_defaults(handler=_cmd_bt_check)

    p = sub.add_parser("pi1", parents=[common], help="prime power count against pi")
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_cmd_pi1)

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        payload, rows = args.handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 4
    if isinstance(payload, _RawText):
        sys.stdout.write(payload.text)
    else:
        _emit(payload, rows, args.format, sys.stdout)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
