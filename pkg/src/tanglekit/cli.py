"""Command-line front end.

Exit codes: 0 success, 1 domain error (structured JSON on stderr), 2 usage
error.  Output is JSON when stdout is not a terminal (or with
``--format json``), a small human-readable table otherwise; ``gen`` always
emits the state file format so its output round-trips into every ``--state``
consumer.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .balance import analyze, report_to_json, support_matrices
from .engine import eval_filter, validate_spec
from .errors import TanglekitError
from .filters import builtin, catalog_info, catalog_names, load_filter_file
from .normalform import (
    StochasticityLevel,
    lfo_solution_to_json,
    lfo_to_stochastic,
    stochasticity_check,
)
from .spin import mixed_concurrence
from .states import generate, load_density, load_state, state_to_json

_GEN_KINDS = ("ghz", "w", "x", "chi5", "bell")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tanglekit",
        description="Filter invariants, balance classification, normal forms "
        "and spin-S concurrence for multiqubit states.",
    )
    parser.add_argument(
        "--format",
        choices=("auto", "json", "human"),
        default="auto",
        help="output format (default: json when stdout is not a terminal)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        # accepted after the subcommand too; SUPPRESS keeps the top-level
        # default from being clobbered when the flag is absent
        p.add_argument(
            "--format",
            choices=("auto", "json", "human"),
            default=argparse.SUPPRESS,
            help=argparse.SUPPRESS,
        )
        return p

    p = add_format(sub.add_parser("gen", help="generate a named reference state"))
    p.add_argument("kind", choices=_GEN_KINDS)
    p.add_argument("qubits", type=int)
    p.add_argument("--out", help="write the state file here instead of stdout")
    p.set_defaults(handler=_cmd_gen)

    p = add_format(sub.add_parser("filter", help="evaluate a filter invariant on a state"))
    p.add_argument("filter_ref", metavar="name|file.filter")
    p.add_argument("--state", required=True)
    p.add_argument(
        "--normalize-exponent",
        action="store_true",
        help="also report modulus**(4/degree)",
    )
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(handler=_cmd_filter)

    p = add_format(sub.add_parser("balance", help="classify the balancedness of a state"))
    p.add_argument("--state", required=True)
    p.add_argument("--eps", type=float, default=1e-9, help="relative support threshold")
    p.set_defaults(handler=_cmd_balance)

    p = add_format(sub.add_parser("normalform", help="diagonal filtering to a stochastic state"))
    p.add_argument("--state", required=True)
    p.set_defaults(handler=_cmd_normalform)

    p = add_format(sub.add_parser("stochastic", help="check stochasticity of a state"))
    p.add_argument("--state", required=True)
    p.add_argument("--level", choices=("1", "2", "all"), required=True)
    p.set_defaults(handler=_cmd_stochastic)

    p = add_format(sub.add_parser("spinconc", help="spin-S mixed-state concurrence"))
    p.add_argument("--rho", required=True)
    p.add_argument("--spin-dim", type=int, required=True, help="local dimension 2S+1")
    p.set_defaults(handler=_cmd_spinconc)

    p = add_format(sub.add_parser("list-filters", help="list builtin filters"))
    p.set_defaults(handler=_cmd_list_filters)

    return parser


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("TANGLEKIT_THREADS")
    return max(1, int(env)) if env else 1


def _cmd_gen(args):
    state = generate(args.kind, args.qubits)
    payload = state_to_json(state)
    text = json.dumps(payload, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        return None
    print(text)
    return None


def _cmd_filter(args):
    ref = args.filter_ref
    if ref.endswith(".filter") or os.path.exists(ref):
        spec = load_filter_file(ref)
    else:
        spec = builtin(ref)
    info = validate_spec(spec)
    state = load_state(args.state)
    value = eval_filter(state, spec, threads=_threads(args))
    payload = {
        "filter": spec.name,
        "qubits": info.num_qubits,
        "degree": info.degree,
        "value": [value.real, value.imag],
        "modulus": abs(value),
        # zero reporting at absolute 1e-10 scaled by norm^degree
        "is_zero": abs(value) <= 1e-10 * state.norm() ** info.degree,
    }
    if args.normalize_exponent:
        payload["modulus_normalized"] = abs(value) ** (4.0 / info.degree)
    return payload


def _cmd_balance(args):
    state = load_state(args.state)
    sup = support_matrices(state, eps=args.eps)
    payload = report_to_json(analyze(sup.alternating))
    payload["length"] = sup.binary.length
    return payload


def _cmd_normalform(args):
    state = load_state(args.state)
    return lfo_solution_to_json(lfo_to_stochastic(state))


def _cmd_stochastic(args):
    state = load_state(args.state)
    report = stochasticity_check(state, StochasticityLevel.from_cli(args.level))
    return {
        "level": report.level.value,
        "passed": report.passed,
        "worst_deviation": report.worst_deviation,
        "tolerance": report.tolerance,
    }


def _cmd_spinconc(args):
    rho = load_density(args.rho)
    result = mixed_concurrence(rho, local_dim=args.spin_dim)
    return {
        "spin_dim": args.spin_dim,
        "value": result.value,
        "eigenvalues": list(result.eigenvalues),
    }


def _cmd_list_filters(args):
    return {
        "filters": [catalog_info(name) for name in catalog_names()],
        "aliases": {"F5_0": "F5_12_1"},
        "derived": {"P": "D_1 + D_2 + D_3 + D_4 + D_5"},
    }


def _emit(payload, fmt: str) -> None:
    if fmt == "auto":
        fmt = "human" if sys.stdout.isatty() else "json"
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True))
        return
    for line in _human_lines(payload, indent=0):
        print(line)


def _human_lines(value, indent):
    pad = "  " * indent
    if isinstance(value, dict):
        for key in value:
            inner = value[key]
            if isinstance(inner, (dict, list)):
                yield f"{pad}{key}:"
                yield from _human_lines(inner, indent + 1)
            else:
                yield f"{pad}{key}: {inner}"
    elif isinstance(value, list):
        for inner in value:
            if isinstance(inner, (dict, list)):
                yield from _human_lines(inner, indent)
                yield pad + "-"
            else:
                yield f"{pad}- {inner}"
    else:
        yield f"{pad}{value}"


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    try:
        payload = args.handler(args)
    except TanglekitError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 1
    if payload is not None:
        _emit(payload, args.format)
    return 0


def main() -> None:
    sys.exit(run())
