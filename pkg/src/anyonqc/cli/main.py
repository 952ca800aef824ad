"""anyonqc command line: classify, decompose, fusion-table, simulate, verify.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import platform
import re
import sys
import time

import numpy as np

from .. import __version__
from ..group_core import DecompositionError, GroupError, classify, decompose
from ..protocols import AnyonComputer, ControllerConfig, ProtocolError
from ..rep_theory import (RepError, find_irrep, find_one_dim, fusion_F_semidirect, fusion_table_general,
                          gamma_multiplicity, irreps, one_dim_reps)
from .parser import SemidirectPQ, SpecSyntaxError, build_group, parse_group_spec, print_group_spec
from .simulate import PROTOCOLS, UsageError, simulate
from .verify import CRITERIA, SUITES, run_criteria

SCHEMA = "anyonqc.report/1"
DEFAULTS = {"seed": 0, "mode": "enumerate", "tolerance": 1e-9, "json": None, "max_rounds": None}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand without clobbering
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (default 0)")
    p.add_argument("--mode", choices=("sample", "enumerate"), default=argparse.SUPPRESS,
                   help="branch handling (default enumerate)")
    p.add_argument("--tolerance", type=float, default=argparse.SUPPRESS,
                   help="deficit tolerance for pass/fail (default 1e-9)")
    p.add_argument("--json", metavar="PATH", default=argparse.SUPPRESS,
                   help="write the JSON report to PATH ('-' for stdout)")
    p.add_argument("--max-rounds", type=int, default=argparse.SUPPRESS,
                   help="controller round limit for charge projections")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = _Parser(prog="anyonqc", parents=[common],
                 description="Quantum computation with anyons of finite solvable non-nilpotent groups.")
    ap.add_argument("--version", action="version", version=f"anyonqc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="abelian/nilpotent/solvable and power")
    p.add_argument("group")
    p = sub.add_parser("decompose", parents=[common], help="decomposition tower summary")
    p.add_argument("group")
    p = sub.add_parser("fusion-table", parents=[common], help="fusion amplitudes F_{h→γ}")
    p.add_argument("group")
    p.add_argument("--rep", help="irrep: '2d', label, '#k', or 'ind<k>' for ℤp⋊ℤq")
    p.add_argument("--gamma", help="one-dim charge: 'trivial', 'sign', or label")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p = sub.add_parser("simulate", parents=[common], help="run a protocol")
    p.add_argument("protocol", choices=PROTOCOLS)
    p.add_argument("--group", default="Z3⋊(t=2)Z2")
    p.add_argument("--input", help="'0,1,2' basis digits, 'uniform' or 'random' (seeded)")
    p = sub.add_parser("verify", parents=[common], help="acceptance criteria")
    p.add_argument("suite", nargs="?", default="acceptance",
                   help=f"{', '.join(SUITES)} or comma-separated criterion numbers")
    return ap


def _group(text: str):
    node = parse_group_spec(text)
    return node, build_group(node)


# ------------------------------------------------------------------ commands

def cmd_classify(args) -> tuple[dict, int, str]:
    node, G = _group(args.group)
    c = classify(G)
    res = {"group": print_group_spec(node), "order": G.order, **c.as_dict()}
    return res, 0, " ".join(f"{k}={v}" for k, v in res.items())


def cmd_decompose(args):
    node, G = _group(args.group)
    s = decompose(G).summary()
    s["group"] = print_group_spec(node)
    return s, 0, "\n".join(f"{k}: {v}" for k, v in s.items())


def _semidirect_table(node: SemidirectPQ, rep: str | None, gamma: str | None):
    idx = 1
    if rep is not None:
        m = re.fullmatch(r"ind(\d+)", rep)
        if m:
            idx = int(m.group(1))
        elif rep != f"{node.q}d":
            return None
    j = None
    if gamma is not None:
        m = re.fullmatch(r"gamma(\d+)", gamma)
        if gamma == "trivial":
            j = 0
        elif gamma == "sign" and node.q == 2:
            j = 1
        elif m:
            j = int(m.group(1)) % node.q
        else:
            return None
    table = fusion_F_semidirect((node.p, node.q, node.t), idx)
    rows = [r for r in table.to_rows() if j is None or r["j"] == j]
    return table, rows


def cmd_fusion_table(args):
    node, G = _group(args.group)
    got = _semidirect_table(node, args.rep, args.gamma) if isinstance(node, SemidirectPQ) else None
    if got is not None:
        table, rows = got
        route = "closed-form"
    else:
        R = find_irrep(G, args.rep) if args.rep else next(r for r in irreps(G) if r.dim > 1)
        if args.gamma:
            gamma = (next(g for g in one_dim_reps(G) if g.trivial) if args.gamma == "trivial"
                     else find_one_dim(G, args.gamma))
        else:
            gamma = next(g for g in one_dim_reps(G) if gamma_multiplicity(G, R, g) == 1)
        table = fusion_table_general(G, R, gamma, G.elements())
        rows = table.to_rows()
        for r in rows:
            r["element"] = G.name(r["i"])
        route = "invariant-vector"
    res = {"group": print_group_spec(node), "route": route, "rep": table.rep, "gamma": table.gamma,
           "phase_convention": table.phase_convention, "rows": rows}
    if args.format == "json":
        text = json.dumps(res, indent=1)
    else:
        keys = [k for k in ("i", "element", "j", "re", "im", "magnitude2") if k in rows[0]]
        text = "\n".join([",".join(keys)] + [",".join(str(r[k]) for k in keys) for r in rows])
    return res, 0, text


def cmd_simulate(args):
    node, G = _group(args.group)
    cfg = ControllerConfig(max_rounds=args.max_rounds)
    comp = AnyonComputer(G, cfg)
    res = simulate(comp, args.protocol, args.mode, args.seed, args.input, args.tolerance)
    res["group"] = print_group_spec(node)
    code = 0 if res["ok"] else 1
    lines = [f"{args.protocol} on {res['group']} ({args.mode}): success probability "
             f"{res['success_probability']:.6g}, max deficit {res['max_deficit']}"]
    for b in res["branches"][:20]:
        lines.append(f"  p={b['probability']:.6g} {'ok ' if b['success'] else 'fail'} {b['label']}"
                     + (f" deficit={b['deficit']:.3g}" if b["deficit"] is not None else ""))
    if len(res["branches"]) > 20:
        lines.append(f"  ... {len(res['branches']) - 20} more branches")
    return res, code, "\n".join(lines)


def cmd_verify(args):
    if args.suite in SUITES:
        numbers = SUITES[args.suite]
    else:
        try:
            numbers = tuple(int(x) for x in args.suite.split(","))
        except ValueError:
            raise UsageError(f"unknown suite {args.suite!r}") from None
        if any(n not in CRITERIA for n in numbers):
            raise UsageError("criterion numbers run from 1 to 12")
    results = run_criteria(numbers)
    res = {"suite": args.suite, "criteria": [r.to_json() for r in results],
           "passed": sum(r.passed for r in results), "failed": sum(not r.passed for r in results)}
    code = 0 if all(r.passed for r in results) else 1
    return res, code, "\n".join(r.line() for r in results)


COMMANDS = {"classify": cmd_classify, "decompose": cmd_decompose, "fusion-table": cmd_fusion_table,
            "simulate": cmd_simulate, "verify": cmd_verify}

USAGE_ERRORS = (UsageError, SpecSyntaxError, GroupError, DecompositionError, RepError, ProtocolError,
                KeyError, StopIteration)


def _inputs(args) -> dict:
    skip = {"json"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run_command(argv=None, out=None) -> tuple[int, dict]:
    """Parse and run; returns (exit code, report)."""
    out = out or sys.stdout
    t0 = time.perf_counter()
    args = None
    try:
        args = build_parser().parse_args(argv)
        for k, v in DEFAULTS.items():
            if not hasattr(args, k):
                setattr(args, k, v)
        results, code, text = COMMANDS[args.command](args)
        report = {"results": results}
    except USAGE_ERRORS as e:
        code, text = 2, f"error: {e}"
        report = {"error": {"type": type(e).__name__, "message": str(e).strip("'\""),
                            "position": getattr(e, "pos", None)}}
    report = {"schema": SCHEMA,
              "command": getattr(args, "command", None),
              "inputs": _inputs(args) if args is not None else {"argv": list(argv or [])},
              "seed": getattr(args, "seed", DEFAULTS["seed"]),
              "tolerance": getattr(args, "tolerance", DEFAULTS["tolerance"]),
              "exit_code": code,
              **report,
              "versions": {"anyonqc": __version__, "numpy": np.__version__,
                           "python": platform.python_version()},
              "timing": {"wall_time_s": round(time.perf_counter() - t0, 3)}}
    dest = getattr(args, "json", None) if args is not None else _json_flag(argv)
    if dest == "-":
        print(json.dumps(report, indent=1, sort_keys=True, default=_default), file=out)
    else:
        print(text, file=out if code != 2 else sys.stderr)
        if dest:
            with open(dest, "w", encoding="utf-8") as fh:
                json.dump(report, fh, indent=1, sort_keys=True, default=_default)
    return code, report


def _json_flag(argv):
    argv = list(argv or [])
    if "--json" in argv and argv.index("--json") + 1 < len(argv):
        return argv[argv.index("--json") + 1]
    return None


def _default(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def main(argv=None) -> int:
    code, _ = run_command(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
