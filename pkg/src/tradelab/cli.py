"""Command line interface: ``python -m tradelab <command>``.

Exit codes: 0 success, 1 negative result, 2 usage or I/O error,
3 inconclusive (node budget exhausted).
"""
from __future__ import annotations

import argparse
import os
import sys

from . import algebra, core, search
from .ttf import FormatError, load_ttf, save_ttf

OK, NEGATIVE, USAGE, INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _err(msg):
    print(f"tradelab: {msg}", file=sys.stderr)


def _bool(x):
    return "true" if x else "false"


def _load(path, t):
    try:
        pair = load_ttf(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except (FormatError, core.ParameterError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    if pair.t != t:
        raise UsageError(f"{path} declares t={pair.t} but --t {t} was given")
    return pair


def _save(tr, path):
    try:
        save_ttf(tr, path)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def cmd_verify(args):
    pair = _load(args.path, args.t)
    try:
        tr = core.validate(pair)
    except core.ValidationError as exc:
        if exc.subset is not None:
            a, b = exc.counts
            print(f"invalid subset={' '.join(map(str, exc.subset))} counts={a},{b}")
        else:
            print(f"invalid {exc}")
        return NEGATIVE
    print(f"valid volume={tr.volume} foundation={len(tr.foundation)} "
          f"steiner={_bool(core.is_steiner(tr))} simple={_bool(core.is_simple(tr))}")
    return OK


def cmd_minimal(args):
    try:
        tr = algebra.minimal_trade(args.t, args.k)
    except core.ParameterError as exc:
        raise UsageError(str(exc)) from None
    _save(tr, args.out)
    print(f"wrote {args.out} volume={tr.volume} foundation={len(tr.foundation)}")
    return OK


def cmd_derive(args):
    pair = _load(args.path, args.t)
    try:
        tr = core.validate(pair)
    except core.ValidationError as exc:
        print(f"invalid {exc}")
        return NEGATIVE
    try:
        derived = algebra.derived_trade(tr, args.x)
    except core.ParameterError as exc:
        raise UsageError(str(exc)) from None
    _save(derived, args.out)
    print(f"wrote {args.out} t={derived.t} k={derived.k} volume={derived.volume}")
    return OK


def _spec(args, s, k):
    try:
        return search.SearchSpec(args.t, k, s, args.mode, max_foundation=args.max_foundation,
                                 node_budget=args.node_budget, worker_count=args.workers)
    except core.ParameterError as exc:
        raise UsageError(str(exc)) from None


def _ledger_path(args):
    return args.ledger or os.environ.get("TRADE_LEDGER")


def _record(outcome, args):
    files = []
    if outcome.witnesses and args.witness_dir:
        try:
            files = search.write_witnesses(outcome, args.witness_dir)
        except OSError as exc:
            raise UsageError(f"cannot write witnesses: {exc}") from None
    ledger = _ledger_path(args)
    line = search.ledger_line(outcome, files)
    if ledger:
        try:
            search.append_ledger(ledger, outcome, files)
        except OSError as exc:
            raise UsageError(f"cannot append to ledger {ledger}: {exc.strerror}") from None
    return line


_STATUS_EXIT = {search.FOUND: OK, search.EXHAUSTED: NEGATIVE, search.BUDGET: INCONCLUSIVE}


def cmd_search(args):
    outcome = search.enumerate_trades(_spec(args, args.s, args.k))
    print(_record(outcome, args))
    return _STATUS_EXIT[outcome.status]


def cmd_spectrum(args):
    if args.t < 2:
        raise UsageError("spectrum needs t >= 2")
    k = args.t + 1
    outcomes = {}
    for s in search.forbidden_volumes(args.t):
        outcomes[s] = search.enumerate_trades(_spec(args, s, k))
        _record(outcomes[s], args)
    report = search.GapReport(args.t, args.mode, outcomes)
    if args.machine:
        for s, out in outcomes.items():
            print(f"{args.t} {k} {s} {args.mode} {out.status} {out.nodes_visited}")
        print(f"verdict {report.verdict}")
    else:
        print(f"forbidden volumes for t={args.t}, k={k}, mode={args.mode}")
        print(f"{'s':>5}  {'status':<16}  {'nodes':>10}  {'seconds':>8}")
        for s, out in outcomes.items():
            print(f"{s:>5}  {out.status:<16}  {out.nodes_visited:>10}  {out.runtime_seconds:>8.2f}")
        print(f"verdict: {report.verdict}")
    return {"verified": OK, "failed": NEGATIVE, "inconclusive": INCONCLUSIVE}[report.verdict]


def _nonneg(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="tradelab", description="t-(v,k) trade toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check that a trade file is a t-trade")
    p.add_argument("path")
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("minimal", help="write the minimal t-(v,k) trade")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_minimal)

    p = sub.add_parser("derive", help="write the derived trade at element x")
    p.add_argument("path")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_derive)

    for name, helptext in (("search", "exhaustive search for one volume"),
                           ("spectrum", "search every forbidden volume with k = t+1")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--t", type=int, required=True)
        if name == "search":
            p.add_argument("--k", type=int, required=True)
            p.add_argument("--s", type=int, required=True)
        p.add_argument("--mode", choices=search.MODES, default="steiner")
        p.add_argument("--max-foundation", type=_nonneg)
        p.add_argument("--node-budget", type=_nonneg)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--witness-dir")
        p.add_argument("--ledger", help="certificate ledger (default: $TRADE_LEDGER)")
        p.add_argument("--machine", action="store_true", help="one record per line")
        p.set_defaults(func=cmd_search if name == "search" else cmd_spectrum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except UsageError as exc:
        _err(str(exc))
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
