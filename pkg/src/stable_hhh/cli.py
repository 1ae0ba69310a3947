"""Command-line front end: ``stable-hhh <command> ...``.

Exit status: 0 on success/PASS, 2 when a verification fails, 1 on usage
errors.  Reports are UTF-8 JSON with sorted keys; anything run-dependent
(timing) lives under "meta".

Permutations are given in cycle notation, e.g. ``"(1 2 3)(4)"`` or
``"(1,2)(3,4)"``; fixed points may be omitted.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Optional, Sequence

from . import __version__
from .groebner import ResourceLimitExceeded, Window, DEFAULT_SPAIR_BUDGET
from .hhh import (
    a_zero_window,
    default_window,
    e_ring,
    exterior_convolve,
    full_hhh,
    poincare_series,
    specialized_factorization,
    stable_homology_presentation,
    verify_E_isomorphism,
)
from .mf import simplify
from .oracle import bidegree_homology, compare, default_jobs
from .perm import Permutation, PermutationError, special_form
from .verify import identity_suite

SCHEMA = "stable-hhh/1"
log = logging.getLogger("stable_hhh")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _q_window(text: str):
    try:
        a, b = (int(s) for s in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}")
    if a > b:
        raise argparse.ArgumentTypeError(f"window bounds out of order: {text!r}")
    return a, b


def _cycle_type(text: str):
    try:
        parts = tuple(int(s) for s in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of cycle lengths, got {text!r}")
    if not parts or any(k < 1 for k in parts):
        raise argparse.ArgumentTypeError(f"invalid cycle type {text!r}")
    return tuple(sorted(parts))


def _common(p: argparse.ArgumentParser, perm=True, window=True):
    p.add_argument("--n", type=int, required=True, help="number of strands")
    if perm:
        p.add_argument("--perm", help='permutation in cycle notation, e.g. "(1 2 3)"')
        p.add_argument("--cycle-type", type=_cycle_type, help='cycle lengths, e.g. "2,1"')
    if window:
        p.add_argument("--q-window", type=_q_window, metavar="A:B")
        p.add_argument("--t-max", type=int)
        p.add_argument("--a-max", type=int)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default $STABLE_HHH_JOBS or 1)")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--spair-budget", type=int, default=DEFAULT_SPAIR_BUDGET)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stable-hhh", description="Stable triply graded homology of twisted projectors.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(sub.add_parser("compute", help="presentation, shift, Poincare series and expansion"))
    _common(sub.add_parser("e-ring", help="the flag ring E and its isomorphism report"), perm=False, window=False)
    _common(sub.add_parser("series-expand", help="expand the closed-form Poincare series"))

    mf = sub.add_parser("mf", help="matrix factorization tools")
    mf_sub = mf.add_subparsers(dest="mf_command", required=True, parser_class=_Parser)
    _common(mf_sub.add_parser("simplify", help="move-by-move reduction trace of M_n"), window=False)

    ver = sub.add_parser("verify", help="verification suites")
    ver_sub = ver.add_subparsers(dest="verify_command", required=True, parser_class=_Parser)
    _common(ver_sub.add_parser("identities", help="algebraic identity suite"), perm=False, window=False)
    vh = ver_sub.add_parser("homology", help="oracle homology against the Poincare series")
    _common(vh)
    vh.add_argument("--method", choices=["auto", "slices", "modules"], default="auto")
    return parser


# -- helpers ------------------------------------------------------------------

def _permutation(args, default_identity: bool = True) -> Permutation:
    n = args.n
    if getattr(args, "perm", None) and getattr(args, "cycle_type", None):
        raise UsageError("give at most one of --perm and --cycle-type")
    if getattr(args, "perm", None):
        return Permutation.parse(args.perm, n)
    if getattr(args, "cycle_type", None):
        if sum(args.cycle_type) != n:
            raise UsageError(f"cycle type {args.cycle_type} does not partition {n}")
        return special_form(args.cycle_type)
    if default_identity:
        return Permutation.identity(n)
    raise UsageError("a permutation is required")


def _window(args) -> Window:
    w = default_window(args.n)
    q_min, q_max = args.q_window if args.q_window else (w.q_min, w.q_max)
    t_max = args.t_max if args.t_max is not None else w.t_max
    a_max = args.a_max if args.a_max is not None else w.a_max
    if t_max < 0 or a_max < 0:
        raise UsageError("--t-max and --a-max must be nonnegative")
    return Window(q_min, q_max, 0, t_max, 0, a_max)


def _table_json(table) -> list:
    return [{"q": d.q, "t": d.t, "a": d.a, "dim": c} for d, c in sorted(table.items(), key=lambda kv: (kv[0].a, kv[0].t, kv[0].q))]


# -- commands -------------------------------------------------------------------

def cmd_compute(args) -> tuple:
    w = _permutation(args)
    window = _window(args)
    pres = stable_homology_presentation(args.n, w)
    series = poincare_series(args.n, pres.cycle_type)
    table = full_hhh(pres, window)
    expansion = series.expand(window)
    report = {
        "command": "compute",
        "n": args.n,
        "input_permutation": str(w),
        "cycle_type": list(pres.cycle_type),
        "presentation": pres.ring.to_json(),
        "shift": {"q": pres.unit_shift.q, "t": pres.unit_shift.t},
        "exterior_degrees": [d.to_json() for d in pres.exterior_factor],
        "poincare_closed_form": series.closed_form(),
        "poincare_series": series.to_json(),
        "t_minus_one": series.at_t_minus_one(),
        "window": window.to_json(),
        "expansion": _table_json(table),
        "series_matches_ring": table == expansion,
    }
    return report, 0 if table == expansion else 2


def cmd_series(args) -> tuple:
    w = _permutation(args)
    window = _window(args)
    series = poincare_series(args.n, w.cycle_type())
    exp = series.expand(window)
    negative = [d.to_json() for d, c in exp.items() if c < 0]
    report = {
        "command": "series-expand",
        "n": args.n,
        "cycle_type": list(w.cycle_type()),
        "poincare_series": series.to_json(),
        "window": window.to_json(),
        "expansion": _table_json(exp),
        "nonnegative": not negative,
    }
    return report, 0


def cmd_e_ring(args) -> tuple:
    E = e_ring(args.n)
    rep = verify_E_isomorphism(args.n)
    report = {"command": "e-ring", "n": args.n, "presentation": E.to_json(), "isomorphism": rep.to_json()}
    return report, 0 if rep.passed else 2


def cmd_mf_simplify(args) -> tuple:
    w = _permutation(args, default_identity=True)
    twist = None if w == Permutation.identity(args.n) else w
    steps = simplify(args.n, twist)
    report = {
        "command": "mf simplify",
        "n": args.n,
        "perm": str(w),
        "steps": [s.to_json() for s in steps],
        "potential_invariant": all(s.potential == "0" for s in steps),
    }
    return report, 0 if report["potential_invariant"] else 2


def cmd_verify_identities(args) -> tuple:
    results = identity_suite(args.n)
    ok = all(r.passed for r in results)
    report = {
        "command": "verify identities",
        "n": args.n,
        "pass": ok,
        "checks": [r.to_json() for r in results],
        "meta": {"timing": {r.name: round(r.seconds, 4) for r in results}},
    }
    return report, 0 if ok else 2


def cmd_verify_homology(args) -> tuple:
    w = _permutation(args)
    window = _window(args)
    # the twisted complex is built from w as given; only the series uses the cycle type
    K = specialized_factorization(args.n, w)
    base = bidegree_homology(K, a_zero_window(window, args.n), jobs=args.jobs, method=args.method)
    table = exterior_convolve(base, args.n, window)
    rep = compare(table, poincare_series(args.n, w.cycle_type()), window)
    report = {"command": "verify homology", "n": args.n, "perm": str(w), "method": args.method, **rep.to_json()}
    return report, 0 if rep.passed else 2


COMMANDS = {
    "compute": cmd_compute,
    "series-expand": cmd_series,
    "e-ring": cmd_e_ring,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.jobs is None:
        args.jobs = default_jobs()
    if args.n < 1:
        print(f"stable-hhh: error: --n must be at least 1 (got {args.n})", file=sys.stderr)
        return 1
    if args.jobs < 1:
        print("stable-hhh: error: --jobs must be at least 1", file=sys.stderr)
        return 1
    if args.command == "mf":
        fn = cmd_mf_simplify
    elif args.command == "verify":
        fn = cmd_verify_identities if args.verify_command == "identities" else cmd_verify_homology
    else:
        fn = COMMANDS[args.command]
    t0 = time.perf_counter()
    try:
        report, status = fn(args)
    except (UsageError, PermutationError) as exc:
        print(f"stable-hhh: error: {exc}", file=sys.stderr)
        return 1
    except ResourceLimitExceeded as exc:
        print(f"stable-hhh: resource limit: {exc}", file=sys.stderr)
        return 1
    report = {"schema": SCHEMA, **report}
    meta = report.setdefault("meta", {})
    meta["seconds"] = round(time.perf_counter() - t0, 4)
    meta["version"] = __version__
    text = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
