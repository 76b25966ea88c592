"""Command line entry point: ``qtatoms <command> ...``.

Exit codes: 0 all pass, 1 a check failed, 2 usage error, 3 a task was skipped
for resource reasons.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Sequence

from . import harness
from .diagrams import DiagramError, GistolCapError, LatticeDiagram, Partition, parse_cell
from .symfunc import BASES, HtildeCapError, SymFun, convert, dumps, htilde

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SKIP = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def parse_diagram(text: str) -> LatticeDiagram:
    """``mu:[3,2,1]``, ``mu/ij:[3,2,1]/(0,0)`` or ``cells:(0,0),(0,2),(1,0)``."""
    kind, _, body = text.partition(":")
    kind = kind.strip()
    if kind == "mu":
        return Partition.parse(body).diagram()
    if kind == "mu/ij":
        m = re.fullmatch(r"\s*(\[[^\]]*\])\s*/\s*(\(.*\))\s*", body)
        if not m:
            raise DiagramError(f"expected mu/ij:[..]/(i,j), got {text!r}")
        return Partition.parse(m.group(1)).diagram().without(parse_cell(m.group(2)))
    if kind == "cells":
        cells = re.findall(r"\(\s*\d+\s*,\s*\d+\s*\)", body)
        if not cells or re.sub(r"\(\s*\d+\s*,\s*\d+\s*\)|[\s,]", "", body):
            raise DiagramError(f"expected cells:(i,j),(i,j),..., got {text!r}")
        return LatticeDiagram(parse_cell(c) for c in cells)
    raise DiagramError(f"unknown diagram form {kind!r}; use mu:, mu/ij: or cells:")


def _emit(f: SymFun, as_json: bool, extra: dict | None = None) -> None:
    if as_json:
        out = dict(extra or {})
        out["basis"] = f.basis
        out["degree"] = f.n
        out["terms"] = [[list(lam), str(c)] for lam, c in f.sorted_items()]
        print(json.dumps(out, indent=2))
    else:
        print(dumps(f))


def cmd_htilde(args) -> int:
    mu = Partition.parse(args.mu)
    if args.cache is not None and mu:
        # fill and persist the whole degree so later runs load it
        from .symfunc import htilde_table

        htilde_table(mu.size)
    _emit(convert(htilde(mu), args.basis), args.json, {"mu": list(mu)})
    return EXIT_OK


def cmd_frobenius(args) -> int:
    from .harmonics import derivative_span, frobenius_symfun, hilbert, lattice_determinant

    D = parse_diagram(args.diagram)
    if not D:
        raise UsageError("empty diagram")
    B = derivative_span(lattice_determinant(D))
    f = frobenius_symfun(B)
    if args.json:
        _emit(f, True, {"cells": [list(c) for c in D], "dim": B.dim(), "hilbert": str(hilbert(B))})
    else:
        print(f"# dim {B.dim()}")
        print(f"# hilbert {hilbert(B)}")
        print(dumps(f))
    return EXIT_OK


def cmd_pieri(args) -> int:
    from .pieri import dp1_expand

    mu = Partition.parse(args.mu)
    exp = dp1_expand(mu, args.form)
    if args.json:
        print(json.dumps({"mu": list(mu), "terms": [[list(nu), str(c)] for nu, c in exp.terms]}, indent=2))
    else:
        print(dumps(exp.to_symfun()))
    return EXIT_OK


def cmd_atoms(args) -> int:
    from .pieri import atoms

    mu = Partition.parse(args.mu)
    c = parse_cell(args.cell)
    d = atoms(mu, c)
    parts = {"A_x": d.A_x, "A_y": d.A_y, "xi": d.xi}
    if args.json:
        print(json.dumps({
            "mu": list(mu), "cell": list(c), "arm": d.arm, "leg": d.leg,
            **{k: [[list(lam), str(v)] for lam, v in convert(f, args.basis).sorted_items()] for k, f in parts.items()},
        }, indent=2))
    else:
        print(f"# mu {mu} cell {c} arm {d.arm} leg {d.leg}")
        for k, f in parts.items():
            print(f"## {k}")
            print(dumps(convert(f, args.basis)))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.nmax < args.nmin:
        raise UsageError("--nmax must be at least --nmin")
    reports = harness.run_campaign(
        args.kind, range(args.nmin, args.nmax + 1), parallelism=args.jobs, slow=args.slow,
        cache_dir=args.cache, seeds=args.seeds,
    )
    for r in reports:
        if r.status != "pass" or args.verbose:
            print(f"{r.status:7} {r.task}  {r.residual}")
    counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "skipped")}
    print(f"{args.kind}: {counts['pass']} pass, {counts['fail']} fail, {counts['skipped']} skipped")
    if args.report:
        Path(args.report).write_text(harness.reports_json(reports))
    return harness.exit_code(reports)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qtatoms", description=__doc__.splitlines()[0])
    p.add_argument("--cache", default=None, help="cache directory (default: $QTATOMS_CACHE)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("htilde", help="modified Macdonald polynomial of a partition")
    s.add_argument("--mu", required=True)
    s.add_argument("--basis", choices=BASES, default="s")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_htilde)

    s = sub.add_parser("frobenius", help="bigraded Frobenius characteristic of a diagram module")
    s.add_argument("--diagram", required=True, help="mu:[..], mu/ij:[..]/(i,j) or cells:(i,j),...")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_frobenius)

    s = sub.add_parser("pieri", help="expansion of dp1 H~_mu in the H~ basis")
    s.add_argument("--mu", required=True)
    s.add_argument("--form", choices=("product", "compact"), default="product")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_pieri)

    s = sub.add_parser("atoms", help="atoms A^x, A^y and Xi of a cell")
    s.add_argument("--mu", required=True)
    s.add_argument("--cell", required=True)
    s.add_argument("--basis", choices=BASES, default="H")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_atoms)

    s = sub.add_parser("verify", help="run a verification campaign")
    s.add_argument("--kind", required=True, choices=harness.KINDS)
    s.add_argument("--nmin", type=int, default=1)
    s.add_argument("--nmax", type=int, default=5)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--seeds", type=int, default=harness.LEMMA_SEEDS, help="instances for lemma12")
    s.add_argument("--slow", action="store_true", help=f"raise the brute-force cap to {harness.SLOW_BRUTE_CAP}")
    s.add_argument("--report", default=None, help="write JSON reports here")
    s.add_argument("-v", "--verbose", action="store_true", help="print passing tasks too")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.cache is None:
        args.cache = harness.default_cache_dir()
    if args.cache is not None and args.command != "verify":
        harness.install_cache(harness.Cache(args.cache))
    try:
        return args.func(args)
    except (UsageError, DiagramError, ValueError) as exc:
        print(f"qtatoms: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HtildeCapError, GistolCapError, MemoryError) as exc:
        print(f"qtatoms: skipped: {exc}", file=sys.stderr)
        return EXIT_SKIP
    finally:
        harness.uninstall_cache()


if __name__ == "__main__":
    sys.exit(main())
