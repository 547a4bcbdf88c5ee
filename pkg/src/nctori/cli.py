"""Command-line surface: group-expression parsing, commands, and rendering.

Exit codes: 0 on success, 1 on usage or parse errors, 2 on domain errors
(for example an order below 2).  With ``--json`` the same information is
emitted as a single JSON document; errors become {"error": ...}.  The only
environment variable honored is NO_COLOR, which suppresses ANSI styling in
text output (styling is only attempted on a terminal anyway).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .arith import cyclotomic
from .classify import (
    ActionReport,
    Verdict,
    analyze_action,
    classify_cyclic,
    classify_group,
    classify_fg,
    report_json,
    verdict_json,
)
from .exactlin import Matrix
from .invariants import (
    block_label,
    free_outside_origin,
    even_invariant_sum,
    invariant_ranks,
    parse_block_spec,
    realize,
    spec_dim,
    spec_order,
)
from .theta import nondegenerate_invariant_exists, invariant_space
from .wfun import AbelianGroup, max_finite_order, w_group, w_order


class CliParseError(Exception):
    """Malformed command-line input (exit code 1)."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise CliParseError(message)


_TERM_RE = re.compile(r"^Z(?:(\d+)|\^(\d+))$", re.IGNORECASE)


def parse_group(text: str) -> AbelianGroup:
    """Parse a group expression: 'x'-separated terms Z<n> (cyclic factor,
    n >= 2, split into prime powers) or Z^<r> (free rank).

    >>> parse_group("Z6xZ^3")
    AbelianGroup(torsion=(2, 3), free_rank=3)
    """
    squeezed = "".join(text.split())
    if not squeezed:
        raise CliParseError("empty group expression")
    factors: list[int] = []
    free_rank = 0
    pos = 0
    for term in squeezed.replace("X", "x").split("x"):
        m = _TERM_RE.match(term)
        if not m:
            raise CliParseError(f"bad term {term!r} at position {pos} (expected Z<n> or Z^<r>)")
        if m.group(1) is not None:
            n = int(m.group(1))
            if n < 2:
                raise CliParseError(f"Z{n} at position {pos} is not a nontrivial cyclic factor")
            factors.append(n)
        else:
            free_rank += int(m.group(2))
        pos += len(term) + 1
    return AbelianGroup.from_factors(factors, free_rank)


def read_matrix_file(path: str) -> Matrix:
    """Matrix text format: first line d, then d lines of d integers."""
    try:
        with open(path, encoding="utf-8") as fh:
            tokens = fh.read().split()
    except OSError as exc:
        raise CliParseError(f"cannot read {path}: {exc}") from exc
    if not tokens:
        raise CliParseError(f"{path}: empty matrix file")
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise CliParseError(f"{path}: non-integer token ({exc})") from exc
    d = values[0]
    if d < 1 or len(values) != 1 + d * d:
        raise CliParseError(f"{path}: expected {d} x {d} entries after the dimension line")
    body = values[1:]
    return Matrix(tuple(tuple(body[i * d : (i + 1) * d]) for i in range(d)))


def _styled(text: str, code: str) -> str:
    if os.environ.get("NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


def _rank_str(r) -> str:
    return "-" if r is None else str(r)


def _print_verdict_text(v: Verdict):
    print(f"d={v.d}  input={v.input_label}  W={v.w}")
    if not v.realizable_in_gl_d:
        print(_styled(f"not realizable: W={v.w} exceeds d={v.d}", "31"))
        return
    if not v.simple_action_exists:
        print(_styled("no simple action (gap one)", "31"))
        if v.realization:
            print(f"realization: {'+'.join(block_label(b) for b in v.realization.blocks)}"
                  f"  (order {v.realization.order})")
        return
    blocks = "+".join(block_label(b) for b in v.realization.blocks)
    print(_styled("simple action exists", "32") + f"  via {blocks}  (order {v.realization.order})")
    print(f"K-ranks: k0={v.k.k0}  k1={v.k.k1}")
    print(f"AT={_yesno(v.is_at)}  AF_computed={_yesno(v.is_af_computed)}"
          f"  AF_paper={_yesno(v.is_af_paper_predicate)}  divergence={_yesno(v.divergence_flag)}")


def _table_rows(dmax: int, nmax: int):
    for d in range(1, dmax + 1):
        for n in range(2, nmax + 1):
            yield classify_cyclic(d, n)


def _print_table_text(dmax: int, nmax: int):
    header = f"{'d':>3} {'n':>4} {'W':>4} {'exists':>7} {'AT':>4} {'AF_c':>5} {'AF_p':>5} {'k1':>6}"
    print(header)
    print("-" * len(header))
    for v in _table_rows(dmax, nmax):
        k1 = str(v.k.k1) if v.k else "-"
        print(
            f"{v.d:>3} {int(v.input_label[1:]):>4} {v.w:>4} "
            f"{_yesno(v.simple_action_exists):>7} {_yesno(v.is_at):>4} "
            f"{_yesno(v.is_af_computed):>5} {_yesno(v.is_af_paper_predicate):>5} {k1:>6}"
        )


def _print_report_text(r: ActionReport):
    print(f"dimension: {r.dim}")
    print(f"order: {r.order}")
    print(f"free outside origin: {_yesno(r.free)}")
    if r.blocks is not None:
        print(f"recognized blocks: {'+'.join(block_label(b) for b in r.blocks)}")
    if r.oracle_ranks is not None:
        print(f"invariant ranks (brute force): {list(r.oracle_ranks)}")
    if r.spectrum_ranks is not None:
        print(f"invariant ranks (spectrum):    {list(r.spectrum_ranks)}")
    if r.s1 is not None:
        print(f"s1 = {r.s1}   K1 rank = {r.k1}")
    else:
        print(r.s1_note)
    print(f"invariant space dimension: {r.invariant_space_dim}")
    print(f"nondegenerate invariant theta exists: {_yesno(r.theta_exists)}")


def _print_theta_text(a: Matrix):
    basis = invariant_space(a)
    exists, witness = nondegenerate_invariant_exists(a)
    print(f"invariant space dimension: {len(basis)}")
    print(f"nondegenerate invariant theta exists: {_yesno(exists)}")
    if witness is not None:
        print("witness (upper triangle):")
        for i in range(witness.dim):
            for j in range(i + 1, witness.dim):
                entry = witness.entry(i, j)
                if entry != "0":
                    print(f"  theta[{i + 1},{j + 1}] = {entry}")


def _theta_json(a: Matrix) -> dict:
    basis = invariant_space(a)
    exists, witness = nondegenerate_invariant_exists(a)
    payload = {
        "d": a.nrows,
        "invariant_space_dim": len(basis),
        "nondegenerate_exists": exists,
        "witness": None,
    }
    if witness is not None:
        payload["witness"] = {
            "symbols": [name for name, _ in witness.symbol_parts],
            "entries": [[witness.entry(i, j) for j in range(witness.dim)] for i in range(witness.dim)],
        }
    return payload


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="nctori", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wfun", help="dimension cost of an order-n element of GL_d(Z)")
    p.add_argument("n", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("wgroup", help="minimal dimension cost of a finite abelian group")
    p.add_argument("expr")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("cyclotomic", help="coefficients of the n-th cyclotomic polynomial")
    p.add_argument("n", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("s1", help="per-degree invariant ranks and their odd sum for a block spec")
    p.add_argument("--blocks", required=True, help="e.g. C9, negC27, C3+I2")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("classify", help="classify the Z_n action on a simple d-torus")
    p.add_argument("d", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("classify-group", help="classify a finitely generated abelian group action")
    p.add_argument("d", type=int)
    p.add_argument("expr")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("theta", help="invariant skew forms of an integer matrix")
    p.add_argument("matrix_file")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("analyze", help="full action report for an integer matrix")
    p.add_argument("matrix_file")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("table", help="verdict grid over dimensions and orders")
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--json", action="store_true")

    return parser


def _dispatch(args) -> int:
    if args.command == "wfun":
        w = w_order(args.n)
        if args.json:
            print(json.dumps({"n": args.n, "w": w}))
        else:
            print(w)
    elif args.command == "wgroup":
        group = parse_group(args.expr)
        w, decomp = w_group(group)
        if args.json:
            print(json.dumps({"group": str(group), "w": w, "decomposition": list(decomp.parts)}))
        else:
            parts = " x ".join(f"Z{n}" for n in decomp.parts) if decomp.parts else "trivial"
            print(f"W = {w}  via {parts}")
    elif args.command == "cyclotomic":
        coeffs = cyclotomic(args.n)
        if args.json:
            print(json.dumps({"n": args.n, "coefficients": list(coeffs)}))
        else:
            print(" ".join(str(c) for c in coeffs))
    elif args.command == "s1":
        try:
            spec = parse_block_spec(args.blocks)
        except ValueError as exc:
            raise CliParseError(str(exc)) from exc
        ranks = invariant_ranks(spec)
        odd = sum(ranks[m] for m in range(1, len(ranks), 2))
        free = free_outside_origin(realize(spec)) if spec_dim(spec) else True
        if args.json:
            print(json.dumps({
                "blocks": [block_label(b) for b in spec],
                "dimension": spec_dim(spec),
                "order": spec_order(spec),
                "free_outside_origin": free,
                "invariant_ranks": list(ranks),
                "s1": odd,
                "even_invariant_sum": even_invariant_sum(spec),
            }))
        else:
            for m, r in enumerate(ranks):
                print(f"degree {m}: {r}")
            print(f"s1 = {odd}  (even sum = {even_invariant_sum(spec)})")
            if not free:
                print("note: action is not free outside the origin; s1 is the raw odd sum")
    elif args.command == "classify":
        v = classify_cyclic(args.d, args.n)
        print(json.dumps(verdict_json(v))) if args.json else _print_verdict_text(v)
    elif args.command == "classify-group":
        group = parse_group(args.expr)
        v = classify_fg(args.d, group) if group.free_rank else classify_group(args.d, group)
        print(json.dumps(verdict_json(v))) if args.json else _print_verdict_text(v)
    elif args.command == "theta":
        a = read_matrix_file(args.matrix_file)
        print(json.dumps(_theta_json(a))) if args.json else _print_theta_text(a)
    elif args.command == "analyze":
        a = read_matrix_file(args.matrix_file)
        report = analyze_action(a)
        print(json.dumps(report_json(report))) if args.json else _print_report_text(report)
    elif args.command == "table":
        if args.dmax < 1:
            raise ValueError("--dmax must be at least 1")
        nmax = args.nmax if args.nmax is not None else max_finite_order(args.dmax)
        if args.json:
            print(json.dumps([verdict_json(v) for v in _table_rows(args.dmax, nmax)]))
        else:
            _print_table_text(args.dmax, nmax)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except CliParseError as exc:
        _emit_error(argv, str(exc))
        return 1
    except ValueError as exc:
        _emit_error(argv, str(exc))
        return 2


def _emit_error(argv, message: str):
    args = sys.argv[1:] if argv is None else list(argv)
    if "--json" in args:
        print(json.dumps({"error": message}))
    else:
        print(f"error: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
