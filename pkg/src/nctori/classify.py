"""The classification engine for canonical actions on noncommutative tori.

Given a dimension d and a finite cyclic group, finite abelian group, or
finitely generated abelian group, decide whether the group embeds in
GL_d(Z) with the canonical block realization, whether a simple torus
carries the action, construct the realization (with sign absorption for
orders congruent to 2 mod 4), compute the crossed-product K-ranks through
the tensor decomposition, and evaluate both AF predicates: the closed-form
arithmetic condition on the order, and the first-principles check that the
computed K_1 rank vanishes.  The two can disagree (orders 50 and 54 are the
smallest cases); verdicts carry both answers plus a divergence flag rather
than hiding the discrepancy.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import lcm

from .arith import cyclotomic, factorize, totient
from .exactlin import Matrix, order
from .invariants import (
    Block,
    BlockSpec,
    Cyclotomic,
    Identity,
    NegCyclotomic,
    ORACLE_MAX_DIM,
    block_label,
    free_outside_origin,
    invariant_rank_oracle,
    invariant_ranks,
    realize,
    s1,
)
from .ktheory import GradedRank, RankInfo, at_least, exact, factor_k, kunneth_all, torus_k
from .theta import SymbolicSkew, invariant_space, is_invariant, nondegenerate_invariant_exists
from .wfun import AbelianGroup, max_finite_order, w_group, w_order

W_TOO_BIG = "w_too_big"
GAP_ONE = "gap_one"
EXISTS = "exists"


def af_paper(n: int) -> bool:
    """The closed-form AF condition on the order n: n = 2m with m of the
    shape 3^j 5^i p^e (j <= 2, i <= 1, one prime p > 5, e >= 0), or
    n = 2^k 3^j 5^i with k != 1, j <= 2, i <= 1.

    >>> af_paper(6), af_paper(7), af_paper(8), af_paper(54)
    (True, False, True, False)
    """
    if n < 2:
        raise ValueError(f"af_paper expects n >= 2, got {n}")
    fac = dict(factorize(n))
    k, j, i = fac.get(2, 0), fac.get(3, 0), fac.get(5, 0)
    big = {p: e for p, e in fac.items() if p not in (2, 3, 5)}
    if not big and k != 1 and j <= 2 and i <= 1:
        return True
    return k == 1 and len(big) <= 1 and j <= 2 and i <= 1


@dataclass(eq=False)
class Realization:
    """A concrete block realization: the block list, its integer matrix, and
    the matrix order.  The invariant-form witness is computed on first access
    (solving the invariant space can dwarf the rest of a verdict)."""

    blocks: BlockSpec
    matrix: Matrix
    order: int

    @functools.cached_property
    def _theta_result(self) -> tuple[bool, SymbolicSkew | None]:
        return nondegenerate_invariant_exists(self.matrix)

    @property
    def theta_exists(self) -> bool:
        return self._theta_result[0]

    @property
    def theta(self) -> SymbolicSkew | None:
        return self._theta_result[1]


@dataclass(eq=False)
class Verdict:
    """Classification outcome for one (dimension, group) query."""

    d: int
    input_label: str
    realizable_in_gl_d: bool
    simple_action_exists: bool
    reason: str
    w: int
    realization: Realization | None
    k: GradedRank | None
    is_at: bool
    is_af_computed: bool
    is_af_paper_predicate: bool
    divergence_flag: bool


def _failure_verdict(d, label, w, reason, realization=None) -> Verdict:
    return Verdict(
        d=d,
        input_label=label,
        realizable_in_gl_d=reason != W_TOO_BIG,
        simple_action_exists=False,
        reason=reason,
        w=w,
        realization=realization,
        k=None,
        is_at=False,
        is_af_computed=False,
        is_af_paper_predicate=False,
        divergence_flag=False,
    )


@functools.lru_cache(maxsize=None)
def _standalone_s1(block: Block) -> int:
    return s1((block,))


def _candidate_blocks(n: int) -> list[tuple[Block, ...]]:
    """Cyclotomic block lists realizing Z_n in dimension w_order(n), n >= 3.

    For n = 2m with odd m > 1 the factor 2 costs no dimension: it is absorbed
    by negating one odd prime-power block, and every choice of the negated
    block is a distinct candidate."""
    fac = factorize(n)
    if n % 4 == 2:
        odd = [(p, e) for p, e in fac if p != 2]
        return [
            tuple(
                NegCyclotomic(p**e) if idx == pick else Cyclotomic(p**e)
                for idx, (p, e) in enumerate(odd)
            )
            for pick in range(len(odd))
        ]
    return [tuple(Cyclotomic(p**e) for p, e in fac)]


def _best_blocks(n: int) -> tuple[Block, ...]:
    """The K_1-optimal candidate: minimize the summed standalone odd-degree
    invariant ranks; ties go to negating the largest prime power."""

    def sort_key(blocks):
        total = sum(_standalone_s1(b) for b in blocks)
        negated = max((b.n for b in blocks if isinstance(b, NegCyclotomic)), default=0)
        return (total, -negated)

    return min(_candidate_blocks(n), key=sort_key)


def _make_realization(blocks: BlockSpec, group_order: int) -> Realization:
    return Realization(blocks=tuple(blocks), matrix=realize(blocks), order=group_order)


def _finish_verdict(d, label, w, realization, factors, paper_flag) -> Verdict:
    k = kunneth_all(factors)
    af_computed = k.k1 == exact(0)
    return Verdict(
        d=d,
        input_label=label,
        realizable_in_gl_d=True,
        simple_action_exists=True,
        reason=EXISTS,
        w=w,
        realization=realization,
        k=k,
        is_at=True,
        is_af_computed=af_computed,
        is_af_paper_predicate=paper_flag,
        divergence_flag=af_computed != paper_flag,
    )


def classify_cyclic(d: int, n: int) -> Verdict:
    """Classify the order-n cyclic action on a simple d-torus.

    Outcomes: the order does not fit in GL_d(Z) (w_order(n) > d); it fits
    but d - w_order(n) = 1, where every invariant form is degenerate; or a
    simple action exists, built from cyclotomic companion blocks padded by
    an identity block, with the K-ranks of the crossed product.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if n < 2:
        raise ValueError(f"classify_cyclic expects an order n >= 2, got {n}")
    w = w_order(n)
    label = f"Z{n}"
    if w > d:
        return _failure_verdict(d, label, w, W_TOO_BIG)
    gap = d - w

    if n == 2:
        # The full flip -I_d: every coordinate is negated, no residual torus
        # factor acts trivially, and the whole action is free of even order.
        blocks = (Cyclotomic(2),) * d
        realization = _make_realization(blocks, 2)
        if gap == 1:
            return _failure_verdict(d, label, w, GAP_ONE, realization)
        flip_k = GradedRank(at_least(1), exact(s1(blocks)))
        return _finish_verdict(d, label, w, realization, [flip_k], af_paper(2) and gap == 0)

    cyclo_blocks = _best_blocks(n)
    if gap == 1:
        blocks = cyclo_blocks + (Identity(1),)
        return _failure_verdict(d, label, w, GAP_ONE, _make_realization(blocks, n))
    blocks = cyclo_blocks + ((Identity(gap),) if gap else ())
    realization = _make_realization(blocks, n)
    factors = [factor_k(b) for b in cyclo_blocks] + [torus_k(gap)]
    return _finish_verdict(d, label, w, realization, factors, af_paper(n) and gap == 0)


def _part_blocks(n_l: int) -> tuple[Block, ...]:
    if n_l == 2:
        return (Cyclotomic(2), Cyclotomic(2))  # -I_2; a lone sign block cannot carry Z_2
    return _best_blocks(n_l)


def _part_k(n_l: int) -> GradedRank:
    if n_l == 2:
        return GradedRank(at_least(1), exact(0))  # flip on a 2-torus, even order
    return kunneth_all(factor_k(b) for b in _best_blocks(n_l))


def classify_group(d: int, g: AbelianGroup) -> Verdict:
    """Classify the action of a finite abelian group, realized part by part
    along a cost-minimizing cyclic decomposition of its torsion."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if g.free_rank:
        raise ValueError("classify_group expects free rank 0; use classify_fg")
    if g.is_trivial:
        raise ValueError("classify_group expects a nontrivial group")
    w, decomp = w_group(g)
    label = str(g)
    if w > d:
        return _failure_verdict(d, label, w, W_TOO_BIG)
    gap = d - w
    group_order = lcm(*decomp.parts)
    cyclo_blocks = tuple(itertools.chain.from_iterable(_part_blocks(n_l) for n_l in decomp.parts))
    if gap == 1:
        blocks = cyclo_blocks + (Identity(1),)
        return _failure_verdict(d, label, w, GAP_ONE, _make_realization(blocks, group_order))
    blocks = cyclo_blocks + ((Identity(gap),) if gap else ())
    realization = _make_realization(blocks, group_order)
    factors = [_part_k(n_l) for n_l in decomp.parts] + [torus_k(gap)]
    paper_flag = gap == 0 and all(af_paper(n_l) for n_l in decomp.parts)
    return _finish_verdict(d, label, w, realization, factors, paper_flag)


def classify_fg(d: int, g: AbelianGroup) -> Verdict:
    """Classify the action of a finitely generated abelian group.

    The free part acts by adding dimensions: the crossed product is modeled
    as the torsion factors tensored with a torus of dimension d + r - W.
    Existence holds whenever the torsion fits and either the gap differs
    from one or the free rank is positive (the gap-one case lands on a
    form that is zero in one coordinate, with the free part restoring
    simplicity one dimension up).
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    w, decomp = w_group(g)
    r = g.free_rank
    label = str(g)
    if w > d:
        return _failure_verdict(d, label, w, W_TOO_BIG)
    gap = d - w
    group_order = lcm(*decomp.parts, 1)
    cyclo_blocks = tuple(itertools.chain.from_iterable(_part_blocks(n_l) for n_l in decomp.parts))
    if gap == 1 and r == 0:
        blocks = cyclo_blocks + (Identity(1),)
        return _failure_verdict(d, label, w, GAP_ONE, _make_realization(blocks, group_order))
    blocks = cyclo_blocks + ((Identity(gap),) if gap else ())
    realization = _make_realization(blocks if blocks else (Identity(d),), group_order)
    factors = [_part_k(n_l) for n_l in decomp.parts] + [torus_k(d + r - w)]
    k = kunneth_all(factors)
    af_computed = r == 0 and k.k1 == exact(0)
    paper_flag = r == 0 and gap == 0 and all(af_paper(n_l) for n_l in decomp.parts)
    return Verdict(
        d=d,
        input_label=label,
        realizable_in_gl_d=True,
        simple_action_exists=True,
        reason=EXISTS,
        w=w,
        realization=realization,
        k=k,
        is_at=True,
        is_af_computed=af_computed,
        is_af_paper_predicate=paper_flag,
        divergence_flag=af_computed != paper_flag,
    )


# -- analysis of arbitrary user matrices ------------------------------------


@functools.lru_cache(maxsize=None)
def _totient_preimages(k: int) -> tuple[int, ...]:
    # phi(n) >= sqrt(n/2), so phi(n) = k forces n <= 2k^2 + 2
    return tuple(n for n in range(1, 2 * k * k + 3) if totient(n) == k)


def _is_companion_shape(m: Matrix) -> bool:
    size = m.nrows
    for i in range(size):
        for j in range(size - 1):
            expected = 1 if j == i - 1 else 0
            if m.rows[i][j] != expected:
                return False
    return True


def _match_block(sub: Matrix) -> Block | None:
    size = sub.nrows
    if sub == Matrix.identity(size):
        return Identity(size)
    for ctor, cand in ((Cyclotomic, sub), (NegCyclotomic, -sub)):
        if _is_companion_shape(cand):
            poly = tuple(-cand.rows[i][size - 1] for i in range(size)) + (1,)
            for n in _totient_preimages(size):
                if cyclotomic(n) == poly:
                    return ctor(n)
    return None


def recognize_blocks(a: Matrix) -> BlockSpec | None:
    """Decompose a matrix into contiguous diagonal blocks that are identity,
    cyclotomic companion, or negated cyclotomic companion; None otherwise."""
    d = a.nrows
    blocks: list[Block] = []
    start = 0
    while start < d:
        matched = None
        for size in range(1, d - start + 1):
            end = start + size
            if any(a.rows[i][j] for i in range(start, end) for j in range(end, d)):
                continue
            if any(a.rows[i][j] for i in range(end, d) for j in range(start, end)):
                continue
            sub = Matrix(tuple(row[start:end] for row in a.rows[start:end]))
            b = _match_block(sub)
            if b is not None:
                matched = (b, size)
                break
        if matched is None:
            return None
        blocks.append(matched[0])
        start += matched[1]
    merged: list[Block] = []
    for b in blocks:
        if isinstance(b, Identity) and merged and isinstance(merged[-1], Identity):
            merged[-1] = Identity(merged[-1].m + b.m)
        else:
            merged.append(b)
    return tuple(merged)


@dataclass(eq=False)
class ActionReport:
    """What ``analyze_action`` can determine about one finite-order matrix."""

    dim: int
    order: int
    free: bool
    blocks: BlockSpec | None
    oracle_ranks: tuple[int, ...] | None
    spectrum_ranks: tuple[int, ...] | None
    s1: int | None
    s1_note: str | None
    k1: RankInfo | None
    invariant_space_dim: int
    theta_exists: bool
    theta: SymbolicSkew | None


def analyze_action(a: Matrix, theta: SymbolicSkew | None = None) -> ActionReport:
    """Full report on the canonical action of a finite-order integer matrix:
    order, freeness, per-degree invariant ranks (brute force up to dimension
    12, and by the spectrum method when the block structure is recognized),
    the K_1 rank when the freeness hypothesis holds, and whether a
    nondegenerate invariant form exists.
    """
    if not a.is_square or a.nrows == 0:
        raise ValueError("analyze_action requires a nonempty square matrix")
    d = a.nrows
    k = order(a, max_finite_order(d))
    if k is None:
        raise ValueError(f"matrix has no finite order at dimension {d}")
    if theta is not None:
        if theta.dim != d:
            raise ValueError("theta dimension mismatch")
        if not is_invariant(theta, a):
            raise ValueError("theta is not invariant under the matrix")
    free = free_outside_origin(a)
    blocks = recognize_blocks(a)
    oracle_ranks = (
        tuple(invariant_rank_oracle(a, m) for m in range(d + 1)) if d <= ORACLE_MAX_DIM else None
    )
    spectrum_ranks = invariant_ranks(blocks) if blocks is not None else None
    ranks = spectrum_ranks if spectrum_ranks is not None else oracle_ranks
    s1_value = None
    s1_note = None
    k1 = None
    if not free:
        s1_note = "s1 unavailable: action is not free outside the origin"
    elif ranks is None:
        s1_note = "s1 unavailable: dimension exceeds the brute-force limit and no block structure recognized"
    else:
        s1_value = sum(ranks[m] for m in range(1, d + 1, 2))
        k1 = exact(s1_value)
    exists, witness = nondegenerate_invariant_exists(a)
    return ActionReport(
        dim=d,
        order=k,
        free=free,
        blocks=blocks,
        oracle_ranks=oracle_ranks,
        spectrum_ranks=spectrum_ranks,
        s1=s1_value,
        s1_note=s1_note,
        k1=k1,
        invariant_space_dim=len(invariant_space(a)),
        theta_exists=exists,
        theta=witness,
    )


# -- JSON rendering -----------------------------------------------------------


def rankinfo_json(r: RankInfo | None):
    return None if r is None else {"kind": r.kind, "value": r.value}


def verdict_json(v: Verdict) -> dict:
    return {
        "d": v.d,
        "input": v.input_label,
        "realizable": v.realizable_in_gl_d,
        "simple_action": v.simple_action_exists,
        "reason": v.reason,
        "order": v.realization.order if v.realization else 0,
        "blocks": [block_label(b) for b in v.realization.blocks] if v.realization else [],
        "k0": rankinfo_json(v.k.k0 if v.k else None),
        "k1": rankinfo_json(v.k.k1 if v.k else None),
        "AT": v.is_at,
        "AF_computed": v.is_af_computed,
        "AF_paper": v.is_af_paper_predicate,
        "divergence": v.divergence_flag,
    }


def report_json(r: ActionReport) -> dict:
    return {
        "d": r.dim,
        "order": r.order,
        "free_outside_origin": r.free,
        "blocks": [block_label(b) for b in r.blocks] if r.blocks is not None else None,
        "oracle_ranks": list(r.oracle_ranks) if r.oracle_ranks is not None else None,
        "spectrum_ranks": list(r.spectrum_ranks) if r.spectrum_ranks is not None else None,
        "s1": r.s1,
        "s1_note": r.s1_note,
        "k1": rankinfo_json(r.k1),
        "invariant_space_dim": r.invariant_space_dim,
        "nondegenerate_theta_exists": r.theta_exists,
    }
