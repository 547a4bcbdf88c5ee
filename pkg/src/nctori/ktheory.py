"""Graded K-rank bookkeeping: exact-or-lower-bound ranks with a Künneth product.

Ranks are either Exact(v) or AtLeast(v); products and sums follow interval
semantics where Exact(0) annihilates (0 times any true rank is 0) and any
surviving AtLeast taints exactness.  The Künneth product is the Z_2-graded
tensor rule for torsion-free K-theory, which is the only kind representable
here: every crossed-product factor in scope has torsion-free K-groups, so
the Tor terms of the general sequence never contribute.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .invariants import Block, Cyclotomic, Identity, NegCyclotomic, block_dim, free_outside_origin, realize, s1

EXACT = "exact"
AT_LEAST = "at_least"


@dataclass(frozen=True)
class RankInfo:
    """Either the exact rank of a free abelian group or a lower bound on it."""

    kind: str
    value: int

    def __post_init__(self):
        if self.kind not in (EXACT, AT_LEAST):
            raise ValueError(f"bad kind {self.kind!r}")
        if self.value < 0:
            raise ValueError("rank value must be nonnegative")

    @property
    def is_exact(self) -> bool:
        return self.kind == EXACT

    def __str__(self):
        return str(self.value) if self.is_exact else f">={self.value}"


def exact(v: int) -> RankInfo:
    return RankInfo(EXACT, v)


def at_least(v: int) -> RankInfo:
    return RankInfo(AT_LEAST, v)


def _add(a: RankInfo, b: RankInfo) -> RankInfo:
    kind = EXACT if a.is_exact and b.is_exact else AT_LEAST
    return RankInfo(kind, a.value + b.value)


def _mul(a: RankInfo, b: RankInfo) -> RankInfo:
    if (a.is_exact and a.value == 0) or (b.is_exact and b.value == 0):
        return exact(0)
    kind = EXACT if a.is_exact and b.is_exact else AT_LEAST
    return RankInfo(kind, a.value * b.value)


@dataclass(frozen=True)
class GradedRank:
    """The pair (rank K_0, rank K_1)."""

    k0: RankInfo
    k1: RankInfo

    def __str__(self):
        return f"(k0={self.k0}, k1={self.k1})"


KUNNETH_UNIT = GradedRank(exact(1), exact(0))


def kunneth(a: GradedRank, b: GradedRank) -> GradedRank:
    """Graded tensor product of torsion-free K-ranks:
    k0 = a0*b0 + a1*b1 and k1 = a0*b1 + a1*b0."""
    return GradedRank(
        k0=_add(_mul(a.k0, b.k0), _mul(a.k1, b.k1)),
        k1=_add(_mul(a.k0, b.k1), _mul(a.k1, b.k0)),
    )


def kunneth_all(factors) -> GradedRank:
    out = KUNNETH_UNIT
    for f in factors:
        out = kunneth(out, f)
    return out


def torus_k(m: int) -> GradedRank:
    """K-ranks of an m-torus: (2^{m-1}, 2^{m-1}) for m >= 1, (1, 0) for m = 0."""
    if m < 0:
        raise ValueError("torus dimension must be nonnegative")
    if m == 0:
        return KUNNETH_UNIT
    return GradedRank(exact(2 ** (m - 1)), exact(2 ** (m - 1)))


@functools.lru_cache(maxsize=None)
def factor_k(block: Block) -> GradedRank:
    """K-ranks of one crossed-product factor: a single cyclotomic or negated
    cyclotomic block acting on its own coordinates.

    k1 is exact (the odd invariant-rank sum for the block's free cyclic
    action); k0 is only known to be positive, since the algebra is unital
    and no closed form for the K_0 rank is in scope here.
    """
    if isinstance(block, Identity):
        raise ValueError("factor_k applies to cyclotomic blocks, not identity blocks")
    if not isinstance(block, (Cyclotomic, NegCyclotomic)):
        raise TypeError(f"not a block: {block!r}")
    if block_dim(block) <= 6:
        # Cheap spot check of the freeness hypothesis; larger blocks are free
        # for the same structural reason (primitive root-of-unity spectrum).
        if not free_outside_origin(realize((block,))):
            raise ValueError(f"block {block!r} does not act freely outside the origin")
    return GradedRank(at_least(1), exact(s1((block,))))
