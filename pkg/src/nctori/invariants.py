"""Exterior-power invariant ranks of finite-order integer matrices.

Two independent routes compute the rank of the fixed lattice of the m-th
exterior power of a block realization:

* ``invariant_rank`` counts size-m sub-multisets of the rotation spectrum
  with integer sum (a subset-sum dynamic program over residues), which
  scales well past dimension 12;
* ``invariant_rank_oracle`` is the brute-force check: build the compound
  matrix, subtract the identity, and take the exact rank over the rationals.

``s1`` sums the odd-degree invariant ranks; under a free-outside-the-origin
cyclic action this is the rank of K_1 of the crossed product.  ``s1`` itself
does not verify freeness (callers gate on ``free_outside_origin``), which
keeps it usable on tensor factors whose freeness was established separately.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt, lcm

from .arith import cyclotomic, totient
from .exactlin import Matrix, _echelon_int, block_diag, companion, det, order
from .wfun import max_finite_order


@dataclass(frozen=True)
class Cyclotomic:
    """Companion block of the n-th cyclotomic polynomial (order n, size phi(n))."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Cyclotomic block index must be positive")


@dataclass(frozen=True)
class NegCyclotomic:
    """Negated companion block of the n-th cyclotomic polynomial."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("NegCyclotomic block index must be positive")


@dataclass(frozen=True)
class Identity:
    """Identity block of size m (the residual torus directions)."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("Identity block size must be positive")


Block = Cyclotomic | NegCyclotomic | Identity
BlockSpec = tuple[Block, ...]


def block_dim(block: Block) -> int:
    if isinstance(block, Identity):
        return block.m
    return totient(block.n)


def block_order(block: Block) -> int:
    """Multiplicative order of the realized block."""
    if isinstance(block, Identity):
        return 1
    if isinstance(block, Cyclotomic):
        return block.n
    n = block.n
    if n % 2 == 1:
        return 2 * n
    return n // 2 if n % 4 == 2 else n


def block_label(block: Block) -> str:
    if isinstance(block, Cyclotomic):
        return f"C{block.n}"
    if isinstance(block, NegCyclotomic):
        return f"negC{block.n}"
    return f"I{block.m}"


def parse_block_spec(text: str) -> BlockSpec:
    """Parse the '+'-separated mini-grammar: tokens C<n>, negC<n>, I<m>.

    >>> parse_block_spec("C9+negC3+I2")
    (Cyclotomic(n=9), NegCyclotomic(n=3), Identity(m=2))
    """
    blocks: list[Block] = []
    cleaned = text.replace(" ", "")
    if not cleaned:
        raise ValueError("empty block spec")
    for token in cleaned.split("+"):
        if token.startswith("negC"):
            kind, arg = NegCyclotomic, token[4:]
        elif token.startswith("C"):
            kind, arg = Cyclotomic, token[1:]
        elif token.startswith("I"):
            kind, arg = Identity, token[1:]
        else:
            raise ValueError(f"unrecognized block token {token!r}")
        if not arg.isdigit():
            raise ValueError(f"block token {token!r} needs a positive integer argument")
        blocks.append(kind(int(arg)))
    return tuple(blocks)


def spec_dim(spec) -> int:
    return sum(block_dim(b) for b in spec)


def spec_order(spec) -> int:
    return lcm(*(block_order(b) for b in spec), 1)


@functools.lru_cache(maxsize=None)
def _realize_block(block: Block) -> Matrix:
    if isinstance(block, Identity):
        return Matrix.identity(block.m)
    c = companion(cyclotomic(block.n))
    return -c if isinstance(block, NegCyclotomic) else c


def realize(spec) -> Matrix:
    """Integer matrix realization: the direct sum of the blocks in order."""
    return block_diag(_realize_block(b) for b in spec)


def rotation_spectrum(spec) -> tuple[Fraction, ...]:
    """Eigenvalue angles of the realized matrix, as the sorted multiset of
    q in [0, 1) with exp(2 pi i q) an eigenvalue.

    A Cyclotomic(n) block contributes {k/n : gcd(k, n) = 1}; negation shifts
    every angle by 1/2; identity blocks contribute zeros.
    """
    angles: list[Fraction] = []
    for block in spec:
        if isinstance(block, Identity):
            angles.extend([Fraction(0)] * block.m)
            continue
        shift = Fraction(1, 2) if isinstance(block, NegCyclotomic) else Fraction(0)
        n = block.n
        angles.extend((Fraction(k, n) + shift) % 1 for k in range(1, n + 1) if gcd(k, n) == 1)
    return tuple(sorted(angles))


@functools.lru_cache(maxsize=None)
def invariant_ranks(spec: BlockSpec) -> tuple[int, ...]:
    """All invariant ranks (degree 0 through the dimension) in one pass.

    Dynamic program over (number of angles chosen, residue of the partial sum
    modulo the lcm of the angle denominators); multiplicities enter through
    binomial convolution.
    """
    spec = tuple(spec)
    d = spec_dim(spec)
    counts: dict[Fraction, int] = {}
    for q in rotation_spectrum(spec):
        counts[q] = counts.get(q, 0) + 1
    modulus = lcm(*(q.denominator for q in counts), 1)
    table = [[0] * modulus for _ in range(d + 1)]
    table[0][0] = 1
    placed = 0
    for q in sorted(counts):
        mult = counts[q]
        step = q.numerator * (modulus // q.denominator) % modulus
        binom = [comb(mult, j) for j in range(mult + 1)]
        new = [[0] * modulus for _ in range(d + 1)]
        for c in range(placed + 1):
            row = table[c]
            for r in range(modulus):
                v = row[r]
                if v:
                    for j in range(mult + 1):
                        new[c + j][(r + j * step) % modulus] += v * binom[j]
        table = new
        placed += mult
    return tuple(table[m][0] for m in range(d + 1))


def invariant_rank(spec, m: int) -> int:
    """Number of size-m sub-multisets of the rotation spectrum with integer sum.

    Equals the rank of the fixed lattice of the m-th exterior power of the
    realized matrix (cross-checked against ``invariant_rank_oracle``).
    """
    spec = tuple(spec)
    if not 0 <= m <= spec_dim(spec):
        raise ValueError(f"degree {m} out of range for dimension {spec_dim(spec)}")
    return invariant_ranks(spec)[m]


def s1(spec) -> int:
    """Sum of the odd-degree invariant ranks.

    For a free-outside-the-origin cyclic action this is the K_1 rank of the
    crossed product; the freeness hypothesis is the caller's responsibility.
    """
    ranks = invariant_ranks(tuple(spec))
    return sum(ranks[m] for m in range(1, len(ranks), 2))


def even_invariant_sum(spec) -> int:
    """Sum of the even-degree invariant ranks (diagnostic only; this is not
    asserted to be the K_0 rank, which has no closed form here)."""
    ranks = invariant_ranks(tuple(spec))
    return sum(ranks[m] for m in range(0, len(ranks), 2))


ORACLE_MAX_DIM = 12


def invariant_rank_oracle(a: Matrix, m: int) -> int:
    """Brute-force invariant rank: C(d, m) - rank(compound(a, m) - I) over Q.

    Requires a finite-order matrix (caller's contract) of dimension at most
    12; use ``invariant_rank`` beyond that.
    """
    from .exactlin import compound

    if not a.is_square:
        raise ValueError("oracle requires a square matrix")
    d = a.nrows
    if d > ORACLE_MAX_DIM:
        raise ValueError(f"oracle limited to dimension {ORACLE_MAX_DIM}, got {d}")
    if not 0 <= m <= d:
        raise ValueError(f"degree {m} out of range for dimension {d}")
    c = compound(a, m)
    diff = c - Matrix.identity(c.nrows)
    return c.nrows - _rank_by_components(diff)


def free_outside_origin(a: Matrix) -> bool:
    """True when every nontrivial power of ``a`` fixes only the origin,
    i.e. det(a^j - I) != 0 for 1 <= j < order(a)."""
    if not a.is_square:
        raise ValueError("free_outside_origin requires a square matrix")
    if a.nrows == 0:
        return True
    k = order(a, max_finite_order(a.nrows))
    if k is None:
        raise ValueError("matrix does not have finite order at this dimension")
    ident = Matrix.identity(a.nrows)
    power = a
    for _ in range(1, k):
        if det(power - ident) == 0:
            return False
        power = power @ a
    return True


# -- exact rank machinery for the oracle ------------------------------------
#
# compound(a, m) - I for a block realization is permutation-similar to a block
# diagonal matrix, so splitting the support graph into connected components
# before eliminating keeps the elimination blocks small.  Large components use
# a certified modular rank: pivots found mod p stay nonzero over Z (a lower
# bound), and reconstructed kernel vectors verified exactly over Z supply the
# matching upper bound.  Reconstruction failures fall back to exact echelon.

_CERT_PRIME = (1 << 61) - 1
_SMALL_COMPONENT = 64


def _components(m: Matrix) -> list[list[int]]:
    n = m.nrows
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, row in enumerate(m.rows):
        for j, v in enumerate(row):
            if v and i != j:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _rank_by_components(m: Matrix) -> int:
    total = 0
    for idx in _components(m):
        rows = [[m.rows[i][j] for j in idx] for i in idx]
        if any(any(row) for row in rows):
            total += _rank_int_rows(rows)
    return total


def _rank_int_rows(rows: list[list[int]]) -> int:
    if len(rows) <= _SMALL_COMPONENT:
        return len(_echelon_int([row[:] for row in rows]))
    certified = _rank_certified(rows)
    if certified is not None:
        return certified
    return len(_echelon_int([row[:] for row in rows]))


def _rational_reconstruct(value: int, p: int) -> tuple[int, int] | None:
    """Unique a/b with value = a/b mod p and |a|, b <= sqrt(p/2), if any."""
    bound = isqrt(p // 2)
    r0, r1 = p, value % p
    s0, s1_ = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1_ = s1_, s0 - q * s1_
    if s1_ == 0 or abs(s1_) > bound or gcd(r1, abs(s1_)) != 1:
        return None
    return (r1, s1_) if s1_ > 0 else (-r1, -s1_)


def _rank_certified(rows: list[list[int]]) -> int | None:
    p = _CERT_PRIME
    n = len(rows)
    ncols = len(rows[0])
    work = [[x % p for x in row] for row in rows]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, n):
            if work[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = pow(work[r][c], p - 2, p)
        work[r] = [x * inv % p for x in work[r]]
        rr = work[r]
        for i in range(n):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [(x - f * y) % p for x, y in zip(work[i], rr)]
        pivots.append((r, c))
        r += 1
        if r == n:
            break
    rank_mod = len(pivots)
    pivot_cols = {c for _, c in pivots}
    # Verified kernel vectors certify rank <= rank_mod; pivots already give >=.
    for fc in range(ncols):
        if fc in pivot_cols:
            continue
        entries: list[tuple[int, int]] = []  # (numerator, denominator) per coord
        ok = True
        for c in range(ncols):
            if c == fc:
                entries.append((1, 1))
            elif c in pivot_cols:
                row = next(rr for rr, cc in pivots if cc == c)
                rec = _rational_reconstruct((-work[row][fc]) % p, p)
                if rec is None:
                    ok = False
                    break
                entries.append(rec)
            else:
                entries.append((0, 1))
        if not ok:
            return None
        denom = lcm(*(b for _, b in entries))
        vec = [a * (denom // b) for a, b in entries]
        for row in rows:
            if sum(rv * xv for rv, xv in zip(row, vec) if xv):
                return None
    return rank_mod


# -- exhaustive spec family helpers (used by the verification suite) ---------


def block_menu(max_n: int = 12, max_identity: int = 3) -> tuple[Block, ...]:
    """The standard test menu: Cyclotomic(n) for n <= max_n, NegCyclotomic(n)
    for odd n <= max_n, Identity(m) for m <= max_identity."""
    menu: list[Block] = [Cyclotomic(n) for n in range(1, max_n + 1)]
    menu.extend(NegCyclotomic(n) for n in range(1, max_n + 1, 2))
    menu.extend(Identity(m) for m in range(1, max_identity + 1))
    return tuple(menu)


def enumerate_specs(max_dim: int, menu=None) -> list[BlockSpec]:
    """All multisets of menu blocks with total dimension <= max_dim, each as a
    canonically sorted tuple (ascending dimension, then label)."""
    menu = block_menu() if menu is None else tuple(menu)
    ordered = sorted(menu, key=lambda b: (block_dim(b), block_label(b)))
    out: list[BlockSpec] = []

    def extend(idx: int, budget: int, acc: list[Block]):
        out.append(tuple(acc))
        for i in range(idx, len(ordered)):
            b = ordered[i]
            if block_dim(b) <= budget:
                acc.append(b)
                extend(i, budget - block_dim(b), acc)
                acc.pop()

    extend(0, max_dim, [])
    return out
