"""Minimal-dimension cost functions for finite-order elements and abelian groups.

``w_order(n)`` is the least d such that GL_d(Z) contains an element of order
n.  ``w_cyclic`` adjusts the n = 2 case (a sign block alone cannot carry a
group factor, so Z_2 costs two dimensions), and ``w_group`` minimizes over
all cyclic decompositions of the torsion part.  Pure functions throughout.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .arith import factorize


def w_order(n: int) -> int:
    """Dimension cost of an order-n element: sum of phi(p^e) over the prime
    powers of n, reduced by one when the factor 2 appears with exponent one.

    >>> w_order(6)
    2
    >>> w_order(9)
    6
    """
    if n < 1:
        raise ValueError(f"w_order expects a positive integer, got {n}")
    total = 0
    deduct = 0
    for p, e in factorize(n):
        total += (p - 1) * p ** (e - 1)
        if p == 2 and e == 1:
            deduct = 1
    return total - deduct


def w_cyclic(n: int) -> int:
    """Dimension cost of the cyclic group Z_n; equals w_order(n) except that
    Z_2 costs 2 (its realization must spend a full -I_2 block)."""
    if n < 2:
        raise ValueError(f"w_cyclic expects n >= 2, got {n}")
    return 2 if n == 2 else w_order(n)


@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group in primary decomposition.

    ``torsion`` is the sorted multiset of prime-power orders of the cyclic
    factors; ``free_rank`` counts the Z factors.
    """

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free_rank must be nonnegative")
        for q in self.torsion:
            fac = factorize(q)
            if len(fac) != 1:
                raise ValueError(f"torsion entry {q} is not a prime power")
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion)))

    @classmethod
    def from_factors(cls, factors, free_rank: int = 0) -> "AbelianGroup":
        """Build from arbitrary cyclic factor orders, splitting composites
        into prime powers (Z_6 becomes Z_2 x Z_3)."""
        torsion = []
        for n in factors:
            if n < 2:
                raise ValueError(f"cyclic factor orders must be >= 2, got {n}")
            torsion.extend(p**e for p, e in factorize(n))
        return cls(tuple(torsion), free_rank)

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    @property
    def torsion_order(self) -> int:
        out = 1
        for q in self.torsion:
            out *= q
        return out

    @property
    def exponent(self) -> int:
        """Exponent of the torsion part (lcm of the factor orders)."""
        best: dict[int, int] = {}
        for q in self.torsion:
            ((p, e),) = factorize(q)
            best[p] = max(best.get(p, 0), e)
        out = 1
        for p, e in best.items():
            out *= p**e
        return out

    def __str__(self):
        parts = [f"Z{q}" for q in self.torsion]
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        return "x".join(parts) if parts else "Z^0"


@dataclass(frozen=True)
class CyclicDecomposition:
    """A factoring of a torsion multiset into cyclic parts.

    Each part is a product of prime powers with pairwise distinct primes, so
    it really is the order of one cyclic factor; together the parts use up
    the whole multiset.
    """

    parts: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted(self.parts)))


def _coprime_partitions(torsion: tuple[int, ...]):
    """All partitions of the prime-power multiset into parts with pairwise
    distinct primes, as tuples of part orders.  Duplicates (from equal
    multiset entries) are collapsed."""
    entries = [(q, factorize(q)[0][0]) for q in sorted(torsion)]

    def extend(idx: int, parts: list[tuple[int, frozenset[int]]]):
        if idx == len(entries):
            yield tuple(sorted(q for q, _ in parts))
            return
        q, p = entries[idx]
        seen = set()
        for i, (order_i, primes_i) in enumerate(parts):
            if p not in primes_i and order_i not in seen:
                seen.add(order_i)
                updated = parts[:i] + [(order_i * q, primes_i | {p})] + parts[i + 1 :]
                yield from extend(idx + 1, updated)
        yield from extend(idx + 1, parts + [(q, frozenset({p}))])

    results = set()
    for partition in extend(0, []):
        results.add(partition)
    return sorted(results)


@functools.lru_cache(maxsize=None)
def _w_group_cached(torsion: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    if not torsion:
        return 0, ()
    best = None
    for parts in _coprime_partitions(torsion):
        cost = sum(w_cyclic(n) for n in parts)
        key = (cost, len(parts), parts)
        if best is None or key < best:
            best = key
    return best[0], best[2]


def w_group(g: AbelianGroup) -> tuple[int, CyclicDecomposition]:
    """Minimum of sum(w_cyclic(n_l)) over cyclic decompositions of the torsion
    part, with one minimizing decomposition.  The free rank plays no role.

    Minimizers are tie-broken toward fewer parts, then the lexicographically
    smallest sorted part list, so the output is deterministic.

    >>> w_group(AbelianGroup.from_factors([2, 3]))
    (2, CyclicDecomposition(parts=(6,)))
    """
    cost, parts = _w_group_cached(g.torsion)
    return cost, CyclicDecomposition(parts)


@functools.lru_cache(maxsize=None)
def max_finite_order(d: int) -> int:
    """Largest order of a finite-order element of GL_d(Z): max{n : w_order(n) <= d}.

    Used as the search bound for ``exactlin.order``."""
    if d < 1:
        raise ValueError("dimension must be positive")
    primes = [p for p in range(2, d + 2) if all(p % q for q in range(2, p))]

    def best(idx: int, budget: int) -> int:
        if idx == len(primes):
            return 1
        p = primes[idx]
        result = best(idx + 1, budget)  # skip this prime
        e = 1
        while True:
            # a lone factor of 2 costs nothing (the -1 deduction in w_order)
            cost = 0 if (p == 2 and e == 1) else (p - 1) * p ** (e - 1)
            if cost > budget:
                break
            result = max(result, p**e * best(idx + 1, budget - cost))
            e += 1
        return result

    return best(0, d)
