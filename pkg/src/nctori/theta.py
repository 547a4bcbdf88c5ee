"""Symbolic skew-symmetric matrices and invariant-form existence.

A commutation matrix is modeled as Theta = A_0 + sum_k A_k * t_k with
rational skew coefficient matrices and formal symbols t_k that stand for
reals with {1, t_1, ..., t_s} linearly independent over Q.  Under that
reading, nondegeneracy (no nonzero integer vector x with Theta x integral)
becomes a decidable exact rank condition, and existence of a nondegenerate
invariant form for a matrix group generator reduces to a common-kernel check
on the invariant space.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .exactlin import Matrix, kernel_basis, rank


def _is_skew(m: Matrix) -> bool:
    return m.is_square and m.transpose() == -m


@dataclass(frozen=True)
class SymbolicSkew:
    """Skew form A_0 + sum of A_k * symbol_k over Q-independent symbols."""

    dim: int
    rational_part: Matrix
    symbol_parts: tuple[tuple[str, Matrix], ...] = ()

    def __post_init__(self):
        if self.rational_part.nrows != self.dim or self.rational_part.ncols != self.dim:
            raise ValueError("rational part has wrong shape")
        if not _is_skew(self.rational_part):
            raise ValueError("rational part must be skew-symmetric")
        seen = set()
        for name, mat in self.symbol_parts:
            if name in seen:
                raise ValueError(f"duplicate symbol {name!r}")
            seen.add(name)
            if mat.nrows != self.dim or mat.ncols != self.dim:
                raise ValueError(f"coefficient of {name!r} has wrong shape")
            if not _is_skew(mat):
                raise ValueError(f"coefficient of {name!r} must be skew-symmetric")

    @classmethod
    def from_symbol_matrices(cls, matrices, prefix: str = "θ") -> "SymbolicSkew":
        """One fresh symbol per coefficient matrix, zero rational part."""
        matrices = list(matrices)
        if not matrices:
            raise ValueError("need at least one coefficient matrix")
        d = matrices[0].nrows
        return cls(
            dim=d,
            rational_part=Matrix.zero(d, d),
            symbol_parts=tuple((f"{prefix}{k + 1}", m) for k, m in enumerate(matrices)),
        )

    def coefficient_matrices(self) -> tuple[Matrix, ...]:
        return tuple(m for _, m in self.symbol_parts)

    def entry(self, i: int, j: int) -> str:
        """Human-readable entry: rational constant plus symbol terms."""
        terms = []
        c = self.rational_part.rows[i][j]
        if c:
            terms.append(str(c))
        for name, mat in self.symbol_parts:
            v = mat.rows[i][j]
            if v == 0:
                continue
            if v == 1:
                term = name
            elif v == -1:
                term = f"-{name}"
            else:
                term = f"{v}*{name}"
            if terms and not term.startswith("-"):
                term = "+" + term
            terms.append(term)
        return "".join(terms) if terms else "0"


@dataclass(frozen=True)
class PairingValue:
    """Exact value of the pairing x . Theta . y: a rational constant plus
    rational coefficients on the symbols."""

    constant: Fraction
    terms: tuple[tuple[str, Fraction], ...] = ()

    def __str__(self):
        parts = [str(self.constant)] if self.constant or not self.terms else []
        for name, c in self.terms:
            if c == 1:
                s = name
            elif c == -1:
                s = f"-{name}"
            else:
                s = f"{c}*{name}"
            if parts and not s.startswith("-"):
                s = "+" + s
            parts.append(s)
        return "".join(parts) if parts else "0"


def _bilinear(mat: Matrix, x, y) -> Fraction:
    total = 0
    for i, xi in enumerate(x):
        if xi:
            row = mat.rows[i]
            total += xi * sum(row[j] * yj for j, yj in enumerate(y) if yj)
    return Fraction(total)


def pairing(theta: SymbolicSkew, x, y) -> PairingValue:
    """The cocycle exponent of (x, y): the value x . Theta . y carried
    exactly as an element of Q + sum Q*t_k."""
    x, y = list(x), list(y)
    if len(x) != theta.dim or len(y) != theta.dim:
        raise ValueError("vector dimension mismatch")
    const = _bilinear(theta.rational_part, x, y)
    terms = []
    for name, mat in theta.symbol_parts:
        c = _bilinear(mat, x, y)
        if c:
            terms.append((name, c))
    return PairingValue(const, tuple(terms))


def is_invariant(theta: SymbolicSkew, a: Matrix) -> bool:
    """True when a^t Theta a = Theta, coefficient matrix by coefficient matrix."""
    if a.nrows != theta.dim or a.ncols != theta.dim:
        raise ValueError("matrix dimension mismatch")
    at = a.transpose()
    if at @ theta.rational_part @ a != theta.rational_part:
        return False
    return all(at @ mat @ a == mat for _, mat in theta.symbol_parts)


def _support_components(a: Matrix) -> list[list[int]]:
    n = a.nrows
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(n):
            if i != j and (a.rows[i][j] or a.rows[j][i]):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _diagonal_block_solutions(a: Matrix, p: list[int]) -> list[list[tuple[int, int, Fraction]]]:
    """Skew solutions of a^t S a = S supported on indices p (upper triangle)."""
    positions = [(p[i], p[j]) for i in range(len(p)) for j in range(i + 1, len(p))]
    if not positions:
        return []
    rows = []
    for i, j in positions:
        row = []
        for k, l in positions:
            coeff = a.rows[k][i] * a.rows[l][j] - a.rows[l][i] * a.rows[k][j]
            row.append(coeff - (1 if (k, l) == (i, j) else 0))
        rows.append(row)
    return [
        [(pos[0], pos[1], Fraction(v)) for pos, v in zip(positions, vec) if v]
        for vec in kernel_basis(Matrix(rows, ncols=len(positions)))
    ]


def _cross_block_solutions(a: Matrix, p: list[int], q: list[int]) -> list[list[tuple[int, int, Fraction]]]:
    """Solutions of a^t S a = S supported on the (p, q) off-diagonal block."""
    positions = [(i, j) for i in p for j in q]
    rows = []
    for i, j in positions:
        row = []
        for k, l in positions:
            coeff = a.rows[k][i] * a.rows[l][j]
            row.append(coeff - (1 if (k, l) == (i, j) else 0))
        rows.append(row)
    return [
        [(pos[0], pos[1], Fraction(v)) for pos, v in zip(positions, vec) if v]
        for vec in kernel_basis(Matrix(rows, ncols=len(positions)))
    ]


@functools.lru_cache(maxsize=None)
def invariant_space(a: Matrix) -> tuple[Matrix, ...]:
    """Basis of the rational vector space {S skew : a^t S a = S}.

    Solved as a linear system in the upper-triangle entries.  When ``a`` is
    block diagonal the system decouples into one subsystem per pair of
    support components, which keeps the elimination small; the returned
    basis matrices are primitive integer and deterministic in order.
    """
    if not a.is_square:
        raise ValueError("invariant_space requires a square matrix")
    d = a.nrows
    comps = _support_components(a)
    basis = []
    for ci in range(len(comps)):
        for cj in range(ci, len(comps)):
            if ci == cj:
                solutions = _diagonal_block_solutions(a, comps[ci])
            else:
                solutions = _cross_block_solutions(a, comps[ci], comps[cj])
            for sol in solutions:
                rows = [[0] * d for _ in range(d)]
                for i, j, v in sol:
                    rows[i][j] = v
                    rows[j][i] = -v
                basis.append(Matrix(rows, ncols=d))
    return tuple(basis)


def is_nondegenerate(theta: SymbolicSkew) -> bool:
    """True when no nonzero integer vector x has Theta x integral.

    Because {1, t_k} are independent over Q, Theta x integral forces
    A_k x = 0 for every k >= 1, and any nonzero rational common-kernel
    vector scales to an integer witness; so the condition is exactly that
    the stacked symbol coefficient matrices have full column rank.
    """
    mats = theta.coefficient_matrices()
    if not mats:
        return theta.dim == 0
    stacked = Matrix([row for m in mats for row in m.rows], ncols=theta.dim)
    return rank(stacked) == theta.dim


def nondegenerate_invariant_exists(a: Matrix) -> tuple[bool, SymbolicSkew | None]:
    """Decide whether a finite-order integer matrix admits a nondegenerate
    invariant skew form, returning a symbolic witness when it does.

    The witness puts one fresh symbol on each basis matrix of the invariant
    space (maximal genericity), so existence is exactly the condition that
    the basis matrices have trivial common kernel.
    """
    basis = invariant_space(a)
    if not basis:
        return (a.nrows == 0, None)
    theta = SymbolicSkew.from_symbol_matrices(basis)
    if is_nondegenerate(theta):
        return True, theta
    return False, None
