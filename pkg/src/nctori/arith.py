"""Number-theoretic basics: factorization, totients, integer cyclotomic polynomials.

Polynomials are plain tuples of integer coefficients in ascending degree, so
``(-1, 0, 1)`` is x^2 - 1.  Everything here is exact integer arithmetic; no
floating point is used anywhere.  All functions are pure and thread-safe.
"""

from __future__ import annotations

import functools

IntPolynomial = tuple[int, ...]


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``n`` as (prime, exponent) pairs, primes ascending.

    >>> factorize(12)
    [(2, 2), (3, 1)]
    >>> factorize(1)
    []
    """
    if n < 1:
        raise ValueError(f"factorize expects a positive integer, got {n}")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def totient(n: int) -> int:
    """Euler's phi function; totient(1) == 1.

    >>> totient(9)
    6
    >>> totient(12)
    4
    """
    if n < 1:
        raise ValueError(f"totient expects a positive integer, got {n}")
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def divisors(n: int) -> list[int]:
    """All positive divisors of ``n``, ascending."""
    if n < 1:
        raise ValueError(f"divisors expects a positive integer, got {n}")
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def poly_mul(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Product of two coefficient tuples (ascending degree)."""
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return tuple(out)


def poly_divmod(num: IntPolynomial, den: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
    """Quotient and remainder of ``num / den`` for a monic divisor ``den``.

    Plain long division over the integers; exact because the divisor is monic.
    """
    if not den or den[-1] != 1:
        raise ValueError("poly_divmod requires a monic divisor")
    rem = list(num)
    dd = len(den) - 1
    if dd == 0:
        return tuple(rem), ()
    quot = [0] * max(len(rem) - dd, 0)
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i]
        if c:
            quot[i - dd] = c
            for j, cd in enumerate(den):
                rem[i - dd + j] -= c * cd
    while rem and rem[-1] == 0:
        rem.pop()
    return tuple(quot), tuple(rem)


@functools.lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPolynomial:
    """Coefficients of the n-th cyclotomic polynomial, ascending degree.

    Computed by exact polynomial division: x^n - 1 divided by the cyclotomic
    polynomials of the proper divisors of n.  Monic of degree totient(n).

    >>> cyclotomic(1)
    (-1, 1)
    >>> cyclotomic(2)
    (1, 1)
    >>> cyclotomic(9)
    (1, 0, 0, 1, 0, 0, 1)
    """
    if n < 1:
        raise ValueError(f"cyclotomic expects a positive integer, got {n}")
    poly: IntPolynomial = (-1,) + (0,) * (n - 1) + (1,)  # x^n - 1
    for d in divisors(n):
        if d < n:
            poly, rem = poly_divmod(poly, cyclotomic(d))
            if rem:
                raise AssertionError(f"inexact cyclotomic division at n={n}, d={d}")
    return poly
