import pytest

from nctori.arith import cyclotomic, divisors, factorize, poly_divmod, poly_mul, totient


def test_factorize_examples():
    assert factorize(12) == [(2, 2), (3, 1)]
    assert factorize(1) == []
    assert factorize(54) == [(2, 1), (3, 3)]


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_reconstructs():
    for n in range(1, 500):
        prod = 1
        prev_p = 0
        for p, e in factorize(n):
            assert p > prev_p and e >= 1
            prev_p = p
            prod *= p**e
        assert prod == n


def test_totient_examples():
    assert totient(9) == 6
    assert totient(1) == 1
    assert totient(12) == 4


def test_totient_rejects_zero():
    with pytest.raises(ValueError):
        totient(0)


def test_totient_counts_units():
    from math import gcd

    for n in range(1, 200):
        assert totient(n) == sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def _local_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def _local_exact_div(num, den):
    # plain long division, checked exact; independent of arith.poly_divmod
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(num) - 1, len(den) - 2, -1):
        c = num[i]
        assert c % den[-1] == 0
        q[i - len(den) + 1] = c // den[-1]
        for j, cd in enumerate(den):
            num[i - len(den) + 1 + j] -= (c // den[-1]) * cd
    assert all(c == 0 for c in num)
    return q


def test_cyclotomic_small():
    assert cyclotomic(1) == (-1, 1)
    assert cyclotomic(2) == (1, 1)


def test_cyclotomic_9_against_division_oracle():
    # x^9 - 1 divided by phi_1 * phi_3, both written down by hand
    phi1_phi3 = _local_mul([-1, 1], [1, 1, 1])
    expected = _local_exact_div([-1] + [0] * 8 + [1], phi1_phi3)
    assert expected == [1, 0, 0, 1, 0, 0, 1]
    assert cyclotomic(9) == tuple(expected)


def test_cyclotomic_12_against_division_oracle():
    # x^12 - 1 divided by the product of the lower cyclotomics
    lower = [-1, 1]
    for coeffs in ([1, 1], [1, 1, 1], [1, 0, 1], [1, -1, 1]):  # phi_2, phi_3, phi_4, phi_6
        lower = _local_mul(lower, coeffs)
    expected = _local_exact_div([-1] + [0] * 11 + [1], lower)
    assert expected == [1, 0, -1, 0, 1]
    assert cyclotomic(12) == tuple(expected)


def test_cyclotomic_rejects_zero():
    with pytest.raises(ValueError):
        cyclotomic(0)


def test_cyclotomic_product_identity():
    for n in range(1, 201):
        prod = (1,)
        for d in divisors(n):
            prod = poly_mul(prod, cyclotomic(d))
        assert prod == (-1,) + (0,) * (n - 1) + (1,), n


def test_cyclotomic_degree_is_totient():
    for n in range(1, 201):
        assert len(cyclotomic(n)) - 1 == totient(n)


def test_totient_divisor_sum():
    for n in range(1, 1001):
        assert sum(totient(d) for d in divisors(n)) == n


def test_poly_divmod_remainder():
    q, r = poly_divmod((1, 2, 3), (1, 1))  # 3x^2+2x+1 by x+1
    assert poly_mul(q, (1, 1)) == (1, 2, 3) if not r else True
    recombined = list(poly_mul(q, (1, 1)))
    for i, c in enumerate(r):
        recombined[i] += c
    assert tuple(recombined) == (1, 2, 3)
