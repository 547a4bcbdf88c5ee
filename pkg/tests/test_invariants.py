import random
from fractions import Fraction
from math import gcd

import pytest

from nctori.exactlin import Matrix, det, order
from nctori.invariants import (
    Cyclotomic,
    Identity,
    NegCyclotomic,
    block_dim,
    block_label,
    block_order,
    enumerate_specs,
    even_invariant_sum,
    free_outside_origin,
    invariant_rank,
    invariant_rank_oracle,
    invariant_ranks,
    parse_block_spec,
    realize,
    rotation_spectrum,
    s1,
    spec_dim,
    spec_order,
)


def frac(a, b):
    return Fraction(a, b)


def test_rotation_spectrum_examples():
    assert rotation_spectrum((Cyclotomic(9),)) == tuple(
        frac(k, 9) for k in (1, 2, 4, 5, 7, 8)
    )
    assert rotation_spectrum((Identity(3),)) == (0, 0, 0)
    assert rotation_spectrum((NegCyclotomic(3),)) == (frac(1, 6), frac(5, 6))


def test_rotation_spectrum_galois_closed():
    for spec in [(Cyclotomic(9),), (Cyclotomic(12),), (NegCyclotomic(5),), (Cyclotomic(7), Cyclotomic(4))]:
        spectrum = rotation_spectrum(spec)
        assert len(spectrum) == spec_dim(spec)
        values = set(spectrum)
        for q in spectrum:
            n = q.denominator
            for a in range(1, n):
                if gcd(a, n) == 1:
                    assert (q * a) % 1 in values


def test_invariant_rank_z9_vanishing():
    spec = (Cyclotomic(9),)
    for m in (1, 3, 5):
        assert invariant_rank(spec, m) == 0
    assert invariant_rank(spec, 0) == 1
    assert invariant_rank(spec, 2) == 3  # pairs {1,8},{2,7},{4,5} of ninths
    assert s1(spec) == 0


def test_invariant_rank_identity_and_range():
    assert invariant_rank((Identity(2),), 1) == 2
    with pytest.raises(ValueError):
        invariant_rank((Identity(2),), 3)


def test_oracle_examples():
    assert invariant_rank_oracle(realize((Cyclotomic(9),)), 3) == 0
    assert invariant_rank_oracle(Matrix.identity(4), 2) == 6
    assert invariant_rank_oracle(realize((Cyclotomic(3),)), 1) == 0


def test_oracle_rejects_large_dimension():
    with pytest.raises(ValueError):
        invariant_rank_oracle(Matrix.identity(13), 1)


def test_s1_examples():
    assert s1((Cyclotomic(9),)) == 0
    assert s1((Cyclotomic(7),)) == (2**6 - 36) // 14
    assert s1((NegCyclotomic(27),)) == 0


def test_s1_prime_closed_form():
    for n in (3, 5, 7, 11):
        assert s1((Cyclotomic(n),)) == (2 ** (n - 1) - (n - 1) ** 2) // (2 * n), n


def test_s1_positive_when_dimension_large_enough():
    # odd prime powers q with phi(q) <= 12 and q^(e-1)(q-2) >= 5
    for q in (7, 11, 13):
        assert s1((Cyclotomic(q),)) > 0


def test_free_outside_origin():
    assert free_outside_origin(realize((Cyclotomic(9),)))
    assert free_outside_origin(-Matrix.identity(4))
    assert not free_outside_origin(realize((Cyclotomic(3), Identity(1))))


def test_free_outside_origin_rejects_infinite_order():
    with pytest.raises(ValueError):
        free_outside_origin(Matrix([[1, 1], [0, 1]]))


def test_block_helpers():
    assert block_dim(Cyclotomic(9)) == 6
    assert block_dim(Identity(3)) == 3
    assert block_order(NegCyclotomic(27)) == 54
    assert block_order(NegCyclotomic(6)) == 3
    assert block_order(NegCyclotomic(4)) == 4
    assert block_label(NegCyclotomic(27)) == "negC27"
    assert parse_block_spec("C9+negC3+I2") == (Cyclotomic(9), NegCyclotomic(3), Identity(2))
    with pytest.raises(ValueError):
        parse_block_spec("C9+flip")
    with pytest.raises(ValueError):
        parse_block_spec("")


def test_spec_order_matches_realized_order():
    for text in ("C9", "negC27", "C3+I2", "negC5+C4", "C2+C2", "negC1"):
        spec = parse_block_spec(text)
        assert spec_order(spec) == order(realize(spec), 200), text


def test_oracle_equivalence_small_exhaustive():
    # the full-depth sweep lives in the acceptance suite; this is the fast core
    oracle_cache = {}
    for spec in enumerate_specs(5):
        ranks = invariant_ranks(spec)
        a = realize(spec)
        if a not in oracle_cache:
            oracle_cache[a] = tuple(
                invariant_rank_oracle(a, m) for m in range(a.nrows + 1)
            )
        assert ranks == oracle_cache[a], spec


def test_oracle_equivalence_sampled_medium():
    rng = random.Random(1117)
    pool = [s for s in enumerate_specs(8) if spec_dim(s) >= 6]
    for spec in rng.sample(pool, 40):
        a = realize(spec)
        assert invariant_ranks(spec) == tuple(
            invariant_rank_oracle(a, m) for m in range(a.nrows + 1)
        ), spec


def test_even_order_free_specs_have_zero_s1():
    checked = 0
    for spec in enumerate_specs(8):
        if not spec:
            continue
        orders = {block_order(b) for b in spec}
        if len(orders) != 1 or orders == {1}:
            continue  # mixed orders or identity blocks: not free
        n = orders.pop()
        if n % 2 == 0:
            assert free_outside_origin(realize(spec)), spec
            assert s1(spec) == 0, spec
            checked += 1
    assert checked > 10


def test_nonfree_even_order_spec_can_have_positive_s1():
    # shows why the vanishing statement needs the freeness hypothesis
    spec = (Cyclotomic(5), Cyclotomic(5), Cyclotomic(2))
    assert spec_order(spec) == 10
    assert not free_outside_origin(realize(spec))
    assert s1(spec) > 0


def test_certified_rank_matches_exact_echelon():
    from nctori.exactlin import _echelon_int
    from nctori.invariants import _rank_certified

    rng = random.Random(64128)
    for trial in range(12):
        n = rng.randint(8, 40)
        rows = [
            [rng.choice([0, 0, 0, 0, 1, -1, 2]) for _ in range(n)] for _ in range(n - 3)
        ]
        # engineered rank deficiency: dependent and zero rows
        rows.append([a + b for a, b in zip(rows[0], rows[1])])
        rows.append([-3 * a for a in rows[2]])
        rows.append([0] * n)
        cert = _rank_certified([row[:] for row in rows])
        exact_rank = len(_echelon_int([row[:] for row in rows]))
        assert cert is None or cert == exact_rank, trial


def test_rank_sums_and_unit_term():
    rng = random.Random(2718)
    specs = rng.sample(enumerate_specs(6), 60)
    for spec in specs:
        ranks = invariant_ranks(spec)
        assert ranks[0] == 1
        if spec and det(realize(spec)) == 1:
            assert sum(ranks) >= 2, spec
        assert even_invariant_sum(spec) + s1(spec) == sum(ranks)
