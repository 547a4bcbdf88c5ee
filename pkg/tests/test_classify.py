import json

import pytest

from nctori.arith import cyclotomic
from nctori.exactlin import Matrix, block_diag, companion, order
from nctori.invariants import Cyclotomic, Identity, NegCyclotomic, block_label, realize
from nctori.ktheory import GradedRank, at_least, exact, torus_k
from nctori.classify import (
    GAP_ONE,
    W_TOO_BIG,
    af_paper,
    analyze_action,
    classify_cyclic,
    classify_fg,
    classify_group,
    recognize_blocks,
    report_json,
    verdict_json,
)
from nctori.theta import is_invariant, is_nondegenerate
from nctori.wfun import AbelianGroup, w_order


def test_af_paper_examples():
    assert af_paper(6)
    assert not af_paper(7)
    assert not af_paper(54)  # 2 * 3^3 fits neither closed form
    assert af_paper(8)
    assert af_paper(2)
    assert af_paper(3) and af_paper(9) and not af_paper(27)
    assert af_paper(45) and not af_paper(50)
    assert af_paper(14) and not af_paper(28)
    assert af_paper(12) and af_paper(48)
    with pytest.raises(ValueError):
        af_paper(1)


def test_classify_cyclic_exists_examples():
    v = classify_cyclic(2, 6)
    assert v.simple_action_exists and v.is_af_computed and v.is_af_paper_predicate

    v = classify_cyclic(6, 9)
    assert v.simple_action_exists and v.is_af_computed and v.is_af_paper_predicate
    assert [block_label(b) for b in v.realization.blocks] == ["C9"]

    v = classify_cyclic(6, 7)
    assert v.simple_action_exists and v.is_at and not v.is_af_computed
    assert v.k.k1 == exact(2)


def test_classify_cyclic_failure_modes():
    v = classify_cyclic(3, 3)
    assert v.realizable_in_gl_d and not v.simple_action_exists and v.reason == GAP_ONE

    v = classify_cyclic(2, 5)
    assert not v.realizable_in_gl_d and v.reason == W_TOO_BIG

    v = classify_cyclic(4, 12)
    assert v.simple_action_exists and v.is_af_computed and v.is_af_paper_predicate
    assert sorted(block_label(b) for b in v.realization.blocks) == ["C3", "C4"]


def test_classify_cyclic_rejects_bad_input():
    with pytest.raises(ValueError):
        classify_cyclic(2, 1)
    with pytest.raises(ValueError):
        classify_cyclic(0, 3)


def test_divergent_orders():
    v = classify_cyclic(18, 54)
    assert v.simple_action_exists
    assert [block_label(b) for b in v.realization.blocks] == ["negC27"]
    assert v.is_af_computed and not v.is_af_paper_predicate and v.divergence_flag

    v = classify_cyclic(20, 50)
    assert v.is_af_computed and not v.is_af_paper_predicate and v.divergence_flag


def test_sign_absorption_picks_low_k1_choice():
    # 42 = 2 * 3 * 7: negating the 7-block zeroes its odd invariant sum
    v = classify_cyclic(8, 42)
    labels = sorted(block_label(b) for b in v.realization.blocks)
    assert labels == ["C3", "negC7"]
    assert v.is_af_computed and v.is_af_paper_predicate


def test_flip_and_gap_one_for_order_two():
    v = classify_cyclic(4, 2)
    assert v.simple_action_exists
    assert v.realization.matrix == -Matrix.identity(4)
    assert v.is_af_computed
    # the closed-form predicate needs gap zero, so the full flip diverges
    assert not v.is_af_paper_predicate and v.divergence_flag

    v = classify_cyclic(1, 2)
    assert v.realizable_in_gl_d and v.reason == GAP_ONE


def test_realizations_verify():
    for d, n in [(2, 6), (6, 9), (6, 7), (4, 12), (2, 2), (8, 42), (10, 9), (7, 9)]:
        v = classify_cyclic(d, n)
        if v.realization is None:
            continue
        assert v.realization.matrix.nrows == d
        assert order(v.realization.matrix, 200) == v.realization.order == n
        if v.simple_action_exists:
            assert v.realization.theta_exists
            assert is_invariant(v.realization.theta, v.realization.matrix)
            assert is_nondegenerate(v.realization.theta)


def test_gap_one_realization_has_no_witness():
    for d, n in [(3, 3), (3, 4), (5, 8), (1, 2)]:
        v = classify_cyclic(d, n)
        assert v.reason == GAP_ONE
        assert not v.realization.theta_exists
        assert v.realization.theta is None


def test_classify_group_examples():
    v = classify_group(2, AbelianGroup.from_factors([2]))
    assert v.simple_action_exists and v.is_af_computed and v.is_af_paper_predicate

    v = classify_group(4, AbelianGroup.from_factors([2, 2]))
    assert v.simple_action_exists and v.is_af_computed and v.is_af_paper_predicate
    assert v.realization.matrix == -Matrix.identity(4)

    v = classify_group(3, AbelianGroup.from_factors([2, 2]))
    assert not v.realizable_in_gl_d and v.reason == W_TOO_BIG

    v = classify_group(2, AbelianGroup.from_factors([2, 3]))
    assert v.simple_action_exists and v.is_af_computed
    assert [block_label(b) for b in v.realization.blocks] == ["negC3"]
    assert v.realization.order == 6


def test_classify_group_gap_one():
    v = classify_group(5, AbelianGroup.from_factors([2, 2]))
    assert v.realizable_in_gl_d and not v.simple_action_exists and v.reason == GAP_ONE
    assert not v.realization.theta_exists


def test_classify_group_rejects_bad_input():
    with pytest.raises(ValueError):
        classify_group(2, AbelianGroup())
    with pytest.raises(ValueError):
        classify_group(2, AbelianGroup.from_factors([2], free_rank=1))


def test_classify_fg_examples():
    v = classify_fg(3, AbelianGroup.from_factors([3], free_rank=1))
    assert v.simple_action_exists
    assert v.k == GradedRank(at_least(2), at_least(2))
    assert not v.is_af_computed

    v = classify_fg(2, AbelianGroup((), free_rank=1))
    assert v.simple_action_exists and v.k == torus_k(3)
    assert not v.is_af_computed

    a = classify_fg(6, AbelianGroup.from_factors([9]))
    b = classify_cyclic(6, 9)
    assert (a.simple_action_exists, a.k, a.is_af_computed, a.is_af_paper_predicate) == (
        b.simple_action_exists,
        b.k,
        b.is_af_computed,
        b.is_af_paper_predicate,
    )


def test_classify_fg_pure_torus_reduction():
    for d in (2, 3, 5):
        for r in (0, 1, 2):
            if d == 1 and r == 0:
                continue
            v = classify_fg(d, AbelianGroup((), free_rank=r))
            assert v.k == torus_k(d + r), (d, r)


def test_classify_fg_gap_one_without_free_rank_fails():
    v = classify_fg(3, AbelianGroup.from_factors([3]))
    assert not v.simple_action_exists and v.reason == GAP_ONE


def test_analyze_action_flip():
    report = analyze_action(-Matrix.identity(4))
    assert report.order == 2 and report.free
    assert report.s1 == 0 and report.k1 == exact(0)
    assert report.theta_exists
    assert report.oracle_ranks == report.spectrum_ranks == (1, 0, 6, 0, 1)


def test_analyze_action_gap_one_matrix():
    a = block_diag([companion(cyclotomic(3)), Matrix.identity(1)])
    report = analyze_action(a)
    assert not report.free
    assert report.s1 is None and "not free" in report.s1_note
    assert not report.theta_exists


def test_analyze_action_companion_phi9():
    report = analyze_action(companion(cyclotomic(9)))
    assert report.order == 9 and report.free and report.s1 == 0
    assert report.blocks == (Cyclotomic(9),)


def test_analyze_action_checks_inputs():
    with pytest.raises(ValueError):
        analyze_action(Matrix([[1, 1], [0, 1]]))  # infinite order
    from nctori.theta import SymbolicSkew

    theta = SymbolicSkew(2, Matrix.zero(2, 2), (("t", Matrix([[0, 1], [-1, 0]])),))
    with pytest.raises(ValueError):
        analyze_action(Matrix([[1, 0], [0, -1]]), theta)  # not invariant
    report = analyze_action(companion(cyclotomic(3)), theta)
    assert report.order == 3


def test_recognize_blocks():
    assert recognize_blocks(-Matrix.identity(3)) == (Cyclotomic(2),) * 3
    assert recognize_blocks(companion(cyclotomic(9))) == (Cyclotomic(9),)
    a = block_diag([companion(cyclotomic(3)), Matrix.identity(2)])
    assert recognize_blocks(a) == (Cyclotomic(3), Identity(2))
    assert recognize_blocks(realize((NegCyclotomic(5),))) == (NegCyclotomic(5),)
    assert recognize_blocks(Matrix([[0, 1], [1, 0]])) is None


def test_af_implies_at_and_k_presence():
    for d in range(1, 9):
        for n in range(2, 40):
            v = classify_cyclic(d, n)
            assert not (v.is_af_computed and not v.is_at), (d, n)
            assert (v.k is not None) == v.simple_action_exists, (d, n)
            assert v.divergence_flag == (v.is_af_computed != v.is_af_paper_predicate)
            # a positive gap leaves a torus factor with k1 >= 1, except for
            # n = 2 where the realization is the full flip with no residual
            if v.simple_action_exists and d - v.w > 1 and n != 2:
                assert not v.is_af_computed, (d, n)


def test_rotation_algebra_completeness():
    exists = {n for n in range(2, 101) if classify_cyclic(2, n).simple_action_exists}
    assert exists == {2, 3, 4, 6}


def test_odd_dimension_shift():
    for d in (5, 7, 9, 11):
        for n in range(2, 201):
            assert (
                classify_cyclic(d, n).simple_action_exists
                == classify_cyclic(d - 3, n).simple_action_exists
            ), (d, n)


def test_verdict_json_schema():
    keys = {
        "d", "input", "realizable", "simple_action", "reason", "order",
        "blocks", "k0", "k1", "AT", "AF_computed", "AF_paper", "divergence",
    }
    for v in [classify_cyclic(2, 6), classify_cyclic(3, 3), classify_cyclic(2, 5)]:
        payload = verdict_json(v)
        assert set(payload) == keys
        encoded = json.dumps(payload)
        assert json.loads(encoded) == payload
    payload = verdict_json(classify_cyclic(2, 6))
    assert payload["k1"] == {"kind": "exact", "value": 0}
    assert payload["order"] == 6 and payload["blocks"] == ["negC3"]
    payload = verdict_json(classify_cyclic(2, 5))
    assert payload["order"] == 0 and payload["blocks"] == [] and payload["k0"] is None


def test_report_json_roundtrip():
    payload = report_json(analyze_action(-Matrix.identity(2)))
    assert json.loads(json.dumps(payload)) == payload
    assert payload["free_outside_origin"] is True


def test_gap_one_pairs_match_formula():
    for d in range(1, 8):
        for n in range(2, 60):
            v = classify_cyclic(d, n)
            should_gap = w_order(n) <= d and d - w_order(n) == 1
            assert (v.reason == GAP_ONE) == should_gap, (d, n)
