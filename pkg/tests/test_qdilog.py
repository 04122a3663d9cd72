from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qseries_oracle import expand, partitions_max_part, paths
from simplexeq import qdilog as qd
from simplexeq.errors import (ConvergenceStalled, DuplicateLeg, FloorExceeded, LegOutOfRange,
                              WindowExceeded)
from simplexeq.qdilog import (S, S_INV, SBAR_QEXP, QParams, SeriesVector, apply_S, apply_word,
                              check_inverse, check_kcap_invariance, check_q_relation,
                              heisenberg_commutation, number_op, shift_op)

N = 12
ROOMY = QParams(guard=24)


def test_qexp_shift_rule():
    v = apply_S(SeriesVector.basis((3, 5)), (0, 1), SBAR_QEXP)
    assert set(v.terms) == {(3, 2)}
    assert v.coefficient((3, 2)) == 1


def test_s_on_vacuum_matches_closed_form():
    v = apply_S(SeriesVector.basis((0, 0)), (0, 1), S)
    assert v.tail
    for k in range(6):
        c = v.coefficient((k, 0))
        shift = k * (k + 1) // 2
        p = partitions_max_part(k, N)
        # (-1)^k q^{k(k+1)/2} / (q;q)_k
        for e in range(0, N + 1):
            expected = (-1) ** k * p[e - shift] if e >= shift else 0
            assert c[e] == expected, (k, e)
    assert v.coefficient((1, 0))[1] == -1 and v.coefficient((1, 0))[2] == -1


def oracle_region(word, state, variant, params=ROOMY):
    """Weight, budget and the oracle expansion on the compared region."""
    steps = qd.compile_word(word, variant)
    weight = qd.reach_weight([steps], len(state))
    explicit = [({"S": S, "Sb": variant}.get(t, t), legs) for t, legs in word]
    base = next(paths(explicit, state, 0))[0]  # every index zero
    budget = sum(a * b for a, b in zip(weight, base)) + params.window

    def inside(s):
        return (all(abs(x) <= params.window for x in s)
                and sum(a * b for a, b in zip(weight, s)) <= budget)
    orc = {s: c for s, c in expand(explicit, state, N, 14).items() if inside(s) and c}
    return weight, budget, orc


CASES = [
    ("ss1", 0, (0, 0, 0), S_INV), ("ss1", 1, (0, 0, 0), S_INV),
    ("ss1", 0, (2, -1, -1), S_INV), ("ss1", 1, (1, 0, 0), S_INV),
    ("ss2", 0, (1, 0, 0), S_INV), ("ss2", 1, (0, 1, -1), S_INV),
    ("ss2", 0, (1, 0, 0), SBAR_QEXP),
    ("ss3", 0, (1, 0, -1, 2), SBAR_QEXP), ("ss3", 1, (1, 0, -1, 2), SBAR_QEXP),
]


@pytest.mark.parametrize("relation,side,state,variant", CASES)
def test_words_match_brute_force_oracle(relation, side, state, variant):
    word = qd.Q_RELATIONS[relation][side]
    weight, budget, orc = oracle_region(word, state, variant)
    got = apply_word(word, state, variant, ROOMY, weight, budget)
    for s in set(orc) | set(got.terms):
        c = got.coefficient(s)
        assert c.trunc >= N
        expected = orc.get(s, {})
        for e in range(min([0, c.valuation] + list(expected)), N + 1):
            assert c[e] == expected.get(e, 0), (s, e)


def test_oracle_sides_agree_for_ss1_vacuum():
    lhs, rhs, _ = qd.Q_RELATIONS["ss1"]
    _, _, a = oracle_region(lhs, (0, 0, 0), S_INV)
    _, _, b = oracle_region(rhs, (0, 0, 0), S_INV)
    assert a == b


def test_inverse_pair_on_basis_state():
    word = [(S_INV, (1, 2)), (S, (1, 2))]
    v = apply_word(word, (1, 2), S_INV, ROOMY)
    for s, c in v.terms.items():
        expected = 1 if s == (1, 2) else 0
        assert c.trunc >= N and all(c[e] == (expected if e == 0 else 0)
                                    for e in range(c.valuation if c.coeffs else 0, N + 1))
    assert check_inverse().passed


@pytest.mark.parametrize("variant", [S_INV, SBAR_QEXP])
def test_pentagon_and_ten_term(variant):
    for relation in ("ss1", "ss2"):
        rep = check_q_relation(relation, variant)
        assert rep.passed and rep.details["verified_order"] >= N
    states = [(0, 0, 0, 0), (1, 0, -1, 2), (0, -1, 1, 0)]
    rep = check_q_relation("ss3", variant, states)
    assert rep.passed and rep.samples == 3


def test_spec_ten_term_example_at_order_ten():
    rep = check_q_relation("ss3", SBAR_QEXP, [(1, 0, -1, 2)], QParams(order=10))
    assert rep.passed and rep.details["verified_order"] >= 10


def test_degenerate_w_fails_at_low_order():
    rep = check_q_relation("ss1", S_INV, [(0, 0, 0)], QParams(w_offset=0))
    assert not rep.passed
    assert rep.counterexample["exponent"] <= 1


@pytest.mark.parametrize("corrupt", [(1, 0), (2, 3), (3, 5), (1, 12)])
def test_single_coefficient_corruption_is_detected(corrupt):
    params = QParams(corrupt=corrupt)
    assert not check_q_relation("ss1", S_INV, params=params).passed
    rep = check_inverse(params=params)
    assert not rep.passed and "state" in rep.counterexample


def test_rational_specialization():
    rep = check_q_relation("ss1", S_INV, [(0, 0, 0), (1, 0, 0)], evaluate_at=Fraction(1, 2))
    assert rep.passed


def test_kcap_doubling_changes_nothing():
    assert check_kcap_invariance("ss1", S_INV, [(0, 0, 0), (2, -1, -1)]).passed
    assert check_kcap_invariance("ss3", SBAR_QEXP, [(1, 0, -1, 2)]).passed


@settings(max_examples=15)
@given(st.integers(2, N), st.sampled_from(qd.DEFAULT_STATES[3]))
def test_truncation_order_monotonicity(lower, state):
    word = qd.Q_RELATIONS["ss1"][0]
    high = apply_word(word, state, S_INV, ROOMY)
    low = apply_word(word, state, S_INV, replace(ROOMY, order=lower))
    for s in set(low.terms) | set(high.terms):
        a, b = low.coefficient(s), high.coefficient(s)
        top = min(lower, a.trunc)
        assert all(a[e] == b[e] for e in range(min(a.valuation, b.valuation, 0), top + 1))


def test_heisenberg_commutation():
    assert heisenberg_commutation(8) is None
    assert number_op({3: Fraction(2), 0: Fraction(5)}) == {3: 6}
    assert shift_op({3: 1}, -1, 8) == {2: 1}
    with pytest.raises(WindowExceeded):
        shift_op({8: 1}, 1, 8)


def test_window_is_enforced():
    with pytest.raises(WindowExceeded):
        SeriesVector.basis((9, 0))
    with pytest.raises(WindowExceeded):
        apply_S(SeriesVector.basis((8, -8)), (0, 1), SBAR_QEXP)
    with pytest.raises(WindowExceeded):
        check_q_relation("ss1", S_INV, [(0, 0, 9)])


def test_floor_is_enforced():
    with pytest.raises(FloorExceeded):
        apply_S(SeriesVector.basis((0, 6)), (0, 1), S, QParams(floor=-3))


def test_kcap_is_enforced():
    with pytest.raises(ConvergenceStalled):
        apply_word(qd.Q_RELATIONS["ss1"][0], (0, 0, 0), S_INV, QParams(kcap=2))


def test_leg_errors():
    v = SeriesVector.basis((0, 0, 0))
    with pytest.raises(DuplicateLeg):
        apply_S(v, (1, 1))
    with pytest.raises(LegOutOfRange):
        apply_S(v, (0, 3))


def test_standalone_application_refuses_tail_input():
    v = apply_S(SeriesVector.basis((0, 0)), (0, 1), S)
    with pytest.raises(ValueError):
        apply_S(v, (0, 1), S)
    # a pure shift has no series to pull the tail down
    assert apply_S(v, (0, 1), SBAR_QEXP).tail


def test_report_records_budget():
    rep = check_q_relation("ss1", S_INV, [(0, 0, 0)])
    assert rep.backend == "qseries:N=12,W=8,F=-40,K=24"
    assert rep.details["states"] == [[0, 0, 0]]
