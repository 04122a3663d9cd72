import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from simplexeq.birational import example1_maps
from simplexeq.errors import DomainError, MissingInverseRule, RetryBudgetExhausted
from simplexeq.groups import by_name, cyclic
from simplexeq.pointmaps import (PointMap, as_operator_product, exhaustive_equal, field_coords,
                                 group_coords, identity_map, invert, sample_rng, sampled_equal,
                                 to_tensor_op)
from simplexeq.scalars import PrimeField, QQ

FP = PrimeField()
F7 = PrimeField(7)
PENTAGON_LHS = ((1, 2), (1, 3), (2, 3))
PENTAGON_RHS = ((2, 3), (1, 2))


def group_s(g):
    return PointMap(2, lambda p: (g.mul(p[0], p[1]), p[1]),
                    lambda p: (g.mul(p[0], g.inv(p[1])), p[1]), f"s[{g.name}]")


def word(f, legs_list, n=3):
    return as_operator_product([(f, legs) for legs in legs_list], n)


def test_z2_chain_example():
    s = group_s(cyclic(2))
    lhs, rhs = word(s, PENTAGON_LHS), word(s, PENTAGON_RHS)
    assert lhs((1, 1, 0)) == (0, 1, 0)
    assert rhs((1, 1, 0)) == (0, 1, 0)
    for p in itertools.product(range(2), repeat=3):
        assert lhs(p) == rhs(p)


@pytest.mark.parametrize("name", ["Z2", "Z3", "S3"])
def test_contravariant_words_agree_exhaustively(name):
    g = by_name(name)
    s = group_s(g)
    rep = exhaustive_equal(word(s, PENTAGON_LHS), word(s, PENTAGON_RHS), group_coords(g))
    assert rep.passed and rep.samples == g.order ** 3


def test_covariant_reading_fails_on_s3():
    # the same words evaluated right to left are not a pentagon pair on S3
    g = by_name("S3")
    s = group_s(g)
    rep = exhaustive_equal(word(s, PENTAGON_LHS[::-1]), word(s, PENTAGON_RHS[::-1]),
                           group_coords(g))
    assert not rep.passed


def test_identity_map():
    f = identity_map(3)
    assert f((1, 2, 3)) == (1, 2, 3)
    assert word(identity_map(2), PENTAGON_LHS)((4, 5, 6)) == (4, 5, 6)


def test_example1_t_values():
    T, Tbar, _, _ = example1_maps()
    assert T((Fraction(2), Fraction(3))) == (6, -3)
    assert Tbar((Fraction(6), Fraction(-3))) == (2, 3)


@pytest.mark.parametrize("index", [0, 2])
def test_example1_inverse_rules_compose_to_identity(index):
    f = example1_maps()[index]
    there_and_back = as_operator_product([(f, (1, 2)), (invert(f), (1, 2))], 2)
    back_and_there = as_operator_product([(invert(f), (1, 2)), (f, (1, 2))], 2)
    coords = field_coords(FP)
    assert sampled_equal(there_and_back, identity_map(2), coords, 100, seed=3).passed
    assert sampled_equal(back_and_there, identity_map(2), coords, 100, seed=4).passed


def test_example1_pentagon_over_prime_field():
    _, _, S, _ = example1_maps()
    rep = sampled_equal(word(S, PENTAGON_LHS), word(S, PENTAGON_RHS), field_coords(FP), 200)
    assert rep.passed and rep.samples == 200


def test_syntactically_equal_maps():
    f = PointMap(1, lambda p: (p[0] * p[0],))
    rep = sampled_equal(f, f, field_coords(F7), 50)
    assert rep.passed and rep.counterexample is None


def test_distinct_polynomials_give_witness():
    f = PointMap(1, lambda p: (p[0] * p[0],))
    g = PointMap(1, lambda p: (p[0],))
    rep = sampled_equal(f, g, field_coords(F7), 50)
    assert not rep.passed
    (x,) = rep.counterexample["point"]
    assert rep.counterexample["lhs"] == (x * x,) and x * x != x


def test_domain_error_and_retries():
    S = example1_maps()[2]
    with pytest.raises(DomainError):
        S((Fraction(1), Fraction(2)))
    # T's inverse is undefined on u + v = 0, hit often over F_7 (0 and 1 excluded)
    t_inv = invert(example1_maps()[0])
    rep = sampled_equal(t_inv, t_inv, field_coords(F7), 200, seed=0)
    assert rep.passed and rep.retries > 0


def test_retry_budget_exhausted():
    nowhere = PointMap(1, lambda p: 1 / (p[0] - p[0]))
    with pytest.raises(RetryBudgetExhausted):
        sampled_equal(nowhere, nowhere, field_coords(QQ), 5, max_retries=10)


def test_missing_inverse_rule():
    with pytest.raises(MissingInverseRule):
        invert(PointMap(1, lambda p: p))


def test_per_sample_streams_are_deterministic():
    assert sample_rng(5, 3).random() == sample_rng(5, 3).random()
    assert sample_rng(5, 3).random() != sample_rng(5, 4).random()


polys = st.lists(st.integers(0, 6), min_size=1, max_size=4)


def poly_map(cs):
    return PointMap(1, lambda p: (sum((c * p[0] ** i for i, c in enumerate(cs)), F7(0)),))


@given(polys, polys, st.integers(0, 10))
def test_sampled_equal_symmetric_and_reflexive(a, b, seed):
    f, g = poly_map(a), poly_map(b)
    coords = field_coords(F7)
    assert sampled_equal(f, f, coords, 20, seed).passed
    assert sampled_equal(f, g, coords, 20, seed).passed == sampled_equal(g, f, coords, 20,
                                                                        seed).passed


def test_matrix_form_of_group_solution():
    g = cyclic(3)
    op = to_tensor_op(group_s(g), group_coords(g))
    # entry at (row p, column s(p))
    assert op.is_generalized_permutation()
    for x, y in itertools.product(range(3), repeat=2):
        assert op.entries[((x, y), ((x + y) % 3, y))] == 1
