from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from simplexeq.birational import (example1_maps, group_solution, register_example1,
                                  register_example2)
from simplexeq.groups import cyclic
from simplexeq.hopf import builtin, canonical_pair
from simplexeq.pointmaps import field_coords, sampled_equal
from simplexeq.relations import (EQUATIONS, FSE, MatrixBackend, SolutionPair, build_B,
                                 build_R, check_co_system, check_equation, check_FSE,
                                 check_intertwining, check_pentagon, check_TE, check_ten_term,
                                 symmetry_transform)
from simplexeq.scalars import PrimeField
from simplexeq.tensor import TensorOp, embed, op_mul, permutation_P


def odouble(name):
    h = builtin(name)
    s, sb = canonical_pair(h)
    return SolutionPair(f"odouble:{name}", s, sb, MatrixBackend(h.dim))


def identity_pair(dim=2):
    one = TensorOp.identity(dim, 2)
    return SolutionPair("identity", one, one, MatrixBackend(dim))


def pentagon_system(sol):
    return [check_pentagon(sol, "ss1"), check_pentagon(sol, "ss2"), check_ten_term(sol)]


@pytest.fixture(scope="module")
def z2():
    return odouble("Z2")


@pytest.fixture(scope="module")
def z3():
    return odouble("Z3")


def test_z2_pentagon_pair(z2):
    rep = check_pentagon(z2)
    assert rep.passed and rep.samples == 8 and rep.backend == "matrix:n=2"
    assert check_pentagon(z2, "ss2").passed


def test_identity_pair_passes_everything():
    sol = identity_pair()
    assert all(r.passed for r in pentagon_system(sol))
    assert check_co_system(sol).passed


def test_corrupted_entry_fails_with_counterexample(z2):
    (row, col), v = min(z2.S.entries.items())
    bad = replace(z2, S=z2.S.with_entry(row, col, 2 * v))
    rep = check_pentagon(bad)
    assert not rep.passed
    assert {"column", "lhs", "rhs"} <= set(rep.counterexample)


def test_z3_ten_term_and_co(z3):
    assert check_ten_term(z3).passed
    assert check_co_system(z3).passed


def test_example1_intertwining_over_prime_field():
    sol = register_example1()
    rep = check_intertwining(sol)
    assert rep.passed
    assert rep.details == {"st1a": "pass", "st1b": "pass", "st2": "pass"}


def test_corrupted_tbar_fails():
    sol = register_example1()
    T, _, _, _ = example1_maps()
    rep = check_intertwining(replace(sol, Tbar=T))
    assert not rep.passed and rep.counterexample["subequation"] in ("st1b", "st2")


def test_group_solution_with_t_equal_s():
    sol = group_solution(cyclic(3))
    sol = replace(sol, T=sol.S, Tbar=sol.Sbar)
    rep = check_equation(EQUATIONS["st1a"], sol.elements(), sol.backend)
    assert rep.passed


def test_missing_element_is_skipped():
    sol = group_solution(cyclic(2))
    rep = check_equation(EQUATIONS["st2"], sol.elements(), sol.backend)
    assert rep.status == "skipped"


def test_build_R_identity_pair_is_swap_on_legs_23():
    r = build_R(identity_pair(3))
    assert r == embed(permutation_P(3), (2, 3), 3)


def test_build_R_z2_is_generalized_permutation(z2):
    r = build_R(z2)
    assert r.arity == 3 and r.size == 8 and r.is_generalized_permutation()
    expected = op_mul(op_mul(embed(z2.Sbar, (1, 3), 3), embed(permutation_P(2), (2, 3), 3)),
                      embed(z2.S, (1, 3), 3))
    assert r == expected


def test_tetrahedron_from_z2(z2):
    rep = check_TE(build_R(z2))
    assert rep.passed and rep.samples == 64


def test_tetrahedron_identity():
    assert check_TE(build_R(identity_pair())).passed


def test_tetrahedron_from_example1_t():
    sol = register_example1()
    rep = check_TE(build_R(sol, "from_T"), sol.backend)
    assert rep.passed and rep.samples == 200


def test_four_simplex_identity():
    sol = identity_pair()
    b = build_B(sol)
    p = permutation_P(2)
    assert b == op_mul(embed(p, (1, 2), 4), embed(p, (3, 4), 4))
    assert check_FSE(b).passed


def test_four_simplex_z2(z2):
    rep = check_FSE(build_B(z2))
    assert rep.passed and rep.samples == 1024


def test_four_simplex_example2_pointmaps():
    sol = register_example2(samples=100)
    rep = check_FSE(build_B(sol), sol.backend)
    assert rep.passed and rep.samples == 100


def test_four_simplex_labels_are_zero_based():
    assert FSE.base == 0 and {leg for _, legs in FSE.lhs for leg in legs} == set(range(10))


@pytest.mark.parametrize("which", ["swap", "invert"])
def test_symmetries_are_involutions_on_matrices(z3, which):
    twice = symmetry_transform(symmetry_transform(z3, which), which)
    assert twice.S == z3.S and twice.Sbar == z3.Sbar


@pytest.mark.parametrize("which", ["swap", "invert"])
def test_symmetries_are_involutions_on_pointmaps(which):
    sol = register_example1()
    twice = symmetry_transform(symmetry_transform(sol, which), which)
    coords = field_coords(PrimeField())
    for a, b in ((twice.S, sol.S), (twice.Sbar, sol.Sbar)):
        assert sampled_equal(a, b, coords, 100).passed


def test_swap_image_of_z2_passes(z2):
    sw = symmetry_transform(z2, "swap")
    assert check_pentagon(sw).passed and check_ten_term(sw).passed


@pytest.mark.parametrize("make", [lambda: odouble("Z2"), lambda: odouble("Z3"),
                                  lambda: odouble("H4"), lambda: group_solution(cyclic(3)),
                                  lambda: register_example1(samples=100),
                                  lambda: register_example2(samples=100)])
def test_closure_under_symmetries(make):
    sol = make()
    assert all(r.passed for r in pentagon_system(sol))
    for which in ("swap", "invert"):
        assert all(r.passed for r in pentagon_system(symmetry_transform(sol, which))), which


@pytest.mark.parametrize("make", [lambda: register_example1(samples=100),
                                  lambda: replace(group_solution(cyclic(3)),
                                                  T=group_solution(cyclic(3)).S,
                                                  Tbar=group_solution(cyclic(3)).Sbar)])
def test_intertwining_implies_pentagon_system(make):
    sol = make()
    assert check_intertwining(sol).passed
    assert all(r.passed for r in pentagon_system(sol))


@pytest.mark.parametrize("name", ["Z2", "Z3", "H4"])
def test_pentagon_system_implies_te(name):
    sol = odouble(name)
    assert all(r.passed for r in pentagon_system(sol))
    assert check_TE(build_R(sol)).passed


def test_pentagon_system_implies_fse(z2):
    assert all(r.passed for r in pentagon_system(z2))
    assert check_FSE(build_B(z2)).passed


def test_co_system_implies_ten_term_for_odoubles():
    for name in ("Z2", "Z3", "S3", "H4"):
        sol = odouble(name)
        assert check_co_system(sol).passed
        assert check_ten_term(sol).passed


@settings(max_examples=25)
@given(st.data())
def test_single_entry_corruption_is_detected(data):
    sol = odouble("Z2")
    target = data.draw(st.sampled_from(["S", "Sbar"]))
    op = getattr(sol, target)
    row = data.draw(st.tuples(st.integers(0, 1), st.integers(0, 1)))
    col = data.draw(st.tuples(st.integers(0, 1), st.integers(0, 1)))
    old = op.entries.get((row, col), Fraction(0))
    new = data.draw(st.integers(-3, 3).map(Fraction).filter(lambda v: v != old))
    bad = replace(sol, **{target: op.with_entry(row, col, new)})
    reports = pentagon_system(bad) + [check_co_system(bad)]
    assert any(not r.passed for r in reports)
    for r in reports:
        if not r.passed:
            assert r.counterexample is not None
