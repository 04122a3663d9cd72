"""Acceptance criteria, one test each.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line per
criterion.
"""

import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from simplexeq import qdilog as qd
from simplexeq.birational import (check_m_system, interval_structure, register_example1,
                                  register_example2, ring_eps_structure, w_identity_check)
from simplexeq.cli import SuiteConfig, dumps_report, exit_code, run_suite
from simplexeq.groups import by_name
from simplexeq.hopf import builtin, canonical_pair
from simplexeq.pointmaps import PointMap, group_coords, to_tensor_op
from simplexeq.relations import (MatrixBackend, SolutionPair, build_B, build_R,
                                 check_co_system, check_FSE, check_intertwining, check_pentagon,
                                 check_TE, check_ten_term)

N = 12


@contextmanager
def criterion(number, title, limit_s=None):
    t0 = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - t0
        if limit_s is not None:
            assert elapsed < limit_s, f"took {elapsed:.1f} s, limit {limit_s} s"
    except BaseException as exc:
        elapsed = time.perf_counter() - t0
        print(f"\n[criterion {number}] FAIL  {title} ({elapsed:.1f} s): {exc}")
        raise
    print(f"\n[criterion {number}] PASS  {title} ({elapsed:.1f} s)")


def odouble(name):
    h = builtin(name)
    s, sb = canonical_pair(h)
    return SolutionPair(name, s, sb, MatrixBackend(h.dim))


def assert_all(reports):
    for r in reports:
        assert r.status == "pass", (r.name, r.counterexample)


def test_criterion_1_odouble_pentagon_system():
    with criterion(1, "O-double ss1/ss2/co/ss3 exact for Z2, Z3, S3", 30):
        for name in ("Z2", "Z3", "S3"):
            sol = odouble(name)
            reps = [check_pentagon(sol, "ss1"), check_pentagon(sol, "ss2"),
                    check_co_system(sol), check_ten_term(sol)]
            assert_all(reps)
            n = sol.backend.dim
            assert reps[0].samples == n ** 3 and reps[3].samples == n ** 4


def test_criterion_2_tetrahedron():
    with criterion(2, "TE from Z2 and Z3 O-doubles (64 and 729 columns)", 60):
        for name, cols in (("Z2", 64), ("Z3", 729)):
            rep = check_TE(build_R(odouble(name)))
            assert_all([rep])
            assert rep.samples == cols


def test_criterion_3_four_simplex():
    with criterion(3, "FSE from Z2 O-double (1024 columns)", 300):
        rep = check_FSE(build_B(odouble("Z2")))
        assert_all([rep])
        assert rep.samples == 1024


def test_criterion_4_birational():
    with criterion(4, "Examples 1, 2 and ring solutions, 200 samples each", 60):
        ex1 = register_example1(samples=200)
        reps = [check_intertwining(ex1), check_pentagon(ex1, "ss1"), check_pentagon(ex1, "ss2"),
                check_ten_term(ex1), check_TE(build_R(ex1), ex1.backend),
                check_TE(build_R(ex1, "from_T"), ex1.backend)]
        ex2 = register_example2(samples=200)
        reps += [check_pentagon(ex2, "ss1"), check_pentagon(ex2, "ss2"), check_ten_term(ex2),
                 check_FSE(build_B(ex2), ex2.backend)]
        for eps in (1, -1):
            for carrier in ("rational", "prime", "matrix2"):
                rep = check_m_system(ring_eps_structure(eps, carrier), samples=200)
                assert rep.samples == 3 * 200
                reps.append(rep)
        assert_all(reps)
        for r in reps:
            per_equation = r.samples // max(1, len(r.details))
            assert per_equation >= 200, r.name
            assert r.retries < 0.2 * r.samples, (r.name, r.retries)


def test_criterion_5_interval_family():
    with criterion(5, "interval family m-system and w-identity"):
        # 2 and 3 stay rational on perfect powers; 1/2 takes square roots
        cases = [(0, True), (1, True), (2, True), (3, True),
                 (Fraction(1, 2), False), (0.5, False), (2.0, False)]
        for alpha, exact in cases:
            d = interval_structure(alpha)
            assert d.coords.exact == exact
            rep = check_m_system(d, samples=200)
            assert_all([rep])
            assert rep.samples >= 200
            assert_all([w_identity_check(alpha, samples=200)])


def test_criterion_6_qdilog():
    with criterion(6, "q-dilog ss1/ss2/ss3 to q^12, both Sbar, k-cap, inverse", 120):
        reps = []
        for variant in qd.SBAR_VARIANTS:
            for relation in ("ss1", "ss2", "ss3"):
                rep = qd.check_q_relation(relation, variant)
                assert rep.samples >= 5 and rep.details["verified_order"] >= N
                reps.append(rep)
                reps.append(qd.check_kcap_invariance(relation, variant))
        inv = qd.check_inverse()
        assert inv.details["verified_order"] >= N
        assert_all(reps + [inv])


def test_criterion_7_cross_backend():
    with criterion(7, "Z2/Z3 canonical S equals group point-map matrix"):
        for name in ("Z2", "Z3"):
            g = by_name(name)
            s, _ = canonical_pair(builtin(name))
            point = PointMap(2, lambda p, g=g: (g.mul(p[0], p[1]), p[1]))
            assert s == to_tensor_op(point, group_coords(g))


# checks that cannot see the injected corruption, by construction
BLIND_TO_CORRUPTION = {
    "qdilog:S_inv:kcap": "compares two corrupted runs with each other",
    "qdilog:Sbar_qexp:kcap": "compares two corrupted runs with each other",
    "qdilog:Sbar_qexp:ss2": "q^{-H Lambda} has no series coefficient to corrupt",
}


def test_criterion_8_negative_controls():
    with criterion(8, "every checker detects corruption; corrupted suite exits 1"):
        report = run_suite(SuiteConfig(corrupt=True))
        assert exit_code(report) == 1
        for c in report["checks"]:
            if c["name"] in BLIND_TO_CORRUPTION:
                assert c["details"].get("corruption"), c["name"]
                continue
            assert c["status"] == "fail", c["name"]
            assert c["counterexample"], c["name"]
        # the series corruption itself is caught by ss1 and the inverse check
        assert {c["name"]: c["status"] for c in report["checks"]}["qdilog:S_inv:inverse"] == "fail"


@pytest.fixture(scope="module")
def full_runs():
    cfg = SuiteConfig(suite="paper-all", seed=0)
    return run_suite(cfg), run_suite(SuiteConfig(suite="paper-all", seed=0))


def strip_timing(report):
    return {**report, "checks": [{k: v for k, v in c.items() if k != "ms"}
                                 for c in report["checks"]]}


def test_criterion_9_determinism(full_runs):
    with criterion(9, "identical config and seed give identical reports modulo timing"):
        a, b = full_runs
        assert exit_code(a) == 0
        assert dumps_report(strip_timing(a)) == dumps_report(strip_timing(b))
