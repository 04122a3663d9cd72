"""Checkers for the pentagon, ten-term, tetrahedron and four-simplex relations.

Each relation is an :class:`EquationWord`: two operator words over element
tags placed on legs.  A backend turns a word into something comparable:

* :class:`MatrixBackend` applies both words to every basis column of
  V^{(x) N} through sparse leg-local actions, never forming the big matrices;
* :class:`PointMapBackend` composes the words into point maps on M^N and
  compares them at sampled (or, for finite M, all) points.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .pointmaps import (CoordSet, PointMap, as_operator_product, exhaustive_equal,
                        invert, sampled_equal, swap_map)
from .report import FAIL, PASS, RelationReport, merge_reports
from .tensor import TensorOp, apply_on_legs, embed, op_inv, op_mul, permutation_P

S, SB, T, TB, P, R, B = "S", "Sb", "T", "Tb", "P", "R", "B"


@dataclass(frozen=True)
class EquationWord:
    name: str
    lhs: tuple
    rhs: tuple
    n_legs: int
    base: int = 1

    def tags(self) -> set:
        return {t for t, _ in self.lhs + self.rhs}


def _w(*factors):
    return tuple((tag, tuple(int(c) for c in legs)) for tag, legs in factors)


SS1 = EquationWord("ss1", _w((S, "12"), (S, "13"), (S, "23")), _w((S, "23"), (S, "12")), 3)
SS2 = EquationWord("ss2", _w((SB, "23"), (SB, "13"), (SB, "12")), _w((SB, "12"), (SB, "23")), 3)
SS3 = EquationWord("ss3",
                   _w((SB, "12"), (S, "13"), (SB, "14"), (S, "24"), (SB, "34")),
                   _w((S, "24"), (SB, "34"), (S, "14"), (SB, "12"), (S, "13")), 4)
CO1 = EquationWord("co1", _w((S, "13"), (SB, "23")), _w((SB, "23"), (S, "13")), 3)
CO2 = EquationWord("co2", _w((S, "12"), (SB, "13"), (SB, "23")), _w((SB, "23"), (S, "12")), 3)
CO3 = EquationWord("co3", _w((S, "23"), (S, "13"), (SB, "12")), _w((SB, "12"), (S, "23")), 3)
ST1A = EquationWord("st1a", _w((S, "12"), (T, "13"), (T, "23")), _w((T, "23"), (T, "12")), 3)
ST1B = EquationWord("st1b", _w((TB, "23"), (TB, "13"), (SB, "12")), _w((TB, "12"), (TB, "23")), 3)
ST2 = EquationWord("st2",
                   _w((SB, "12"), (T, "13"), (TB, "14"), (T, "24"), (TB, "34")),
                   _w((T, "24"), (TB, "34"), (T, "14"), (TB, "12"), (S, "13")), 4)
TET = EquationWord("tet",
                   _w((R, "123"), (R, "145"), (R, "246"), (R, "356")),
                   _w((R, "356"), (R, "246"), (R, "145"), (R, "123")), 6)
FSE = EquationWord("4sim",
                   _w((B, "0123"), (B, "0456"), (B, "1478"), (B, "2579"), (B, "3689")),
                   _w((B, "3689"), (B, "2579"), (B, "1478"), (B, "0456"), (B, "0123")), 10, base=0)

EQUATIONS = {e.name: e for e in (SS1, SS2, SS3, CO1, CO2, CO3, ST1A, ST1B, ST2, TET, FSE)}


# --------------------------------------------------------------------------
# backends


class MatrixBackend:
    kind = "matrix"

    def __init__(self, dim: int, one=Fraction(1)):
        self.dim = dim
        self.one = one

    @property
    def label(self):
        return f"matrix:n={self.dim}"

    def swap(self) -> TensorOp:
        return permutation_P(self.dim, self.one)

    def inverse(self, x: TensorOp) -> TensorOp:
        return op_inv(x)

    def compose(self, factors, n: int, base: int = 1) -> TensorOp:
        """Operator product of embedded factors, left to right."""
        out = TensorOp.identity(self.dim, n, self.one)
        for x, legs in factors:
            out = op_mul(out, embed(x, [leg - base + 1 for leg in legs], n))
        return out

    def apply_word(self, factors, n: int, base: int, column) -> dict:
        vec = {tuple(column): self.one}
        for x, legs in reversed(factors):
            vec = apply_on_legs(x, [leg - base for leg in legs], vec)
            if not vec:
                break
        return vec

    def compare(self, lhs, rhs, n: int, base: int = 1, name: str = "",
                equation: str = "") -> RelationReport:
        t0 = time.perf_counter()
        count = 0
        for col in itertools.product(range(self.dim), repeat=n):
            count += 1
            a = self.apply_word(lhs, n, base, col)
            b = self.apply_word(rhs, n, base, col)
            if a != b:
                cx = {"column": list(col),
                      "lhs": {str(list(k)): v for k, v in sorted(a.items())},
                      "rhs": {str(list(k)): v for k, v in sorted(b.items())}}
                return RelationReport(name, equation, self.label, FAIL, count, 0, cx,
                                      (time.perf_counter() - t0) * 1e3)
        return RelationReport(name, equation, self.label, PASS, count, 0, None,
                              (time.perf_counter() - t0) * 1e3)


class PointMapBackend:
    kind = "pointmap"

    def __init__(self, coords: CoordSet, samples: int = 200, seed: int = 0,
                 exhaustive_limit: int = 5000):
        self.coords = coords
        self.samples = samples
        self.seed = seed
        self.exhaustive_limit = exhaustive_limit

    @property
    def label(self):
        return f"pointmap:{self.coords.kind}"

    def swap(self) -> PointMap:
        return swap_map()

    def inverse(self, x: PointMap) -> PointMap:
        return invert(x)

    def compose(self, factors, n: int, base: int = 1) -> PointMap:
        return as_operator_product(factors, n, base)

    def compare(self, lhs, rhs, n: int, base: int = 1, name: str = "",
                equation: str = "") -> RelationReport:
        f = as_operator_product(lhs, n, base)
        g = as_operator_product(rhs, n, base)
        c = self.coords
        if c.finite and len(c.elements) ** n <= self.exhaustive_limit:
            rep = exhaustive_equal(f, g, c, name, equation)
        else:
            rep = sampled_equal(f, g, c, self.samples, self.seed, name, equation)
        rep.backend = self.label
        return rep


# --------------------------------------------------------------------------
# solutions


@dataclass
class SolutionPair:
    """S, Sbar (and optionally T, Tbar) on a common backend."""

    name: str
    S: object
    Sbar: object
    backend: object
    T: object = None
    Tbar: object = None
    meta: dict = field(default_factory=dict)

    def elements(self, **extra) -> dict:
        out = {S: self.S, SB: self.Sbar, T: self.T, TB: self.Tbar, P: self.backend.swap()}
        out.update(extra)
        return out


def check_equation(eq: EquationWord, elements: dict, backend, name: str = "") -> RelationReport:
    missing = sorted(t for t in eq.tags() if elements.get(t) is None)
    if missing:
        return RelationReport(name or eq.name, eq.name, backend.label, "skipped",
                              details={"missing": missing})
    lhs = [(elements[t], legs) for t, legs in eq.lhs]
    rhs = [(elements[t], legs) for t, legs in eq.rhs]
    return backend.compare(lhs, rhs, eq.n_legs, eq.base, name or eq.name, eq.name)


def check_pentagon(sol: SolutionPair, variant: str = "ss1") -> RelationReport:
    eq = {"ss1": SS1, "ss2": SS2}[variant]
    return check_equation(eq, sol.elements(), sol.backend, f"{sol.name}:{variant}")


def check_ten_term(sol: SolutionPair) -> RelationReport:
    return check_equation(SS3, sol.elements(), sol.backend, f"{sol.name}:ss3")


def check_co_system(sol: SolutionPair) -> RelationReport:
    els = sol.elements()
    parts = [check_equation(eq, els, sol.backend, f"{sol.name}:{eq.name}")
             for eq in (CO1, CO2, CO3)]
    return merge_reports(f"{sol.name}:co", "co", sol.backend.label, parts)


def check_intertwining(sol: SolutionPair) -> RelationReport:
    els = sol.elements()
    parts = [check_equation(eq, els, sol.backend, f"{sol.name}:{eq.name}")
             for eq in (ST1A, ST1B, ST2)]
    return merge_reports(f"{sol.name}:st", "st1+st2", sol.backend.label, parts)


def build_R(sol: SolutionPair, flavor: str = "from_S"):
    """R = Sbar_13 P_23 S_13 (or with T, Tbar for the ``from_T`` ansatz)."""
    if flavor == "from_S":
        a, abar = sol.S, sol.Sbar
    elif flavor == "from_T":
        a, abar = sol.T, sol.Tbar
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    if a is None or abar is None:
        raise ValueError(f"{sol.name} lacks the elements for {flavor}")
    p = sol.backend.swap()
    return sol.backend.compose([(abar, (1, 3)), (p, (2, 3)), (a, (1, 3))], 3)


def build_B(sol: SolutionPair):
    """B = Sbar_13 P_01 P_23 S_13 on legs labelled 0..3."""
    p = sol.backend.swap()
    return sol.backend.compose([(sol.Sbar, (1, 3)), (p, (0, 1)), (p, (2, 3)), (sol.S, (1, 3))],
                               4, base=0)


def _backend_for(x, backend):
    if backend is not None:
        return backend
    if isinstance(x, TensorOp):
        return MatrixBackend(x.dim)
    raise ValueError("point-map elements need an explicit backend")


def check_TE(Rel, backend=None, name: str = "tet") -> RelationReport:
    backend = _backend_for(Rel, backend)
    return check_equation(TET, {R: Rel}, backend, name)


def check_FSE(Bel, backend=None, name: str = "4sim") -> RelationReport:
    backend = _backend_for(Bel, backend)
    return check_equation(FSE, {B: Bel}, backend, name)


def symmetry_transform(sol: SolutionPair, which: str) -> SolutionPair:
    """``swap``: S_12 <-> Sbar_21; ``invert``: S_12 <-> (Sbar_12)^-1."""
    be = sol.backend
    if which == "swap":
        p = be.swap()

        def conj(x):
            return be.compose([(p, (1, 2)), (x, (1, 2)), (p, (1, 2))], 2)
        new_s, new_sb = conj(sol.Sbar), conj(sol.S)
    elif which == "invert":
        new_s, new_sb = be.inverse(sol.Sbar), be.inverse(sol.S)
    else:
        raise ValueError(f"unknown symmetry {which!r}")
    return replace(sol, name=f"{sol.name}|{which}", S=new_s, Sbar=new_sb, T=None, Tbar=None)
