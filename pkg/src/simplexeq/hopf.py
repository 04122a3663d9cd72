"""Finite-dimensional Hopf algebras and their O-doubles.

Structure constants use the index layout

    m[i][j][k]   = m^k_{ij}     e_i e_j = m^k_{ij} e_k
    mu[i][j][k]  = mu_i^{jk}    Delta(e_i) = mu_i^{jk} e_j (x) e_k
    unit[i]      = eps^i        1 = eps^i e_i
    counit[i]    = eps_i        eps(e_i) = eps_i
    antipode[i][j] = gamma_i^j  gamma(e_i) = gamma_i^j e_j

The O-double X*XX* has generators e^i (left multiplications on X*), e_j
(right derivations) and ~e^k (antipode-twisted right multiplications).  Words
in them are brought to the normal order e^i e_j ~e^k by rewriting.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path

from .errors import AxiomViolation, RepresentationMismatch
from .groups import Group
from .report import FAIL, PASS, RelationReport
from .scalars import Mat, format_rational, parse_rational
from .tensor import TensorOp

ZERO = Fraction(0)
ONE = Fraction(1)


def _freeze(a):
    if isinstance(a, (list, tuple)):
        return tuple(_freeze(x) for x in a)
    return Fraction(a)


@dataclass(frozen=True)
class HopfData:
    dim: int
    m: tuple
    mu: tuple
    unit: tuple
    counit: tuple
    antipode: tuple
    name: str = ""

    def __post_init__(self):
        n = self.dim
        for attr in ("m", "mu", "unit", "counit", "antipode"):
            object.__setattr__(self, attr, _freeze(getattr(self, attr)))
        shapes = {"m": (n, n, n), "mu": (n, n, n), "unit": (n,), "counit": (n,),
                  "antipode": (n, n)}
        for attr, shape in shapes.items():
            if _shape(getattr(self, attr)) != shape:
                raise ValueError(f"{attr} must have shape {shape}")

    # sparse views -------------------------------------------------------

    @cached_property
    def m_nz(self) -> dict:
        """(i, j) -> [(k, m^k_ij)]"""
        return {(i, j): [(k, v) for k, v in enumerate(self.m[i][j]) if v]
                for i in range(self.dim) for j in range(self.dim)}

    @cached_property
    def mu_nz(self) -> dict:
        """i -> [(j, k, mu_i^jk)]"""
        return {i: [(j, k, self.mu[i][j][k]) for j in range(self.dim)
                    for k in range(self.dim) if self.mu[i][j][k]]
                for i in range(self.dim)}

    @cached_property
    def dual_product(self) -> dict:
        """(i, j) -> [(k, mu_k^ij)]: the product e^i e^j in X*."""
        out = {(i, j): [] for i in range(self.dim) for j in range(self.dim)}
        for k in range(self.dim):
            for i, j, v in self.mu_nz[k]:
                out[(i, j)].append((k, v))
        return out

    # serialization ------------------------------------------------------

    def to_json(self) -> dict:
        def enc(a):
            return [enc(x) for x in a] if isinstance(a, tuple) else format_rational(a)
        return {"dim": self.dim, "m": enc(self.m), "mu": enc(self.mu), "unit": enc(self.unit),
                "counit": enc(self.counit), "antipode": enc(self.antipode)}

    @classmethod
    def from_json(cls, d: dict, name: str = "") -> "HopfData":
        allowed = {"dim", "m", "mu", "unit", "counit", "antipode", "name"}
        unknown = set(d) - allowed
        if unknown:
            raise ValueError(f"unknown keys in structure-constant file: {sorted(unknown)}")

        def dec(a):
            return tuple(dec(x) for x in a) if isinstance(a, list) else parse_rational(a)
        return cls(int(d["dim"]), dec(d["m"]), dec(d["mu"]), dec(d["unit"]), dec(d["counit"]),
                   dec(d["antipode"]), d.get("name", name))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def load(cls, path) -> "HopfData":
        path = Path(path)
        return cls.from_json(json.loads(path.read_text()), name=path.stem)

    def save(self, path):
        Path(path).write_text(self.dumps() + "\n")


def _shape(a):
    shape = []
    while isinstance(a, tuple):
        shape.append(len(a))
        if not a:
            break
        a = a[0]
    return tuple(shape)


def _zeros(*shape):
    if len(shape) == 1:
        return [ZERO] * shape[0]
    return [_zeros(*shape[1:]) for _ in range(shape[0])]


def group_algebra(g: Group) -> HopfData:
    """k[G]: group-like basis, Delta(g) = g (x) g, gamma(g) = g^-1."""
    n = g.order
    m = _zeros(n, n, n)
    mu = _zeros(n, n, n)
    antipode = _zeros(n, n)
    for i in range(n):
        mu[i][i][i] = ONE
        antipode[i][g.inv(i)] = ONE
        for j in range(n):
            m[i][j][g.mul(i, j)] = ONE
    unit = [ONE if i == g.identity else ZERO for i in range(n)]
    counit = [ONE] * n
    return HopfData(n, m, mu, unit, counit, antipode, f"k[{g.name}]")


def trivial_hopf() -> HopfData:
    return HopfData(1, [[[1]]], [[[1]]], [1], [1], [[1]], "k")


def sweedler() -> HopfData:
    """Sweedler's 4-dimensional Hopf algebra, constants computed from its presentation.

    Generators g, x with g^2 = 1, x^2 = 0, xg = -gx; Delta(g) = g (x) g,
    Delta(x) = x (x) 1 + g (x) x.  Basis g^a x^b in the order 1, g, x, gx.
    Neither commutative nor cocommutative, and its antipode has order 4.
    """
    basis = [(0, 0), (1, 0), (0, 1), (1, 1)]
    index = {b: i for i, b in enumerate(basis)}
    n = 4

    def mono_mul(u, v):
        (a, b), (c, d) = u, v
        if b + d > 1:
            return {}
        return {index[((a + c) % 2, b + d)]: Fraction((-1) ** (b * c))}

    m = _zeros(n, n, n)
    for i, u in enumerate(basis):
        for j, v in enumerate(basis):
            for k, c in mono_mul(u, v).items():
                m[i][j][k] = c

    def vec_mul(x, y):
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in mono_mul(basis[i], basis[j]).items():
                    out[k] = out.get(k, ZERO) + a * b * c
        return out

    def tens_mul(x, y):
        out = {}
        for (i, j), a in x.items():
            for (k, l), b in y.items():
                for p, c in vec_mul({i: ONE}, {k: ONE}).items():
                    for q, d in vec_mul({j: ONE}, {l: ONE}).items():
                        out[(p, q)] = out.get((p, q), ZERO) + a * b * c * d
        return {k: v for k, v in out.items() if v}

    one, g, x = index[(0, 0)], index[(1, 0)], index[(0, 1)]
    delta_g = {(g, g): ONE}
    delta_x = {(x, one): ONE, (g, x): ONE}
    mu = _zeros(n, n, n)
    for i, (a, b) in enumerate(basis):
        d = {(one, one): ONE}
        for _ in range(a):
            d = tens_mul(d, delta_g)
        for _ in range(b):
            d = tens_mul(d, delta_x)
        for (j, k), v in d.items():
            mu[i][j][k] = v
    counit = [ONE if b == 0 else ZERO for _, b in basis]
    unit = [ONE, ZERO, ZERO, ZERO]
    # gamma is an algebra anti-map: gamma(g^a x^b) = gamma(x)^b gamma(g)^a
    gamma_g = {g: ONE}
    gamma_x = {index[(1, 1)]: -ONE}
    antipode = _zeros(n, n)
    for i, (a, b) in enumerate(basis):
        v = {one: ONE}
        for _ in range(b):
            v = vec_mul(v, gamma_x)
        for _ in range(a):
            v = vec_mul(v, gamma_g)
        for j, c in v.items():
            antipode[i][j] = c
    return HopfData(n, m, mu, unit, counit, antipode, "H4")


def dual_hopf(h: HopfData) -> HopfData:
    """X* in the dual basis: transpose every structure tensor."""
    n = h.dim
    r = range(n)
    m = [[[h.mu[k][i][j] for k in r] for j in r] for i in r]
    mu = [[[h.m[j][k][i] for k in r] for j in r] for i in r]
    antipode = [[h.antipode[j][i] for j in r] for i in r]
    name = h.name[:-1] if h.name.endswith("*") else (h.name + "*" if h.name else "")
    return HopfData(n, m, mu, list(h.counit), list(h.unit), antipode, name)


# --------------------------------------------------------------------------
# axioms


def _hopf_axioms(h: HopfData):
    """Yield (axiom name, predicate over index tuples, index ranges)."""
    n = h.dim
    r = range(n)
    m, mu, unit, counit, gam = h.m, h.mu, h.unit, h.counit, h.antipode
    m_nz, mu_nz = h.m_nz, h.mu_nz

    def assoc(i, j, k):
        lhs = [ZERO] * n
        for l, v in m_nz[(i, j)]:
            for t, w in m_nz[(l, k)]:
                lhs[t] += v * w
        rhs = [ZERO] * n
        for l, v in m_nz[(j, k)]:
            for t, w in m_nz[(i, l)]:
                rhs[t] += v * w
        return lhs == rhs

    def unit_law(i):
        left = [sum((unit[a] * m[a][i][k] for a in r), ZERO) for k in r]
        right = [sum((unit[a] * m[i][a][k] for a in r), ZERO) for k in r]
        basis = [ONE if k == i else ZERO for k in r]
        return left == basis == right

    def coassoc(i):
        lhs, rhs = {}, {}
        for l, c, v in mu_nz[i]:
            for a, b, w in mu_nz[l]:
                lhs[(a, b, c)] = lhs.get((a, b, c), ZERO) + v * w
        for a, l, v in mu_nz[i]:
            for b, c, w in mu_nz[l]:
                rhs[(a, b, c)] = rhs.get((a, b, c), ZERO) + v * w
        return {k: v for k, v in lhs.items() if v} == {k: v for k, v in rhs.items() if v}

    def counit_law(i):
        left = [sum((counit[j] * mu[i][j][k] for j in r), ZERO) for k in r]
        right = [sum((counit[k] * mu[i][j][k] for k in r), ZERO) for j in r]
        basis = [ONE if k == i else ZERO for k in r]
        return left == basis == right

    def coproduct_multiplicative(i, j):
        lhs = {}
        for k, v in m_nz[(i, j)]:
            for a, b, w in mu_nz[k]:
                lhs[(a, b)] = lhs.get((a, b), ZERO) + v * w
        rhs = {}
        for p, q, v in mu_nz[i]:
            for s, t, w in mu_nz[j]:
                for a, x in m_nz[(p, s)]:
                    for b, y in m_nz[(q, t)]:
                        rhs[(a, b)] = rhs.get((a, b), ZERO) + v * w * x * y
        return {k: v for k, v in lhs.items() if v} == {k: v for k, v in rhs.items() if v}

    def counit_multiplicative(i, j):
        return sum((v * counit[k] for k, v in m_nz[(i, j)]), ZERO) == counit[i] * counit[j]

    def coproduct_of_unit():
        lhs = [[sum((unit[i] * mu[i][a][b] for i in r), ZERO) for b in r] for a in r]
        return lhs == [[unit[a] * unit[b] for b in r] for a in r]

    def counit_of_unit():
        return sum((unit[i] * counit[i] for i in r), ZERO) == ONE

    def antipode_left(i):
        # m (gamma (x) id) Delta (e_i) = eps(e_i) 1
        out = [ZERO] * n
        for j, k, v in mu_nz[i]:
            for l in r:
                if gam[j][l]:
                    for t, w in m_nz[(l, k)]:
                        out[t] += v * gam[j][l] * w
        return out == [counit[i] * unit[t] for t in r]

    def antipode_right(i):
        out = [ZERO] * n
        for j, k, v in mu_nz[i]:
            for l in r:
                if gam[k][l]:
                    for t, w in m_nz[(j, l)]:
                        out[t] += v * gam[k][l] * w
        return out == [counit[i] * unit[t] for t in r]

    yield "associativity", assoc, 3
    yield "unit", unit_law, 1
    yield "coassociativity", coassoc, 1
    yield "counit", counit_law, 1
    yield "coproduct-multiplicative", coproduct_multiplicative, 2
    yield "counit-multiplicative", counit_multiplicative, 2
    yield "coproduct-of-unit", coproduct_of_unit, 0
    yield "counit-of-unit", counit_of_unit, 0
    yield "antipode-left", antipode_left, 1
    yield "antipode-right", antipode_right, 1


def validate_hopf(h: HopfData, strict: bool = False) -> RelationReport:
    """Check every Hopf axiom exactly on all basis index tuples.

    The report's ``details`` maps each axiom to pass/fail.  With ``strict``
    the first violation raises :class:`AxiomViolation` instead.
    """
    t0 = time.perf_counter()
    details = {}
    first = None
    checked = 0
    for axiom, pred, arity in _hopf_axioms(h):
        bad = None
        for idx in itertools.product(range(h.dim), repeat=arity):
            checked += 1
            if not pred(*idx):
                bad = idx
                break
        details[axiom] = PASS if bad is None else FAIL
        if bad is not None:
            if strict:
                raise AxiomViolation(axiom, bad)
            if first is None:
                first = {"axiom": axiom, "indices": list(bad)}
    status = FAIL if first else PASS
    return RelationReport(f"hopf-axioms:{h.name}", "hopf-axioms", "exact", status, checked, 0,
                          first, (time.perf_counter() - t0) * 1e3, details)


# --------------------------------------------------------------------------
# abstract O-double: normal-form rewriting

UP, LO, TL = "u", "l", "t"  # e^i, e_j, ~e^k


class ODouble:
    """Rewriting engine for X*XX* with normal order e^i e_j ~e^k.

    A normal word is a dict ``{(a, b, c): coefficient}`` where each slot is a
    basis index or ``None`` when that species is absent.
    """

    def __init__(self, h: HopfData):
        self.h = h
        n = h.dim
        # e_i e^j = sum m^j_kl mu_i^lm e^k e_m
        self.lo_up = {}
        for i in range(n):
            for j in range(n):
                acc = {}
                for l, mm, w in h.mu_nz[i]:
                    for k in range(n):
                        v = h.m[k][l][j]
                        if v:
                            acc[(k, mm)] = acc.get((k, mm), ZERO) + v * w
                self.lo_up[(i, j)] = [(k, mm, v) for (k, mm), v in sorted(acc.items()) if v]
        # ~e^i e_j = sum mu_j^kl m^i_lm e_k ~e^m
        self.tl_lo = {}
        for i in range(n):
            for j in range(n):
                acc = {}
                for k, l, w in h.mu_nz[j]:
                    for mm in range(n):
                        v = h.m[l][mm][i]
                        if v:
                            acc[(k, mm)] = acc.get((k, mm), ZERO) + v * w
                self.tl_lo[(i, j)] = [(k, mm, v) for (k, mm), v in sorted(acc.items()) if v]

    @staticmethod
    def one() -> dict:
        return {(None, None, None): ONE}

    def _up_mul(self, a, k):
        """e^a e^k as [(r, coef)]"""
        if a is None:
            return [(k, ONE)]
        return self.h.dual_product[(a, k)]

    def _lo_mul(self, b, k):
        if b is None:
            return [(k, ONE)]
        return self.h.m_nz[(b, k)]

    def mul_generator(self, x: dict, gen) -> dict:
        species, idx = gen
        out = {}

        def add(key, v):
            out[key] = out.get(key, ZERO) + v

        for (a, b, c), coef in x.items():
            if species == TL:
                for r, v in self._up_mul(c, idx):
                    add((a, b, r), coef * v)
            elif species == UP:
                # ~e^c commutes with e^idx; then e_b e^idx reorders
                moved = [(idx, b, ONE)] if b is None else self.lo_up[(b, idx)]
                for k, mm, v in moved:
                    for r, w in self._up_mul(a, k):
                        add((r, mm, c), coef * v * w)
            elif species == LO:
                moved = [(idx, c, ONE)] if c is None else self.tl_lo[(c, idx)]
                for k, mm, v in moved:
                    for r, w in self._lo_mul(b, k):
                        add((a, r, mm), coef * v * w)
            else:
                raise ValueError(f"unknown generator species {species!r}")
        return {k: v for k, v in out.items() if v}

    def normal_form(self, word) -> dict:
        x = self.one()
        for gen in word:
            x = self.mul_generator(x, gen)
        return x

    @staticmethod
    def monomial_word(key) -> list:
        a, b, c = key
        return [g for g in ((UP, a), (LO, b), (TL, c)) if g[1] is not None]

    def mul(self, x: dict, y: dict) -> dict:
        out = {}
        for key, coef in y.items():
            part = x
            for gen in self.monomial_word(key):
                part = self.mul_generator(part, gen)
            for k, v in part.items():
                out[k] = out.get(k, ZERO) + coef * v
        return {k: v for k, v in out.items() if v}


def odouble_normal_form(word, h: HopfData) -> dict:
    return ODouble(h).normal_form(word)


# --------------------------------------------------------------------------
# representation on X*


@dataclass
class ODoubleRep:
    """Matrices of e^i, e_j, ~e^k acting on X* in the dual basis (column vectors)."""

    h: HopfData
    upper: list
    lower: list
    tilde: list
    variant: str

    def matrix(self, gen) -> Mat:
        species, i = gen
        return {UP: self.upper, LO: self.lower, TL: self.tilde}[species][i]

    def identity(self) -> Mat:
        return Mat.scalar(ONE, self.h.dim, ZERO)

    def word_matrix(self, word) -> Mat:
        out = self.identity()
        for gen in word:
            out = out * self.matrix(gen)
        return out

    def normal_word_matrix(self, x: dict) -> Mat:
        n = self.h.dim
        out = Mat.scalar(ZERO, n, ZERO)
        for key, coef in x.items():
            out = out + self.word_matrix(ODouble.monomial_word(key)) * coef
        return out


def _lin(mats, coeffs, n):
    out = Mat.scalar(ZERO, n, ZERO)
    for mat, c in zip(mats, coeffs):
        if c:
            out = out + mat * c
    return out


def _rep_matrices(h: HopfData, variant: str):
    n = h.dim
    r = range(n)
    # L_{e^i}: e^j -> e^i e^j = mu_k^{ij} e^k
    upper = [Mat([[h.mu[k][i][j] for j in r] for k in r]) for i in r]
    # R*_{e_j}: <R*_x f, y> = <f, y x>, so e^a -> sum_b m^a_{bj} e^b
    lower = [Mat([[h.m[b][j][a] for a in r] for b in r]) for j in r]
    # R_{e^c}: e^a -> e^a e^c = mu_k^{ac} e^k
    right = [Mat([[h.mu[k][a][c] for a in r] for k in r]) for c in r]
    # antipode of X* is the transpose of gamma: gamma*(e^i) = gamma_j^i e^j
    g_dual = Mat([[h.antipode[j][i] for i in r] for j in r])
    twist = g_dual.inverse() if variant == "gamma^-1" else g_dual
    tilde = [_lin(right, [twist.rows[c][i] for c in r], n) for i in r]
    return upper, lower, tilde


def dub_relations(rep: ODoubleRep):
    """Yield (relation, indices) for every violated defining relation."""
    h = rep.h
    n = h.dim
    L, D, T = rep.upper, rep.lower, rep.tilde
    od = ODouble(h)
    for i, j in itertools.product(range(n), repeat=2):
        prod_up = _lin([L[k] for k, _ in h.dual_product[(i, j)]],
                       [v for _, v in h.dual_product[(i, j)]], n)
        if L[i] * L[j] != prod_up:
            yield "e^i e^j = mu_k^ij e^k", (i, j)
        prod_lo = _lin([D[k] for k, _ in h.m_nz[(i, j)]], [v for _, v in h.m_nz[(i, j)]], n)
        if D[i] * D[j] != prod_lo:
            yield "e_i e_j = m^k_ij e_k", (i, j)
        prod_tl = _lin([T[k] for k, _ in h.dual_product[(i, j)]],
                       [v for _, v in h.dual_product[(i, j)]], n)
        if T[i] * T[j] != prod_tl:
            yield "~e^i ~e^j = mu_k^ij ~e^k", (i, j)
        rhs = Mat.scalar(ZERO, n, ZERO)
        for k, mm, v in od.lo_up[(i, j)]:
            rhs = rhs + L[k] * D[mm] * v
        if D[i] * L[j] != rhs:
            yield "e_i e^j = m^j_kl mu_i^lm e^k e_m", (i, j)
        rhs = Mat.scalar(ZERO, n, ZERO)
        for k, mm, v in od.tl_lo[(i, j)]:
            rhs = rhs + D[k] * T[mm] * v
        if T[i] * D[j] != rhs:
            yield "~e^i e_j = mu_j^kl m^i_lm e_k ~e^m", (i, j)
        if L[i] * T[j] != T[j] * L[i]:
            yield "e^i ~e^j = ~e^j e^i", (i, j)


VARIANTS = ("gamma^-1", "gamma")


def represent_on_dual(h: HopfData) -> ODoubleRep:
    """Operator representation of X*XX* on X*.

    The twist of the right multiplications is pinned by the defining
    relations, not by convention: the gamma^-1 variant is tried first, then
    gamma, and the first one satisfying every relation is returned.
    """
    failures = {}
    for variant in VARIANTS:
        upper, lower, tilde = _rep_matrices(h, variant)
        rep = ODoubleRep(h, upper, lower, tilde, variant)
        bad = next(dub_relations(rep), None)
        if bad is None:
            return rep
        failures[variant] = bad
    relation, idx = failures[VARIANTS[0]]
    raise RepresentationMismatch(relation, idx)


def canonical_pair(h: HopfData, rep: ODoubleRep | None = None):
    """S = sum_i rho(e_i) (x) rho(e^i) and Sbar = sum_i rho(e_i) (x) rho(~e^i)."""
    rep = rep or represent_on_dual(h)
    n = h.dim

    def tensor(left, right):
        entries = {}
        for i in range(n):
            a, b = left[i].rows, right[i].rows
            for r1, c1 in itertools.product(range(n), repeat=2):
                x = a[r1][c1]
                if not x:
                    continue
                for r2, c2 in itertools.product(range(n), repeat=2):
                    y = b[r2][c2]
                    if y:
                        key = ((r1, r2), (c1, c2))
                        entries[key] = entries.get(key, ZERO) + x * y
        return TensorOp(n, 2, entries)

    return tensor(rep.lower, rep.upper), tensor(rep.lower, rep.tilde)


def builtin(name: str) -> HopfData:
    """Hopf data by registry name: Z<n>, S<k> group algebras, their duals as <G>*, or k."""
    from .groups import by_name

    if name == "k":
        return trivial_hopf()
    if name in ("H4", "H4*"):
        return sweedler() if name == "H4" else dual_hopf(sweedler())
    if name.endswith("*"):
        return dual_hopf(group_algebra(by_name(name[:-1])))
    return group_algebra(by_name(name))
