"""Quantum-dilogarithm pentagon solution in a shift representation.

States are integer label tuples ``|n_1, ..., n_L>``.  On one leg ``H|n> = n|n>``
and ``q^Lambda|n> = |n+1>``, so ``q^{Lambda} H q^{-Lambda} = H - 1``.  On a leg
pair ``(i, j)`` with labels ``(m, n)``:

* ``q^{H (x) Lambda} |m, n> = |m, n + m>`` (no q factor),
* ``w = -q^Lambda (x) q^{-H} q^{-Lambda}`` acts as ``w|m, n> = -q^{1-n} |m+1, n-1>``,
  hence ``w^k |m, n> = (-1)^k q^{k(1-n) + k(k-1)/2} |m+k, n-k>``.

The pentagon element is ``S = q^{H (x) Lambda} (w; q)_inf^{-1}`` with
``(w; q)_inf^{-1} = sum_k w^k / (q;q)_k`` and
``(w; q)_inf = sum_k (-1)^k q^{k(k-1)/2} w^k / (q;q)_k``.

Coefficients are :class:`TruncLaurent` series kept to a working order
``order + guard``.  Later factors can multiply by negative powers of q, which
lowers the order a coefficient is known to; that loss is tracked, never
guessed.  :func:`check_q_relation` reports the order up to which both sides
are known and agree, and raises the guard when truncation alone falls short.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import ConvergenceStalled, DuplicateLeg, FloorExceeded, LegOutOfRange, WindowExceeded
from .laurent import TruncLaurent, inv_qq_pochhammer
from .report import FAIL, PASS, RelationReport

S, S_INV, SBAR_QEXP = "S", "S_inv", "Sbar_qexp"
EXACT = 1 << 30  # order of a vector whose absent states are exactly zero
SBAR_VARIANTS = (S_INV, SBAR_QEXP)


@dataclass(frozen=True)
class QParams:
    """Truncation budget.

    ``w_offset`` is the constant in the w exponent ``q^{w_offset - n}``; the
    correct representation has 1, the negative control uses 0.  ``corrupt``
    is ``(k, e)``: add one to the q^e coefficient of ``1/(q;q)_k`` wherever the
    inverse Pochhammer expansion uses it.
    """

    order: int = 12
    window: int = 8
    floor: int = -40
    kcap: int = 24
    guard: int = 6
    w_offset: int = 1
    corrupt: tuple | None = None

    @property
    def working(self) -> int:
        return self.order + self.guard


class SeriesVector:
    """Finite combination of states with truncated Laurent coefficients.

    A state that is absent has coefficient zero up to ``order``.  A vector with
    ``tail`` set came out of a standalone :func:`apply_S`: infinitely many
    further states carry coefficients O(q^(order+1)), so composing another
    operator onto it could pull those below the order; that is refused.
    """

    __slots__ = ("terms", "order", "legs", "tail")

    def __init__(self, terms: dict, order: int, legs: int, tail: bool = False):
        self.terms = {s: c for s, c in terms.items() if not (c.is_zero() and c.trunc >= order)}
        self.order = order
        self.legs = legs
        self.tail = tail

    @classmethod
    def basis(cls, state, params: QParams = QParams()) -> "SeriesVector":
        state = tuple(int(x) for x in state)
        _check_window(state, params.window)
        return cls({state: TruncLaurent.one(params.working)}, params.working, len(state))

    def coefficient(self, state) -> TruncLaurent:
        return self.terms.get(tuple(state), TruncLaurent.zero(self.order))

    def restrict(self, window: int) -> "SeriesVector":
        """Only the states inside [-window, window]."""
        return SeriesVector({s: c for s, c in self.terms.items()
                             if all(-window <= x <= window for x in s)},
                            self.order, self.legs, self.tail)

    def truncate(self, order: int) -> "SeriesVector":
        return SeriesVector({s: c.truncate(order) for s, c in self.terms.items()},
                            min(order, self.order), self.legs, self.tail)

    def known_order(self) -> int:
        return min([self.order] + [c.trunc for c in self.terms.values()])

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        body = ", ".join(f"{list(s)}: {c!r}" for s, c in sorted(self.terms.items()))
        return f"SeriesVector({{{body}}}, order={self.order})"


def _check_window(state, window):
    for x in state:
        if not -window <= x <= window:
            raise WindowExceeded(f"state {list(state)} leaves the window [-{window}, {window}]")


def _check_legs(legs, n):
    i, j = legs
    if i == j:
        raise DuplicateLeg(f"legs {legs} repeat")
    for leg in legs:
        if not 0 <= leg < n:
            raise LegOutOfRange(f"leg {leg} outside 0..{n - 1}")


def _accumulate(out: dict, state, coeff: TruncLaurent):
    prev = out.get(state)
    out[state] = coeff if prev is None else prev + coeff


def _dot(z, x):
    return sum(a * b for a, b in zip(z, x))


@dataclass(frozen=True)
class _Step:
    kind: str  # "poch" or "shear"
    i: int
    j: int
    sign: int = 1  # shear direction
    direct: bool = False  # (w;q)_inf rather than its reciprocal


def _steps_for(variant: str, i: int, j: int) -> list:
    if variant == S:
        return [_Step("poch", i, j), _Step("shear", i, j, +1)]
    if variant == S_INV:
        return [_Step("shear", i, j, -1), _Step("poch", i, j, direct=True)]
    if variant == SBAR_QEXP:
        return [_Step("shear", i, j, -1)]
    raise ValueError(f"unknown variant {variant!r}")


def _shear(v: SeriesVector, step: _Step, params: QParams, reach=None,
           check_window: bool = True) -> SeriesVector:
    """q^{+-H (x) Lambda} on legs (i, j)."""
    out = {}
    for state, c in v.terms.items():
        new = list(state)
        new[step.j] += step.sign * state[step.i]
        new = tuple(new)
        if reach is not None and _dot(reach[0], new) > reach[1]:
            continue
        if check_window:
            _check_window(new, params.window)
        _accumulate(out, new, c)
    return SeriesVector(out, v.order, v.legs, v.tail)


def _pochhammer_factor(k: int, rel: int, params: QParams) -> TruncLaurent:
    p = inv_qq_pochhammer(k, rel)
    if params.corrupt is not None and params.corrupt[0] == k and params.corrupt[1] <= rel:
        p = p + TruncLaurent.monomial(params.corrupt[1], 1, rel)
    return p


def _pochhammer(v: SeriesVector, step: _Step, params: QParams, reach=None) -> SeriesVector:
    """(w; q)_inf (``direct``) or its reciprocal on legs (i, j).

    Term k carries ``q^{e_k}`` with ``e_k = k(c - n) + k(k-1)/2`` (plus another
    ``k(k-1)/2`` for the direct product), ``c = params.w_offset``.

    Without ``reach`` the sum stops once the terms are above the working order
    and rising (the increments ``e_{k+1} - e_k`` grow with k); the dropped
    terms land on infinitely many states, so the result has a tail.

    With ``reach = (z, bound)`` a term at state x is dropped exactly when
    ``z . x > bound``: no later step can bring it into the compared region.
    Each term moves ``z . x`` up by a fixed positive amount, so the sum is
    finite; terms above the working order are kept as zeros known to that
    order, because later shifts may lower the order they are known to.
    """
    top = params.working
    extra = 1 if step.direct else 0
    i, j = step.i, step.j
    out = {}
    for state, c in v.terms.items():
        m, n = state[i], state[j]
        v_c = c.valuation
        k = 0
        e = 0
        while True:
            lead = v_c + e
            inc = params.w_offset - n + k * (1 + extra)
            new = list(state)
            new[i] = m + k
            new[j] = n - k
            new = tuple(new)
            if reach is None:
                if lead > top and inc >= 0:
                    break
            elif _dot(reach[0], new) > reach[1]:
                break
            if k > params.kcap:
                raise ConvergenceStalled(
                    f"k-cap {params.kcap} reached at state {list(state)} (term at q^{lead})")
            if lead <= top:
                if lead < params.floor:
                    raise FloorExceeded(f"q^{lead} below floor q^{params.floor} at state {list(state)}")
                if reach is None:
                    _check_window(new, params.window)
                term = c.shift(e) * _pochhammer_factor(k, top - lead, params)
                if not step.direct and k % 2:
                    term = -term
                _accumulate(out, new, term.truncate(top))
            elif reach is not None:
                _accumulate(out, new, TruncLaurent.zero(min(top, c.trunc + e)))
            e += inc
            k += 1
    if reach is None:
        return SeriesVector(out, min(v.order, top), v.legs, True)
    return SeriesVector(out, v.order, v.legs, v.tail)


def apply_S(v: SeriesVector, legs, variant: str = S, params: QParams = QParams()) -> SeriesVector:
    """Apply S, S^-1 or q^{-H (x) Lambda} on the 0-based leg pair ``legs``.

    Every listed coefficient is known to its own truncation order; states not
    listed are O(q^(order+1)).  Products of several factors go through
    :func:`apply_word`, which keeps that guarantee across the whole word.
    """
    i, j = legs
    _check_legs((i, j), v.legs)
    steps = _steps_for(variant, i, j)
    if v.tail and any(s.kind == "poch" for s in steps):
        raise ValueError("input has an unlisted tail; compose operators with apply_word")
    for step in steps:
        v = _pochhammer(v, step, params) if step.kind == "poch" else _shear(v, step, params)
    return v


# --------------------------------------------------------------------------
# words


def compile_word(word, sbar_variant: str) -> list:
    """Primitive steps, in application order, for a word of ``(tag, legs)``.

    Tags are ``"S"`` and ``"Sb"`` (or an explicit variant name); legs are
    1-based and the rightmost factor acts first.
    """
    steps = []
    for tag, legs in reversed(word):
        variant = {"S": S, "Sb": sbar_variant}.get(tag, tag)
        steps += _steps_for(variant, legs[0] - 1, legs[1] - 1)
    return steps


def _shear_matrix(step: _Step, n: int):
    out = [[int(r == c) for c in range(n)] for r in range(n)]
    out[step.j][step.i] += step.sign
    return out


def _row_times(z, mat):
    return tuple(sum(z[r] * mat[r][c] for r in range(len(mat))) for c in range(len(mat)))


def _tails(steps, n: int) -> list:
    """Per step t, the linear map L_t of all shears after t."""
    tails = []
    lin = [[int(r == c) for c in range(n)] for r in range(n)]
    for step in reversed(steps):
        tails.append([row[:] for row in lin])
        if step.kind == "shear":
            sh = _shear_matrix(step, n)
            lin = [[sum(lin[r][k] * sh[k][c] for k in range(n)) for c in range(n)]
                   for r in range(n)]
    tails.reverse()
    return tails, lin


def _columns(steps, tails, n):
    return [tuple(lin_t[r][step.i] - lin_t[r][step.j] for r in range(n))
            for step, lin_t in zip(steps, tails) if step.kind == "poch"]


def reach_weight(step_lists, n: int, search: int = 3):
    """Smallest integer y with ``y . col > 0`` for every series step of every word.

    ``col`` is how one unit of that step's summation index moves the final
    state, so ``y . final`` only grows along any path.  ``None`` if no y with
    entries in [-search, search] works.
    """
    columns = []
    for steps in step_lists:
        columns += _columns(steps, _tails(steps, n)[0], n)
    for y in sorted(itertools.product(range(-search, search + 1), repeat=n),
                    key=lambda y: (sum(map(abs, y)), y)):
        if any(y) and all(_dot(y, col) > 0 for col in columns):
            return y
    return None


def apply_word(word, state, sbar_variant: str = S_INV, params: QParams = QParams(),
               weight=None, budget=None) -> SeriesVector:
    """Apply an operator word to a basis state, exactly on a bounded region.

    The region is the window box cut by ``weight . out <= budget``; by default
    ``budget`` is ``weight`` at the k = 0 image plus the window size.  Along a
    path ``weight . (state pushed through the remaining shears)`` never
    decreases, so a path is pruned as soon as it exceeds the budget and every
    state in the region gets all of its contributions.
    """
    v = SeriesVector.basis(state, params)
    v = SeriesVector(v.terms, EXACT, v.legs)
    steps = compile_word(word, sbar_variant)
    tails, total = _tails(steps, v.legs)
    if weight is None:
        weight = reach_weight([steps], v.legs)
        if weight is None:
            raise ValueError("no weight bounds this word's summation indices")
    if budget is None:
        budget = _dot(weight, _apply_lin(total, v.terms)) + params.window
    rows = [_row_times(weight, lin_t) for lin_t in tails]
    for step, z in zip(steps, rows):
        reach = (z, budget)
        if step.kind == "poch":
            v = _pochhammer(v, step, params, reach)
        else:
            v = _shear(v, step, params, reach, check_window=False)
    kept = {s: c for s, c in v.terms.items()
            if all(-params.window <= x <= params.window for x in s) and _dot(weight, s) <= budget}
    return SeriesVector(kept, EXACT, v.legs)


def _apply_lin(lin, terms):
    (state,) = terms
    return tuple(sum(lin[r][c] * state[c] for c in range(len(state))) for r in range(len(state)))


# --------------------------------------------------------------------------
# relations


def _w(spec):
    return tuple((tag, tuple(int(c) for c in legs)) for tag, legs in spec)


Q_RELATIONS = {
    "ss1": (_w([("S", "12"), ("S", "13"), ("S", "23")]), _w([("S", "23"), ("S", "12")]), 3),
    "ss2": (_w([("Sb", "23"), ("Sb", "13"), ("Sb", "12")]), _w([("Sb", "12"), ("Sb", "23")]), 3),
    "ss3": (_w([("Sb", "12"), ("S", "13"), ("Sb", "14"), ("S", "24"), ("Sb", "34")]),
            _w([("S", "24"), ("Sb", "34"), ("S", "14"), ("Sb", "12"), ("S", "13")]), 4),
}

DEFAULT_STATES = {
    3: [(0, 0, 0), (1, 0, 0), (0, 1, -1), (1, -1, 0), (-1, 0, 1), (2, -1, -1)],
    4: [(0, 0, 0, 0), (1, 0, -1, 2), (1, 0, 0, -1), (0, -1, 1, 0), (-1, 1, 0, 0), (1, 1, -1, -1)],
}


def compare_vectors(a: SeriesVector, b: SeriesVector, order: int):
    """Verified order of ``a == b`` and the first mismatch, if any.

    Every state present on either side is compared up to the order both
    coefficients are known, capped at ``order``.
    """
    verified = order
    for state in sorted(set(a.terms) | set(b.terms)):
        ca, cb = a.coefficient(state), b.coefficient(state)
        diff = ca.first_difference(cb)
        if diff is not None and diff <= order:
            return diff - 1, {"state": list(state), "exponent": diff,
                              "lhs": str(ca[diff]), "rhs": str(cb[diff])}
        verified = min(verified, ca.trunc, cb.trunc)
    return verified, None


def _compare_at(a: SeriesVector, b: SeriesVector, order: int, q: Fraction):
    for state in sorted(set(a.terms) | set(b.terms)):
        va = a.coefficient(state).truncate(order).evaluate(q)
        vb = b.coefficient(state).truncate(order).evaluate(q)
        if va != vb:
            return {"state": list(state), "q": str(q), "lhs": str(va), "rhs": str(vb)}
    return None


MAX_GUARD = 96


def compare_words(lhs, rhs, state, sbar_variant: str, params: QParams, evaluate_at=None):
    """Verified order and mismatch for one input state.

    When the sides agree but are only known below ``params.order`` (negative
    shifts ate the precision), the guard grows by the shortfall and the state
    is recomputed, up to ``MAX_GUARD``.
    """
    n = len(state)
    steps = [compile_word(w, sbar_variant) for w in (lhs, rhs)]
    weight = reach_weight(steps, n)
    if weight is None:
        raise ValueError("no weight bounds the summation indices of both sides")
    images = [_dot(weight, _apply_lin(_tails(st, n)[1], {tuple(state): None})) for st in steps]
    budget = max(images) + params.window
    while True:
        a = apply_word(lhs, state, sbar_variant, params, weight, budget)
        b = apply_word(rhs, state, sbar_variant, params, weight, budget)
        got, cx = compare_vectors(a, b, params.order)
        if cx is not None or got >= params.order or params.guard >= MAX_GUARD:
            break
        params = replace(params, guard=min(MAX_GUARD, params.guard + params.order - got))
    if cx is None and evaluate_at is not None:
        cx = _compare_at(a, b, min(got, params.order), Fraction(evaluate_at))
    return got, cx, params.guard


def _backend_label(params: QParams) -> str:
    return f"qseries:N={params.order},W={params.window},F={params.floor},K={params.kcap}"


def _run_states(name, equation, pairs, states, sbar_variant, params, evaluate_at=None):
    t0 = time.perf_counter()
    verified = params.order
    guards = []
    for idx, state in enumerate(states):
        for lhs, rhs in pairs:
            got, cx, guard = compare_words(lhs, rhs, state, sbar_variant, params, evaluate_at)
            guards.append(guard)
            if cx is not None:
                cx["input"] = list(state)
                return RelationReport(name, equation, _backend_label(params), FAIL, idx + 1, 0, cx,
                                      (time.perf_counter() - t0) * 1e3,
                                      {"verified_order": max(got, -1)})
            verified = min(verified, got)
    status = PASS if verified >= params.order else FAIL
    cx = None if status == PASS else {"reason": f"known only to q^{verified}"}
    return RelationReport(name, equation, _backend_label(params), status, len(states), 0, cx,
                          (time.perf_counter() - t0) * 1e3,
                          {"verified_order": verified, "max_guard": max(guards, default=0),
                           "states": [list(s) for s in states]})


def check_q_relation(relation: str, sbar_variant: str = S_INV, states=None,
                     params: QParams = QParams(), evaluate_at=None) -> RelationReport:
    """Compare both sides of ss1/ss2/ss3 on each input state to order ``params.order``.

    Every output state in the window box is compared coefficient by
    coefficient.  With ``evaluate_at`` (a rational q) the coefficients, cut at
    the verified order, are also evaluated there and compared exactly.
    """
    lhs, rhs, n_legs = Q_RELATIONS[relation]
    if sbar_variant not in SBAR_VARIANTS:
        raise ValueError(f"unknown Sbar variant {sbar_variant!r}")
    states = [tuple(s) for s in (states or DEFAULT_STATES[n_legs])]
    for state in states:
        if len(state) != n_legs:
            raise ValueError(f"{relation} needs {n_legs}-leg states, got {list(state)}")
        _check_window(state, params.window)
    return _run_states(f"qdilog:{relation}[{sbar_variant}]", relation, [(lhs, rhs)], states,
                       sbar_variant, params, evaluate_at)


INVERSE_STATES = [(0, 0), (1, 2), (-1, 1), (2, -1), (0, -2), (1, 0)]


def check_inverse(states=None, params: QParams = QParams()) -> RelationReport:
    """S S^-1 = S^-1 S = id on two-leg basis states, to order ``params.order``."""
    states = [tuple(s) for s in (states or INVERSE_STATES)]
    one = ()
    pairs = [(_w([(S, "12"), (S_INV, "12")]), one), (_w([(S_INV, "12"), (S, "12")]), one)]
    return _run_states("qdilog:inverse", "S*S^-1=id", pairs, states, S_INV, params)


def check_kcap_invariance(relation: str, sbar_variant: str, states=None,
                          params: QParams = QParams()) -> RelationReport:
    """Doubling the k-cap must leave every output coefficient unchanged."""
    lhs, rhs, n_legs = Q_RELATIONS[relation]
    states = [tuple(s) for s in (states or DEFAULT_STATES[n_legs])]
    doubled = replace(params, kcap=2 * params.kcap)
    t0 = time.perf_counter()
    name = f"qdilog:{relation}[{sbar_variant}]:kcap"
    for state, side in itertools.product(states, (lhs, rhs)):
        a = apply_word(side, state, sbar_variant, params)
        b = apply_word(side, state, sbar_variant, doubled)
        same = set(a.terms) == set(b.terms) and all(
            a.terms[s].trunc == b.terms[s].trunc and a.terms[s] == b.terms[s] for s in a.terms)
        if not same:
            _, cx = compare_vectors(a, b, params.working)
            cx = cx or {"reason": "support or truncation changed"}
            cx["input"] = list(state)
            return RelationReport(name, "kcap", _backend_label(params), FAIL, len(states), 0, cx,
                                  (time.perf_counter() - t0) * 1e3)
    return RelationReport(name, "kcap", _backend_label(params), PASS, len(states), 0, None,
                          (time.perf_counter() - t0) * 1e3)


# --------------------------------------------------------------------------
# one-leg Heisenberg operators


def number_op(vec: dict) -> dict:
    """H|n> = n|n> on a one-leg vector {label: coefficient}."""
    return {n: n * c for n, c in vec.items() if n * c != 0}


def shift_op(vec: dict, power: int, window: int) -> dict:
    """q^{power Lambda}|n> = |n + power>."""
    out = {n + power: c for n, c in vec.items()}
    for n in out:
        _check_window((n,), window)
    return out


def heisenberg_commutation(window: int):
    """Check q^Lambda H q^-Lambda = H - 1 on every state of [-window, window].

    Returns the first failing label, or ``None``.  States at the lower edge
    are skipped because q^-Lambda would leave the window.
    """
    for n in range(-window + 1, window + 1):
        ket = {n: Fraction(1)}
        lhs = shift_op(number_op(shift_op(ket, -1, window)), 1, window)
        rhs = {m: c - ket[m] for m, c in number_op(ket).items()} if n else {n: Fraction(-1)}
        rhs = {m: c for m, c in rhs.items() if c != 0}
        if lhs != rhs:
            return n
    return None
