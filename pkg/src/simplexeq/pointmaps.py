"""Partial maps on Cartesian powers of a coordinate set.

An operator of the form ``(S phi)(p) = phi(s(p))`` is contravariant in its
underlying map: ``(S T phi)(p) = phi(t(s(p)))``.  So an operator word read left
to right is evaluated as a chain of maps applied left to right, ``s`` first.
Every composite built here follows that convention.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import DomainError, LegOutOfRange, DuplicateLeg, MissingInverseRule, RetryBudgetExhausted
from .report import FAIL, PASS, RelationReport
from .scalars import ApproxReal, MatrixRing, QQ
from .tensor import TensorOp

MAX_RETRIES = 50


# --------------------------------------------------------------------------
# coordinate sets


@dataclass
class CoordSet:
    """The set M a point map acts on, with a general-position sampler.

    ``sampler(rng)`` returns one element of M; ``elements`` lists M when it is
    finite (enabling exhaustive checks); ``exclude`` holds values the sampler
    skips because registered maps have ``1 - x`` style denominators.
    """

    kind: str
    sampler: Callable
    component_arity: int = 1
    elements: Optional[list] = None
    exact: bool = True
    description: str = ""

    def sample(self, rng):
        return self.sampler(rng)

    def sample_point(self, rng, n: int) -> tuple:
        return tuple(self.sampler(rng) for _ in range(n))

    @property
    def finite(self) -> bool:
        return self.elements is not None


def field_coords(ring, exclude=(0, 1)) -> CoordSet:
    kind = "rationals" if ring is QQ else "prime field"
    return CoordSet(kind, lambda rng: ring.random(rng, exclude=exclude),
                    description=getattr(ring, "name", str(ring)))


def pair_coords(ring, exclude=(0, 1)) -> CoordSet:
    def sample(rng):
        return (ring.random(rng, exclude=exclude), ring.random(rng, exclude=exclude))
    return CoordSet("coordinate pairs", sample, component_arity=2,
                    description=f"pairs over {getattr(ring, 'name', ring)}")


def matrix_coords(ring: MatrixRing, bound: int = 4) -> CoordSet:
    return CoordSet("matrix ring", lambda rng: ring.random(rng, bound=bound),
                    description=ring.name)


def group_coords(group) -> CoordSet:
    elems = list(range(group.order))
    return CoordSet("group elements", lambda rng: rng.choice(elems), elements=elems,
                    description=group.name)


def interval_rational_coords(max_den: int = 60, power: int = 1) -> CoordSet:
    """Rationals in (0,1); with ``power=k`` only perfect k-th powers r**k are drawn."""
    def sample(rng):
        den = rng.randint(2, max_den)
        return Fraction(rng.randint(1, den - 1), den) ** power
    return CoordSet("open-interval reals", sample,
                    description=f"(0,1) rationals, {power}-th powers" if power > 1 else "(0,1) rationals")


def interval_float_coords(tol: float = 1e-9, lo: float = 0.02, hi: float = 0.98) -> CoordSet:
    return CoordSet("open-interval reals", lambda rng: ApproxReal(rng.uniform(lo, hi), tol),
                    exact=False, description=f"(0,1) doubles, tol {tol:g}")


# --------------------------------------------------------------------------
# point maps


@dataclass(frozen=True)
class PointMap:
    """Partial map M^a -> M^a with an optional inverse rule."""

    arity: int
    forward: Callable = field(repr=False)
    inverse_rule: Optional[Callable] = field(default=None, repr=False)
    name: str = ""

    def __call__(self, point):
        point = tuple(point)
        if len(point) != self.arity:
            raise ValueError(f"{self.name or 'map'} expects {self.arity} slots, got {len(point)}")
        try:
            out = self.forward(point)
        except ZeroDivisionError as exc:
            raise DomainError(point, reason=str(exc)) from None
        except ValueError as exc:
            raise DomainError(point, reason=str(exc)) from None
        return tuple(out)

    @property
    def has_inverse(self) -> bool:
        return self.inverse_rule is not None


def invert(f: PointMap) -> PointMap:
    if f.inverse_rule is None:
        raise MissingInverseRule(f"no inverse rule registered for {f.name or 'map'}")
    return PointMap(f.arity, f.inverse_rule, f.forward, f"{f.name}^-1" if f.name else "")


def identity_map(arity: int) -> PointMap:
    return PointMap(arity, lambda p: p, lambda p: p, "id")


def swap_map() -> PointMap:
    """The coordinate swap, i.e. the permutation element P on point maps."""
    swap = lambda p: (p[1], p[0])  # noqa: E731
    return PointMap(2, swap, swap, "P")


def _check_legs(legs, n, base):
    if len(set(legs)) != len(legs):
        raise DuplicateLeg(f"legs {legs} repeat")
    for leg in legs:
        if not base <= leg < n + base:
            raise LegOutOfRange(f"leg {leg} outside {base}..{n + base - 1}")


def as_operator_product(factors, n: int, base: int = 1, name: str = "") -> PointMap:
    """Point map on M^n induced by the operator word ``factors`` (left to right).

    ``factors`` is a list of ``(PointMap, legs)``; legs use labels starting at
    ``base``.  Stages run in the listed order, each acting only on its slots.
    A stage that is undefined raises :class:`DomainError` naming its index.
    """
    stages = []
    for f, legs in factors:
        legs = tuple(legs)
        if len(legs) != f.arity:
            raise ValueError(f"{len(legs)} legs given to arity-{f.arity} map")
        _check_legs(legs, n, base)
        stages.append((f, tuple(leg - base for leg in legs)))

    def run(chain, point):
        point = list(point)
        for idx, (g, slots) in enumerate(chain):
            sub = tuple(point[s] for s in slots)
            try:
                out = g(sub)
            except DomainError as exc:
                raise DomainError(tuple(point), idx, exc.reason) from None
            for s, v in zip(slots, out):
                point[s] = v
        return tuple(point)

    forward = lambda p: run(stages, p)  # noqa: E731
    inverse = None
    if all(f.has_inverse for f, _ in stages):
        inv_stages = [(invert(f), slots) for f, slots in reversed(stages)]
        inverse = lambda p: run(inv_stages, p)  # noqa: E731
    return PointMap(n, forward, inverse, name)


# --------------------------------------------------------------------------
# equality testing


def sample_rng(seed: int, index: int) -> random.Random:
    """Independent deterministic stream per (seed, sample index)."""
    return random.Random(f"{seed}:{index}")


def _evaluate_pair(f, g, point):
    return f(point), g(point)


def sampled_equal(f: PointMap, g: PointMap, coords: CoordSet, samples: int = 200,
                  seed: int = 0, name: str = "", equation: str = "",
                  max_retries: int = MAX_RETRIES) -> RelationReport:
    """Compare two point maps at ``samples`` random general-position points.

    A point where either side is undefined is discarded and redrawn from the
    same stream; more than ``max_retries`` redraws for one sample raises
    :class:`RetryBudgetExhausted`.
    """
    if f.arity != g.arity:
        raise ValueError("maps act on different powers of M")
    if samples < 1:
        raise ValueError("need at least one sample")
    t0 = time.perf_counter()
    retries = 0
    for i in range(samples):
        rng = sample_rng(seed, i)
        for attempt in range(max_retries + 1):
            point = coords.sample_point(rng, f.arity)
            try:
                lhs, rhs = _evaluate_pair(f, g, point)
                break
            except DomainError:
                retries += 1
        else:
            raise RetryBudgetExhausted(
                f"sample {i}: maps undefined at {max_retries + 1} consecutive points")
        if lhs != rhs:
            return RelationReport(name, equation, f"pointmap:{coords.kind}", FAIL, i + 1, retries,
                                  {"point": point, "lhs": lhs, "rhs": rhs},
                                  (time.perf_counter() - t0) * 1e3)
    return RelationReport(name, equation, f"pointmap:{coords.kind}", PASS, samples, retries,
                          None, (time.perf_counter() - t0) * 1e3)


def exhaustive_equal(f: PointMap, g: PointMap, coords: CoordSet, name: str = "",
                     equation: str = "") -> RelationReport:
    """Compare at every point of a finite M^a."""
    if not coords.finite:
        raise ValueError("exhaustive comparison needs a finite coordinate set")
    t0 = time.perf_counter()
    count = 0
    for point in itertools.product(coords.elements, repeat=f.arity):
        count += 1
        lhs, rhs = f(point), g(point)
        if lhs != rhs:
            return RelationReport(name, equation, f"pointmap:{coords.kind}", FAIL, count, 0,
                                  {"point": point, "lhs": lhs, "rhs": rhs},
                                  (time.perf_counter() - t0) * 1e3)
    return RelationReport(name, equation, f"pointmap:{coords.kind}", PASS, count, 0, None,
                          (time.perf_counter() - t0) * 1e3)


def to_tensor_op(f: PointMap, coords: CoordSet, one=Fraction(1)) -> TensorOp:
    """Matrix of the operator (S phi)(p) = phi(s(p)) in the delta-function basis.

    S delta_q = delta_{s^-1(q)}, so the entry at (row p, column s(p)) is one.
    """
    if not coords.finite:
        raise ValueError("matrix form needs a finite coordinate set")
    elems = list(coords.elements)
    pos = {e: i for i, e in enumerate(elems)}
    entries = {}
    for point in itertools.product(elems, repeat=f.arity):
        image = f(point)
        entries[(tuple(pos[e] for e in point), tuple(pos[e] for e in image))] = one
    return TensorOp(len(elems), f.arity, entries)
