"""Set-theoretic pentagon solutions (S phi)(x, y) = phi(x . y, x * y).

Covers the group solution, the ring solutions with sign eps, the interval
family with exponent alpha, and the two worked rational examples with their
T / S maps.  All maps are registered as :class:`PointMap` objects and bundled
into :class:`SolutionPair` instances on a point-map backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import DomainError
from .groups import Group
from .pointmaps import (CoordSet, PointMap, exhaustive_equal, field_coords, group_coords,
                        interval_float_coords, interval_rational_coords, invert,
                        matrix_coords, pair_coords, sampled_equal)
from .relations import PointMapBackend, SolutionPair
from .report import RelationReport, merge_reports
from .scalars import (DEFAULT_PRIME, DEFAULT_TOLERANCE, QQ, ApproxReal, MatrixRing,
                      PrimeField, rational_pow)


@dataclass
class DotStarStructure:
    """A set M with dot and star mappings, plus optional bracket data.

    When ``bracket`` is given the star should equal [x]^-1 . [x . y]; with
    ``group_inv`` and ``bracket_inv`` as well, the S map gets an inverse rule.
    """

    name: str
    coords: CoordSet
    dot: Callable
    star: Callable
    bracket: Optional[Callable] = None
    bracket_inv: Optional[Callable] = None
    group_inv: Optional[Callable] = None
    alpha: object = None
    eps: Optional[int] = None
    w: Optional[Callable] = None
    meta: dict = field(default_factory=dict)

    def s_map(self) -> PointMap:
        dot, star = self.dot, self.star

        def forward(p):
            x, y = p
            return dot(x, y), star(x, y)

        if not (self.bracket and self.bracket_inv and self.group_inv):
            return PointMap(2, forward, None, f"S[{self.name}]")
        br, br_inv, ginv = self.bracket, self.bracket_inv, self.group_inv

        def inverse(p):
            # v = [x]^-1 [u]  =>  [x] = [u] v^-1,  y = x^-1 u
            u, v = p
            x = br_inv(dot(br(u), ginv(v)))
            return x, dot(ginv(x), u)
        return PointMap(2, forward, inverse, f"S[{self.name}]")


def _triple_map(fn):
    return PointMap(3, lambda p: (fn(*p),))


def _compare(f, g, coords, samples, seed, name, equation):
    if coords.finite and len(coords.elements) ** f.arity <= 5000:
        return exhaustive_equal(f, g, coords, name, equation)
    return sampled_equal(f, g, coords, samples, seed, name, equation)


def check_m_system(d: DotStarStructure, samples: int = 200, seed: int = 0) -> RelationReport:
    """Associativity of dot and the two dot/star compatibility equations."""
    dot, star = d.dot, d.star
    eqs = {
        "m1": (lambda x, y, z: dot(dot(x, y), z), lambda x, y, z: dot(x, dot(y, z))),
        "m2": (lambda x, y, z: dot(star(x, y), star(dot(x, y), z)),
               lambda x, y, z: star(x, dot(y, z))),
        "m3": (lambda x, y, z: star(star(x, y), star(dot(x, y), z)),
               lambda x, y, z: star(y, z)),
    }
    parts = [_compare(_triple_map(lhs), _triple_map(rhs), d.coords, samples, seed,
                      f"{d.name}:{eq}", eq)
             for eq, (lhs, rhs) in eqs.items()]
    return merge_reports(f"{d.name}:m-system", "m1-m3", f"pointmap:{d.coords.kind}", parts)


def check_bracket_form(d: DotStarStructure, samples: int = 200, seed: int = 0) -> RelationReport:
    """x * y = [x]^-1 . [x . y] at sampled pairs."""
    if d.bracket is None or d.group_inv is None:
        raise ValueError(f"{d.name} has no bracket")
    br, ginv, dot = d.bracket, d.group_inv, d.dot
    f = PointMap(2, lambda p: (d.star(*p),))
    g = PointMap(2, lambda p: (dot(ginv(br(p[0])), br(dot(p[0], p[1]))),))
    return _compare(f, g, d.coords, samples, seed, f"{d.name}:star-bracket", "star")


# --------------------------------------------------------------------------
# groups: the unique star on a group is x * y = y


def group_structure(g: Group) -> DotStarStructure:
    ident = lambda x: x  # noqa: E731
    return DotStarStructure(f"group:{g.name}", group_coords(g), g.mul, lambda x, y: y,
                            bracket=ident, bracket_inv=ident, group_inv=g.inv,
                            meta={"group": g})


def perturbed_group_structure(g: Group, rng) -> DotStarStructure:
    """Group structure whose star is changed at one random pair."""
    x0, y0 = rng.randrange(g.order), rng.randrange(g.order)
    bad = rng.choice([v for v in range(g.order) if v != y0])

    def star(x, y):
        return bad if (x, y) == (x0, y0) else y
    return DotStarStructure(f"group:{g.name}~perturbed", group_coords(g), g.mul, star,
                            meta={"perturbed_at": (x0, y0, bad)})


def group_solution(g: Group, samples: int = 200, seed: int = 0) -> SolutionPair:
    d = group_structure(g)
    s = d.s_map()
    return SolutionPair(d.name, s, invert(s), PointMapBackend(d.coords, samples, seed),
                        meta={"structure": d})


# --------------------------------------------------------------------------
# ring solutions: x * y = (1 - x^eps)^-eps (1 - (xy)^eps)^eps


def ring_eps_structure(eps: int, carrier: str = "rational", prime: int = DEFAULT_PRIME,
                       ) -> DotStarStructure:
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    if carrier == "rational":
        coords = field_coords(QQ)
    elif carrier == "prime":
        coords = field_coords(PrimeField(prime))
    elif carrier == "matrix2":
        # wide entry range keeps singular draws (retries) near 1%
        coords = matrix_coords(MatrixRing(2, QQ), bound=20)
    else:
        raise ValueError(f"unknown carrier {carrier!r}")

    def star(x, y):
        return (1 - x ** eps) ** (-eps) * (1 - (x * y) ** eps) ** eps

    return DotStarStructure(f"ring-eps:{eps:+d}:{carrier}", coords, lambda x, y: x * y, star,
                            eps=eps)


def ring_eps_solution(eps: int, carrier: str = "rational", prime: int = DEFAULT_PRIME,
                      samples: int = 200, seed: int = 0) -> SolutionPair:
    d = ring_eps_structure(eps, carrier, prime)
    s = d.s_map()
    return SolutionPair(d.name, s, None, PointMapBackend(d.coords, samples, seed),
                        meta={"structure": d})


# --------------------------------------------------------------------------
# interval family


def _in_unit_interval(v) -> bool:
    v = v.value if isinstance(v, ApproxReal) else v
    return 0 < v < 1


def interval_star(x, y, alpha):
    """y ((1 - x^(1/alpha)) / (1 - (xy)^(1/alpha)))^alpha on (0,1); alpha = 0 gives y.

    Rational inputs with rational alpha are evaluated exactly (ValueError if a
    root is irrational); ApproxReal or float inputs use double precision.
    """
    if not (_in_unit_interval(x) and _in_unit_interval(y)):
        raise DomainError((x, y), reason="star is defined on (0,1) only")
    if alpha == 0:
        return y
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if isinstance(x, Fraction) and isinstance(y, Fraction) and isinstance(alpha, (int, Fraction)):
        alpha = Fraction(alpha)
        if alpha == 1:
            return y * (1 - x) / (1 - x * y)
        inv = 1 / alpha
        ratio = (1 - rational_pow(x, inv)) / (1 - rational_pow(x * y, inv))
        return y * rational_pow(ratio, alpha)
    xa = float(x.value if isinstance(x, ApproxReal) else x)
    ya = float(y.value if isinstance(y, ApproxReal) else y)
    a = float(alpha)
    val = ya * math.exp(a * (math.log1p(-math.exp(math.log(xa) / a))
                             - math.log1p(-math.exp(math.log(xa * ya) / a))))
    tol = x.tol if isinstance(x, ApproxReal) else DEFAULT_TOLERANCE
    return ApproxReal(val, tol)


def w_function(alpha):
    """w(x) = 1 - x^(1/alpha); the alpha -> 0+ limit is w = 1 on (0,1)."""
    def w(x):
        if alpha == 0:
            return x * 0 + 1
        if isinstance(x, Fraction) and isinstance(alpha, (int, Fraction)):
            return 1 - rational_pow(x, 1 / Fraction(alpha))
        xv = float(x.value if isinstance(x, ApproxReal) else x)
        tol = x.tol if isinstance(x, ApproxReal) else DEFAULT_TOLERANCE
        return ApproxReal(1 - math.exp(math.log(xv) / float(alpha)), tol)
    return w


def parse_alpha(text: str):
    """'1', '2', '1/2' -> Fraction; '0.5', '2.0', 'sqrt2' style floats -> float."""
    text = text.strip()
    if any(c in text for c in ".eE"):
        return float(text)
    return Fraction(text)


def interval_coords_for(alpha, exact: bool | None = None, tol: float = DEFAULT_TOLERANCE):
    """Sampling domain: exact rationals when every evaluation stays rational."""
    if exact is None:
        exact = isinstance(alpha, (int, Fraction)) and Fraction(alpha).denominator == 1
    if not exact:
        return interval_float_coords(tol)
    k = int(alpha)
    # x = r^k keeps x^(1/k) rational, and the star maps k-th powers to k-th powers
    return interval_rational_coords(power=max(k, 1))


def interval_structure(alpha, exact: bool | None = None,
                       tol: float = DEFAULT_TOLERANCE) -> DotStarStructure:
    coords = interval_coords_for(alpha, exact, tol)
    if not coords.exact:
        alpha = float(alpha)
    label = f"interval:{alpha}" + ("" if coords.exact else "~")
    return DotStarStructure(label, coords, lambda x, y: x * y,
                            lambda x, y: interval_star(x, y, alpha), alpha=alpha,
                            w=w_function(alpha))


def w_identity_check(alpha, samples: int = 200, seed: int = 0, exact: bool | None = None,
                     tol: float = DEFAULT_TOLERANCE, w=None) -> RelationReport:
    """w(xy) = w(x) + w(y) - w(x) w(y) at sampled (x, y) in (0,1)^2.

    ``w`` replaces the derived function (used for negative controls).
    """
    if exact is None:
        exact = isinstance(alpha, (int, Fraction))
        if exact and Fraction(alpha) != 0:
            # exact when x^(1/alpha) is rational: alpha = 1/k on any rational,
            # alpha = k on k-th powers
            a = Fraction(alpha)
            exact = a.numerator == 1 or a.denominator == 1
    if exact:
        a = Fraction(alpha)
        power = a.numerator if a.denominator == 1 and a != 0 else 1
        coords = interval_rational_coords(power=power)
    else:
        alpha = float(alpha)
        coords = interval_float_coords(tol)
    w = w or w_function(alpha)
    f = PointMap(2, lambda p: (w(p[0] * p[1]),))
    g = PointMap(2, lambda p: (w(p[0]) + w(p[1]) - w(p[0]) * w(p[1]),))
    label = f"w-identity:{alpha}" + ("" if exact else "~")
    return sampled_equal(f, g, coords, samples, seed, label, "xx2")


# --------------------------------------------------------------------------
# worked examples


def bracket_1d(x):
    return x / (1 - x)


def bracket_1d_inv(a):
    return a / (1 + a)


def example1_maps():
    """T, Tbar, S, Sbar on single coordinates."""
    def t_fwd(p):
        x, y = p
        return x * y, y - x * y

    def t_inv(p):
        u, v = p
        return u / (u + v), u + v

    def s_fwd(p):
        x, y = p
        return x * y, bracket_1d(x * y) / bracket_1d(x)

    def s_inv(p):
        u, v = p
        y = u + v * (1 - u)
        return u / y, y

    T = PointMap(2, t_fwd, t_inv, "T")
    S = PointMap(2, s_fwd, s_inv, "S")
    return T, PointMap(2, t_inv, t_fwd, "Tbar"), S, PointMap(2, s_inv, s_fwd, "Sbar")


def example1_structure(ring=None) -> DotStarStructure:
    ring = ring or PrimeField()
    return DotStarStructure("example1", field_coords(ring), lambda x, y: x * y,
                            lambda x, y: bracket_1d(x * y) / bracket_1d(x),
                            bracket=bracket_1d, bracket_inv=bracket_1d_inv,
                            group_inv=lambda x: 1 / x)


def register_example1(ring=None, samples: int = 200, seed: int = 0) -> SolutionPair:
    ring = ring or PrimeField()
    T, Tbar, S, Sbar = example1_maps()
    coords = field_coords(ring)
    return SolutionPair("example1", S, Sbar, PointMapBackend(coords, samples, seed), T, Tbar,
                        meta={"structure": example1_structure(ring)})


def pair_dot(x, y):
    return x[0] * y[0], x[0] * y[1] + x[1]


def pair_inv(x):
    return 1 / x[0], -x[1] / x[0]


def pair_bracket(x):
    return x[0] / (1 - x[0]), x[1] / (1 - x[0])


def pair_bracket_inv(a):
    return a[0] / (1 + a[0]), a[1] / (1 + a[0])


def pair_star(x, y):
    return pair_dot(pair_inv(pair_bracket(x)), pair_bracket(pair_dot(x, y)))


def example2_structure(ring=None) -> DotStarStructure:
    ring = ring or PrimeField()
    return DotStarStructure("example2", pair_coords(ring), pair_dot, pair_star,
                            bracket=pair_bracket, bracket_inv=pair_bracket_inv,
                            group_inv=pair_inv)


def register_example2(ring=None, samples: int = 200, seed: int = 0) -> SolutionPair:
    d = example2_structure(ring)
    s = d.s_map()
    return SolutionPair("example2", s, invert(s), PointMapBackend(d.coords, samples, seed),
                        meta={"structure": d})
