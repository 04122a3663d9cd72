"""Truncated Laurent series in a formal variable q with rational coefficients.

A :class:`TruncLaurent` records the coefficients of ``q**e`` for
``min_exp <= e <= trunc`` and nothing about exponents above ``trunc``: those
are *unknown*, not zero.  Every operation propagates the order up to which the
result is actually determined, so two series can never compare equal on
information neither of them has.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import DivisionByZero, IncompatibleRings, TruncationUnderflow
from .scalars import format_rational, parse_rational

DEFAULT_FLOOR = -1000


class TruncLaurent:
    __slots__ = ("min_exp", "coeffs", "trunc")

    def __init__(self, coeffs=(), min_exp: int = 0, trunc: int = 0):
        coeffs = [Fraction(c) for c in coeffs]
        # coefficients above the truncation order are unknown; drop them
        keep = trunc - min_exp + 1
        if keep < len(coeffs):
            coeffs = coeffs[:max(keep, 0)]
        # normalize: leading zeros move min_exp, trailing zeros are implicit
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        coeffs = coeffs[lead:]
        min_exp += lead
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            min_exp = trunc + 1
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "min_exp", min_exp)
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, name, value):
        raise AttributeError("TruncLaurent is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c, trunc: int):
        return cls([c], 0, trunc)

    @classmethod
    def one(cls, trunc: int):
        return cls([1], 0, trunc)

    @classmethod
    def zero(cls, trunc: int):
        return cls([], 0, trunc)

    @classmethod
    def monomial(cls, e: int, c=1, trunc: int | None = None):
        """c * q**e, exactly known up to ``trunc`` (default: e)."""
        return cls([c], e, e if trunc is None else trunc)

    @classmethod
    def from_dict(cls, terms: dict, trunc: int):
        if not terms:
            return cls.zero(trunc)
        lo = min(terms)
        hi = max(terms)
        coeffs = [0] * (hi - lo + 1)
        for e, c in terms.items():
            coeffs[e - lo] = c
        return cls(coeffs, lo, trunc)

    # -- inspection -------------------------------------------------------

    def __getitem__(self, e: int) -> Fraction:
        if e > self.trunc:
            raise TruncationUnderflow(f"coefficient of q^{e} unknown (known up to q^{self.trunc})")
        i = e - self.min_exp
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    @property
    def valuation(self) -> int:
        """Lowest exponent with a nonzero coefficient, or trunc+1 for O(q^(trunc+1))."""
        return self.min_exp

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> dict[int, Fraction]:
        return {self.min_exp + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def truncate(self, order: int) -> "TruncLaurent":
        """Forget everything above ``order`` (no-op if already coarser)."""
        if order >= self.trunc:
            return self
        return TruncLaurent(self.coeffs, self.min_exp, order)

    def evaluate(self, q) -> Fraction:
        """Value of the known polynomial part at a rational q."""
        q = Fraction(q)
        return sum((c * q ** (self.min_exp + i) for i, c in enumerate(self.coeffs)),
                   Fraction(0))

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _lift(other, like):
        if isinstance(other, TruncLaurent):
            return other
        if isinstance(other, (int, Fraction)):
            # constants are exact: give them enough precision never to limit `like`
            return TruncLaurent([other], 0, like.trunc + max(0, -like.valuation))
        raise IncompatibleRings(f"cannot combine TruncLaurent with {type(other).__name__}")

    def __add__(self, other):
        o = self._lift(other, self)
        t = min(self.trunc, o.trunc)
        lo = min(self.min_exp, o.min_exp)
        hi = t
        if hi < lo:
            return TruncLaurent.zero(t)
        out = [Fraction(0)] * (hi - lo + 1)
        for src in (self, o):
            for i, c in enumerate(src.coeffs):
                e = src.min_exp + i
                if e <= hi:
                    out[e - lo] += c
        return TruncLaurent(out, lo, t)

    __radd__ = __add__

    def __neg__(self):
        return TruncLaurent([-c for c in self.coeffs], self.min_exp, self.trunc)

    def __sub__(self, other):
        return self + (-self._lift(other, self))

    def __rsub__(self, other):
        return self._lift(other, self) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return TruncLaurent.zero(self.trunc)
            return TruncLaurent([c * other for c in self.coeffs], self.min_exp, self.trunc)
        o = self._lift(other, self)
        t = min(self.trunc + o.valuation, o.trunc + self.valuation)
        if self.is_zero() or o.is_zero():
            return TruncLaurent.zero(t)
        lo = self.min_exp + o.min_exp
        if t < lo:
            return TruncLaurent.zero(t)
        out = [Fraction(0)] * (t - lo + 1)
        for i, a in enumerate(self.coeffs):
            if lo + i > t:
                break
            for j, b in enumerate(o.coeffs):
                k = i + j
                if lo + k > t:
                    break
                out[k] += a * b
        return TruncLaurent(out, lo, t)

    def __rmul__(self, other):
        return self.__mul__(other)

    def shift(self, e: int) -> "TruncLaurent":
        """Exact multiplication by q**e."""
        return TruncLaurent(self.coeffs, self.min_exp + e, self.trunc + e)

    def inverse(self, floor: int = DEFAULT_FLOOR) -> "TruncLaurent":
        if self.is_zero():
            raise DivisionByZero("series has no known nonzero coefficient")
        v = self.valuation
        if -v < floor:
            raise TruncationUnderflow(f"inverse needs q^{-v}, below floor q^{floor}")
        lead = self.coeffs[0]
        # s = lead q^v (1 + r); 1/s = lead^-1 q^-v sum (-r)^k
        rel = self.trunc - v  # 1 + r known up to this order
        unit = [c / lead for c in self.coeffs]
        inv = [Fraction(0)] * (rel + 1)
        inv[0] = Fraction(1)
        for n in range(1, rel + 1):
            acc = Fraction(0)
            for k in range(1, min(n, len(unit) - 1) + 1):
                acc += unit[k] * inv[n - k]
            inv[n] = -acc
        return TruncLaurent([c / lead for c in inv], -v, rel - v)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero constant")
            return self * (Fraction(1) / Fraction(other))
        return self * self._lift(other, self).inverse()

    def __rtruediv__(self, other):
        return self._lift(other, self) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return TruncLaurent.one(self.trunc)
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    # -- comparison -------------------------------------------------------

    def agrees_to(self, other) -> int:
        """Highest order up to which both series are known and coincide.

        Returns ``common_trunc`` when they agree everywhere they are both
        known, otherwise (first differing exponent - 1).
        """
        o = self._lift(other, self)
        t = min(self.trunc, o.trunc)
        lo = min(self.min_exp, o.min_exp)
        for e in range(lo, t + 1):
            if self[e] != o[e]:
                return e - 1
        return t

    def first_difference(self, other):
        o = self._lift(other, self)
        t = min(self.trunc, o.trunc)
        for e in range(min(self.min_exp, o.min_exp), t + 1):
            if self[e] != o[e]:
                return e
        return None

    def __eq__(self, other):
        if not isinstance(other, (TruncLaurent, int, Fraction)):
            return NotImplemented
        return self.first_difference(other) is None

    __hash__ = None

    def __repr__(self):
        if not self.coeffs:
            return f"O(q^{self.trunc + 1})"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*q^{self.min_exp + i}")
        return " + ".join(parts) + f" + O(q^{self.trunc + 1})"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"min_exp": self.min_exp,
                "coeffs": [format_rational(c) for c in self.coeffs],
                "trunc": self.trunc}

    @classmethod
    def from_json(cls, d: dict) -> "TruncLaurent":
        return cls([parse_rational(c) for c in d["coeffs"]], int(d["min_exp"]), int(d["trunc"]))


def qq_pochhammer(k: int, trunc: int | None = None) -> TruncLaurent:
    """(q;q)_k = prod_{j=1..k} (1 - q^j), a polynomial of degree k(k+1)/2."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    deg = k * (k + 1) // 2
    if trunc is None:
        trunc = deg
    return TruncLaurent(_qq_poly(k), 0, trunc)


@lru_cache(maxsize=None)
def _qq_poly(k: int) -> tuple:
    poly = [Fraction(1)]
    for j in range(1, k + 1):
        nxt = poly + [Fraction(0)] * j
        for i, c in enumerate(poly):
            nxt[i + j] -= c
        poly = nxt
    return tuple(poly)


@lru_cache(maxsize=None)
def inv_qq_pochhammer(k: int, trunc: int) -> TruncLaurent:
    """1/(q;q)_k expanded up to q**trunc."""
    return qq_pochhammer(k, max(trunc, k * (k + 1) // 2)).inverse().truncate(trunc)


def pochhammer_q(x, k: int, trunc: int) -> TruncLaurent:
    """(x;q)_k = prod_{j=0}^{k-1} (1 - x q^j) for a series or rational x."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if not isinstance(x, TruncLaurent):
        x = TruncLaurent.constant(Fraction(x), trunc)
    result = TruncLaurent.one(trunc)
    for j in range(k):
        result = result * (1 - x.shift(j))
    return result.truncate(trunc)
