"""Coefficient rings.

Every value here is immutable.  Rings are small descriptor objects that know
how to produce zero, one and random elements; the elements themselves carry
the arithmetic so that formulas such as ``(1 - x) ** -1 * (1 - x * y)`` can be
written once and evaluated over rationals, prime fields, matrix rings or
tolerance reals alike.

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator, exact equality).
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral, Rational as _RationalABC

from .errors import DivisionByZero, IncompatibleRings

DEFAULT_PRIME = 2**31 - 1
DEFAULT_TOLERANCE = 1e-9


# --------------------------------------------------------------------------
# rationals


def parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise TypeError(f"cannot parse rational from {s!r}")
    return Fraction(s.strip())


def format_rational(x) -> str:
    """Canonical ``"p/q"`` string, denominator always present."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def int_root(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 0:
        return None
    if n < 2:
        return n
    if k == 1:
        return n
    if k == 2:
        r = math.isqrt(n)
    else:
        r = int(round(n ** (1.0 / k)))
        # float guess can be off for big n; Newton polish
        while r ** k > n:
            r = ((k - 1) * r + n // r ** (k - 1)) // k
        while (r + 1) ** k <= n:
            r += 1
    return r if r ** k == n else None


def exact_root(x: Fraction, k: int) -> Fraction:
    """Exact positive k-th root of a nonnegative rational; ValueError if irrational."""
    x = Fraction(x)
    if k <= 0:
        raise ValueError("root index must be positive")
    if x < 0:
        raise ValueError("negative radicand")
    num = int_root(x.numerator, k)
    den = int_root(x.denominator, k)
    if num is None or den is None:
        raise ValueError(f"{x} is not a perfect {k}-th power")
    return Fraction(num, den)


def rational_pow(x: Fraction, e: Fraction) -> Fraction:
    """x ** e for rational e, exact or ValueError."""
    e = Fraction(e)
    base = Fraction(x) ** e.numerator
    return exact_root(base, e.denominator)


class RationalField:
    name = "rational"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, v):
        return parse_rational(v) if isinstance(v, str) else Fraction(v)

    def random(self, rng, exclude=(0, 1), bound=40):
        while True:
            den = rng.randint(1, bound)
            x = Fraction(rng.randint(-bound, bound), den)
            if x not in exclude:
                return x

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "RationalField()"


QQ = RationalField()


# --------------------------------------------------------------------------
# prime fields


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Mod:
    """Residue class modulo a prime.  Division by zero raises, never wraps."""

    __slots__ = ("residue", "p")

    def __init__(self, residue: int, p: int = DEFAULT_PRIME):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "residue", residue % p)

    def __setattr__(self, name, value):
        raise AttributeError("Mod is immutable")

    def _other(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise IncompatibleRings(f"mod {self.p} vs mod {other.p}")
            return other.residue
        if isinstance(other, Integral):
            return int(other)
        if isinstance(other, _RationalABC):
            den = other.denominator % self.p
            if den == 0:
                raise DivisionByZero(f"{other} has no image mod {self.p}")
            return other.numerator * pow(den, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(self.residue + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(self.residue - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.residue, self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(self.residue * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.residue, self.p)

    def inverse(self):
        if self.residue == 0:
            raise DivisionByZero(f"inverse of 0 mod {self.p}")
        return Mod(pow(self.residue, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * Mod(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) * self.inverse()

    def __pow__(self, e):
        if not isinstance(e, Integral):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        return Mod(pow(self.residue, int(e), self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Mod):
            return self.p == other.p and self.residue == other.residue
        if isinstance(other, Integral):
            return self.residue == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.p))

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"Mod({self.residue}, {self.p})"

    def __str__(self):
        return str(self.residue)


class PrimeField:
    def __init__(self, p: int = DEFAULT_PRIME):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"

    def __call__(self, n) -> Mod:
        if isinstance(n, Mod):
            if n.p != self.p:
                raise IncompatibleRings(f"mod {n.p} element given to {self.name}")
            return n
        if isinstance(n, Fraction) and n.denominator != 1:
            return Mod(1, self.p) * n
        return Mod(int(n), self.p)

    def zero(self):
        return Mod(0, self.p)

    def one(self):
        return Mod(1, self.p)

    def coerce(self, v):
        return self(v)

    def random(self, rng, exclude=(0, 1)):
        while True:
            x = rng.randrange(self.p)
            if x not in exclude:
                return Mod(x, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


# --------------------------------------------------------------------------
# tolerance reals


class ApproxReal:
    """Double with mixed absolute/relative tolerance equality."""

    __slots__ = ("value", "tol")

    def __init__(self, value, tol: float = DEFAULT_TOLERANCE):
        object.__setattr__(self, "value", float(value))
        object.__setattr__(self, "tol", tol)

    def __setattr__(self, name, value):
        raise AttributeError("ApproxReal is immutable")

    def _v(self, other):
        if isinstance(other, ApproxReal):
            return other.value
        if isinstance(other, (int, float, Fraction)):
            return float(other)
        return NotImplemented

    def _wrap(self, v):
        return ApproxReal(v, self.tol)

    def __add__(self, other):
        o = self._v(other)
        return o if o is NotImplemented else self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._v(other)
        return o if o is NotImplemented else self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._v(other)
        return o if o is NotImplemented else self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._v(other)
        return o if o is NotImplemented else self._wrap(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._v(other)
        if o is NotImplemented:
            return o
        if o == 0.0:
            raise DivisionByZero("division by zero real")
        return self._wrap(self.value / o)

    def __rtruediv__(self, other):
        o = self._v(other)
        if o is NotImplemented:
            return o
        if self.value == 0.0:
            raise DivisionByZero("division by zero real")
        return self._wrap(o / self.value)

    def __neg__(self):
        return self._wrap(-self.value)

    def __pow__(self, e):
        e = float(e.value if isinstance(e, ApproxReal) else e)
        if self.value == 0.0 and e < 0:
            raise DivisionByZero("zero to a negative power")
        if self.value < 0 and not float(e).is_integer():
            raise ValueError("fractional power of a negative real")
        return self._wrap(self.value ** e)

    def __eq__(self, other):
        o = self._v(other)
        if o is NotImplemented:
            return o
        scale = max(1.0, abs(self.value), abs(o))
        return abs(self.value - o) <= self.tol * scale

    __hash__ = None

    def __lt__(self, other):
        return self.value < self._v(other)

    def __gt__(self, other):
        return self.value > self._v(other)

    def __float__(self):
        return self.value

    def __repr__(self):
        return f"ApproxReal({self.value!r})"


class ApproxReals:
    def __init__(self, tol: float = DEFAULT_TOLERANCE):
        self.tol = tol
        self.name = "approx-real"

    def zero(self):
        return ApproxReal(0.0, self.tol)

    def one(self):
        return ApproxReal(1.0, self.tol)

    def coerce(self, v):
        return ApproxReal(float(v), self.tol)

    def random(self, rng, lo=0.01, hi=0.99):
        return ApproxReal(rng.uniform(lo, hi), self.tol)


# --------------------------------------------------------------------------
# small square matrices


class Mat:
    """d x d matrix over Fraction or Mod entries; noncommutative ring element."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise ValueError("matrix must be square and nonempty")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    @property
    def d(self):
        return len(self.rows)

    @classmethod
    def scalar(cls, c, d, zero=Fraction(0)):
        return cls([[c if i == j else zero for j in range(d)] for i in range(d)])

    def _zero(self):
        return self.rows[0][0] * 0

    def _coerce(self, other):
        if isinstance(other, Mat):
            if other.d != self.d:
                raise IncompatibleRings(f"{self.d}x{self.d} vs {other.d}x{other.d}")
            return other
        if isinstance(other, (int, Fraction, Mod)):
            z = self._zero()
            return Mat.scalar(z + other, self.d, z)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mat([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)])

    __radd__ = __add__

    def __neg__(self):
        return Mat([[-a for a in r] for r in self.rows])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Mod)):
            return Mat([[a * other for a in r] for r in self.rows])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        cols = list(zip(*o.rows))
        return Mat([[sum((a * b for a, b in zip(r, c)), self._zero()) for c in cols]
                    for r in self.rows])

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Mod)):
            return Mat([[other * a for a in r] for r in self.rows])
        return NotImplemented

    def inverse(self):
        d = self.d
        zero = self._zero()
        one = zero + 1
        a = [list(r) + [one if i == j else zero for j in range(d)]
             for i, r in enumerate(self.rows)]
        for c in range(d):
            piv = next((r for r in range(c, d) if a[r][c] != 0), None)
            if piv is None:
                raise DivisionByZero("singular matrix")
            a[c], a[piv] = a[piv], a[c]
            inv = one / a[c][c]
            a[c] = [v * inv for v in a[c]]
            for r in range(d):
                if r != c and a[r][c] != 0:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return Mat([row[d:] for row in a])

    def det(self):
        d = self.d
        if d == 1:
            return self.rows[0][0]
        if d == 2:
            (a, b), (c, e) = self.rows
            return a * e - b * c
        total = self._zero()
        for j in range(d):
            minor = Mat([r[:j] + r[j + 1:] for r in self.rows[1:]])
            term = self.rows[0][j] * minor.det()
            total = total + term if j % 2 == 0 else total - term
        return total

    def __pow__(self, e):
        if not isinstance(e, Integral):
            return NotImplemented
        base = self if e >= 0 else self.inverse()
        z = self._zero()
        result = Mat.scalar(z + 1, self.d, z)
        for _ in range(abs(int(e))):
            result = result * base
        return result

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __eq__(self, other):
        if isinstance(other, Mat):
            return self.rows == other.rows
        if isinstance(other, (int, Fraction, Mod)):
            return self.rows == self._coerce(other).rows
        return NotImplemented

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Mat({[list(r) for r in self.rows]})"


class MatrixRing:
    def __init__(self, d: int = 2, base=QQ):
        if not 1 <= d <= 4:
            raise ValueError("matrix size must be between 1 and 4")
        self.d = d
        self.base = base
        self.name = f"mat{d}:{getattr(base, 'name', base)}"

    def zero(self):
        return Mat.scalar(self.base.zero(), self.d, self.base.zero())

    def one(self):
        return Mat.scalar(self.base.one(), self.d, self.base.zero())

    def coerce(self, v):
        if isinstance(v, Mat):
            return v
        return Mat([[self.base.coerce(x) for x in r] for r in v])

    def random(self, rng, bound=4):
        return Mat([[self.base.coerce(rng.randint(-bound, bound)) for _ in range(self.d)]
                    for _ in range(self.d)])


# --------------------------------------------------------------------------
# serialization


def to_jsonable(x):
    """Convert ring values (and containers of them) to JSON-safe data."""
    from .laurent import TruncLaurent

    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Mod):
        return {"mod": x.p, "residue": x.residue}
    if isinstance(x, ApproxReal):
        return x.value
    if isinstance(x, float):
        return x
    if isinstance(x, Mat):
        return [[to_jsonable(a) for a in r] for r in x.rows]
    if isinstance(x, TruncLaurent):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return str(x)
