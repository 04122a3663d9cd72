"""Sparse linear operators on tensor powers of a based vector space.

Entries are keyed by ``(row multi-index, col multi-index)`` pairs, so placing an
operator on chosen legs of a bigger tensor power is a relabelling of keys.
Products accumulate into a dict and prune exact zeros.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (ArityMismatch, DenseMaterializationRefused, DuplicateLeg,
                     LegOutOfRange, SingularOperator)
from .scalars import parse_rational, to_jsonable

MAX_DENSE_DIM = 4096


@dataclass(frozen=True)
class BasedSpace:
    dim: int
    labels: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(self.dim)))
        if len(self.labels) != self.dim or len(set(self.labels)) != self.dim:
            raise ValueError("labels must be distinct and match the dimension")


def _is_zero(v) -> bool:
    return v == 0


class TensorOp:
    """Operator on V^{(x) arity}, dim V = ``dim``."""

    __slots__ = ("dim", "arity", "entries", "_cols")

    def __init__(self, dim: int, arity: int, entries: dict):
        self.dim = dim
        self.arity = arity
        clean = {}
        for (r, c), v in entries.items():
            r, c = tuple(r), tuple(c)
            if len(r) != arity or len(c) != arity:
                raise ArityMismatch(f"multi-index length must be {arity}")
            if any(not 0 <= i < dim for i in r + c):
                raise LegOutOfRange(f"index component out of range for dim {dim}")
            if not _is_zero(v):
                clean[(r, c)] = v
        self.entries = clean
        self._cols = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, dim: int, arity: int, one=Fraction(1)):
        return cls(dim, arity, {(i, i): one
                                for i in itertools.product(range(dim), repeat=arity)})

    @classmethod
    def from_dense(cls, rows, dim: int, arity: int):
        """Build from a dense square matrix indexed by flattened multi-indices."""
        basis = list(itertools.product(range(dim), repeat=arity))
        if len(rows) != len(basis):
            raise ArityMismatch(f"expected {len(basis)} rows, got {len(rows)}")
        return cls(dim, arity, {(basis[i], basis[j]): v
                                for i, row in enumerate(rows) for j, v in enumerate(row)})

    @classmethod
    def from_kron(cls, factors):
        """Tensor product a (x) b (x) ... of single-leg ``dim x dim`` dense matrices."""
        dim = len(factors[0])
        arity = len(factors)
        entries = {}
        single = [[(i, j, v) for i, r in enumerate(m) for j, v in enumerate(r) if v != 0]
                  for m in factors]
        for combo in itertools.product(*single):
            val = Fraction(1)
            for _, _, v in combo:
                val = val * v
            entries[(tuple(i for i, _, _ in combo), tuple(j for _, j, _ in combo))] = val
        return cls(dim, arity, entries)

    # -- access -----------------------------------------------------------

    @property
    def size(self) -> int:
        return self.dim ** self.arity

    def columns(self) -> dict:
        """col multi-index -> list of (row, value)."""
        if self._cols is None:
            cols = {}
            for (r, c), v in self.entries.items():
                cols.setdefault(c, []).append((r, v))
            for lst in cols.values():
                lst.sort(key=lambda rv: rv[0])
            self._cols = cols
        return self._cols

    def nnz(self) -> int:
        return len(self.entries)

    def apply(self, vec: dict) -> dict:
        """Act on a sparse vector {multi-index: coefficient}."""
        cols = self.columns()
        out = {}
        for c, x in vec.items():
            for r, v in cols.get(c, ()):
                out[r] = out.get(r, 0) + v * x
        return {k: v for k, v in out.items() if not _is_zero(v)}

    def to_dense(self, limit: int = MAX_DENSE_DIM):
        n = self.size
        if n > limit:
            raise DenseMaterializationRefused(f"dense form of dimension {n} exceeds {limit}")
        basis = list(itertools.product(range(self.dim), repeat=self.arity))
        index = {b: i for i, b in enumerate(basis)}
        zero = Fraction(0)
        rows = [[zero] * n for _ in range(n)]
        for (r, c), v in self.entries.items():
            rows[index[r]][index[c]] = v
        return rows

    def is_generalized_permutation(self) -> bool:
        if len(self.entries) != self.size:
            return False
        rows = {r for r, _ in self.entries}
        cols = {c for _, c in self.entries}
        return len(rows) == len(cols) == self.size

    # -- algebra ----------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, TensorOp):
            return op_mul(self, other)
        return TensorOp(self.dim, self.arity, {k: v * other for k, v in self.entries.items()})

    def __rmul__(self, other):
        return TensorOp(self.dim, self.arity, {k: other * v for k, v in self.entries.items()})

    def __add__(self, other):
        _check_compatible(self, other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return TensorOp(self.dim, self.arity, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __eq__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        return (self.dim, self.arity, self.entries) == (other.dim, other.arity, other.entries)

    __hash__ = None

    def transpose(self):
        return TensorOp(self.dim, self.arity, {(c, r): v for (r, c), v in self.entries.items()})

    def with_entry(self, row, col, value):
        """Copy with one entry replaced (used for negative controls)."""
        out = dict(self.entries)
        out[(tuple(row), tuple(col))] = value
        return TensorOp(self.dim, self.arity, out)

    def __repr__(self):
        return f"TensorOp(dim={self.dim}, arity={self.arity}, nnz={self.nnz()})"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> list:
        return [{"row": list(r), "col": list(c), "val": to_jsonable(v)}
                for (r, c), v in sorted(self.entries.items())]

    @classmethod
    def from_json(cls, data: list, dim: int, arity: int | None = None):
        if arity is None:
            arity = len(data[0]["row"]) if data else 1
        return cls(dim, arity, {(tuple(e["row"]), tuple(e["col"])): parse_rational(e["val"])
                                for e in data})


def _check_compatible(a: TensorOp, b: TensorOp):
    if a.arity != b.arity:
        raise ArityMismatch(f"arity {a.arity} vs {b.arity}")
    if a.dim != b.dim:
        raise ArityMismatch(f"space dimension {a.dim} vs {b.dim}")


def _check_legs(legs, n_total):
    if len(set(legs)) != len(legs):
        raise DuplicateLeg(f"legs {legs} repeat an index")
    for leg in legs:
        if not 1 <= leg <= n_total:
            raise LegOutOfRange(f"leg {leg} not in 1..{n_total}")


def embed(u: TensorOp, legs, n_total: int) -> TensorOp:
    """Place ``u`` on the (1-based) ``legs`` of V^{(x) n_total}, identity elsewhere."""
    legs = tuple(legs)
    if len(legs) != u.arity:
        raise ArityMismatch(f"{len(legs)} legs given for arity {u.arity}")
    _check_legs(legs, n_total)
    slots = [leg - 1 for leg in legs]
    rest = [i for i in range(n_total) if i not in slots]
    entries = {}
    for (r, c), v in u.entries.items():
        for other in itertools.product(range(u.dim), repeat=len(rest)):
            row = [0] * n_total
            col = [0] * n_total
            for s, a, b in zip(slots, r, c):
                row[s] = a
                col[s] = b
            for s, a in zip(rest, other):
                row[s] = a
                col[s] = a
            entries[(tuple(row), tuple(col))] = v
    return TensorOp(u.dim, n_total, entries)


def apply_on_legs(u: TensorOp, slots, vec: dict) -> dict:
    """Act with ``u`` on 0-based ``slots`` of a sparse vector without embedding."""
    cols = u.columns()
    out = {}
    for idx, x in vec.items():
        sub = tuple(idx[s] for s in slots)
        hits = cols.get(sub)
        if not hits:
            continue
        for r, v in hits:
            new = list(idx)
            for s, a in zip(slots, r):
                new[s] = a
            key = tuple(new)
            out[key] = out.get(key, 0) + v * x
    return {k: v for k, v in out.items() if not _is_zero(v)}


def permutation_P(dim: int, one=Fraction(1)) -> TensorOp:
    """Swap of the two tensor legs: P(e_a (x) e_b) = e_b (x) e_a."""
    return TensorOp(dim, 2, {((b, a), (a, b)): one
                             for a in range(dim) for b in range(dim)})


def op_mul(a: TensorOp, b: TensorOp) -> TensorOp:
    _check_compatible(a, b)
    b_rows = {}
    for (r, c), v in b.entries.items():
        b_rows.setdefault(r, []).append((c, v))
    out = {}
    for (r, k), v in a.entries.items():
        for c, w in b_rows.get(k, ()):
            key = (r, c)
            out[key] = out.get(key, 0) + v * w
    return TensorOp(a.dim, a.arity, out)


def op_inv(a: TensorOp) -> TensorOp:
    """Exact inverse; generalized permutations are inverted without elimination."""
    if a.is_generalized_permutation():
        return TensorOp(a.dim, a.arity, {(c, r): 1 / v for (r, c), v in a.entries.items()})
    n = a.size
    if n > MAX_DENSE_DIM:
        raise DenseMaterializationRefused(f"inverse of non-monomial operator of dimension {n}")
    m = a.to_dense()
    zero, one = Fraction(0), Fraction(1)
    aug = [row[:] + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise SingularOperator("operator is not invertible")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = one / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return TensorOp.from_dense([row[n:] for row in aug], a.dim, a.arity)
