"""Small finite groups given by multiplication tables over element indices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True)
class Group:
    name: str
    labels: tuple
    table: tuple  # table[a][b] = index of a*b
    identity: int

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return next(b for b in range(self.order) if self.table[a][b] == self.identity)

    def is_group(self) -> bool:
        n = self.order
        rng = range(n)
        assoc = all(self.table[self.table[a][b]][c] == self.table[a][self.table[b][c]]
                    for a in rng for b in rng for c in rng)
        unit = all(self.table[self.identity][a] == a == self.table[a][self.identity] for a in rng)
        invs = all(any(self.table[a][b] == self.identity for b in rng) for a in rng)
        return assoc and unit and invs


def cyclic(n: int) -> Group:
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return Group(f"Z{n}", tuple(range(n)), table, 0)


def symmetric(k: int) -> Group:
    """S_k on permutations of range(k), lexicographic order; (p*q)(i) = p(q(i))."""
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = tuple(tuple(index[tuple(p[q[i]] for i in range(k))] for q in perms) for p in perms)
    return Group(f"S{k}", tuple(perms), table, index[tuple(range(k))])


def by_name(name: str) -> Group:
    if name.startswith("Z") and name[1:].isdigit():
        return cyclic(int(name[1:]))
    if name.startswith("S") and name[1:].isdigit():
        return symmetric(int(name[1:]))
    raise KeyError(f"unknown group {name!r}")
