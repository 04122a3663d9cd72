"""Brute-force oracle for words in S, S^-1 and q^{-H (x) Lambda} on basis states.

Built from the one-leg operators only: q^{+-Lambda} shifts a label, q^{-H}
multiplies by q^{-n}, and w = -q^Lambda (x) q^{-H} q^{-Lambda} is iterated
one power at a time.  Every path through the summation indices (each index up
to ``kmax``) contributes sign * q^e0 * prod 1/(q;q)_k (times q^{k(k-1)/2} for
the Euler expansion of (w;q)_inf), and each 1/(q;q)_k is expanded by counting
partitions into parts <= k.  Nothing is truncated before the final sum.
"""

from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def partitions_max_part(k: int, degree: int) -> tuple:
    """Number of partitions of 0..degree into parts of size <= k."""
    counts = [1] + [0] * degree
    for part in range(1, k + 1):
        for total in range(part, degree + 1):
            counts[total] += counts[total - part]
    return tuple(counts)


def w_power(state, i, j, k, w_offset=1):
    """w^k on legs (i, j): returns (sign, exponent, new state)."""
    sign, exp, s = 1, 0, list(state)
    for _ in range(k):
        # q^{-Lambda} on leg j, then q^{-H}, then q^{Lambda} on leg i, overall minus
        s[j] -= 1
        exp += -s[j] + (w_offset - 1)
        s[i] += 1
        sign = -sign
    return sign, exp, tuple(s)


def shear(state, i, j, direction):
    s = list(state)
    s[j] += direction * s[i]
    return tuple(s)


def factors(tag, i, j, kmax, w_offset):
    """Primitive moves of one word factor, in application order."""
    if tag == "S":
        return [("series", i, j, False), ("shear", i, j, 1)]
    if tag == "S_inv":
        return [("shear", i, j, -1), ("series", i, j, True)]
    if tag == "Sbar_qexp":
        return [("shear", i, j, -1)]
    raise ValueError(tag)


def paths(word, state, kmax, w_offset=1):
    """Yield (final state, sign, e0, [(k, euler)]) for every path."""
    moves = []
    for tag, (a, b) in reversed(word):
        moves += factors(tag, a - 1, b - 1, kmax, w_offset)

    def walk(idx, s, sign, e0, ks):
        if idx == len(moves):
            yield s, sign, e0, ks
            return
        kind, i, j, extra = moves[idx]
        if kind == "shear":
            yield from walk(idx + 1, shear(s, i, j, extra), sign, e0, ks)
            return
        for k in range(kmax + 1):
            sg, e, new = w_power(s, i, j, k, w_offset)
            if extra:
                # (w; q)_inf = sum_k (-1)^k q^{k(k-1)/2} w^k / (q;q)_k
                sg *= (-1) ** k
                e += k * (k - 1) // 2
            yield from walk(idx + 1, new, sign * sg, e0 + e, ks + [k])

    yield from walk(0, tuple(state), 1, 0, [])


def expand(word, state, order, kmax, w_offset=1):
    """{state: {exponent: coefficient}} exact through q^order."""
    out = {}
    for final, sign, e0, ks in paths(word, state, kmax, w_offset):
        if e0 > order:
            continue
        room = order - e0
        series = [Fraction(0)] * (room + 1)
        series[0] = Fraction(1)
        for k in ks:
            p = partitions_max_part(k, room)
            series = [sum(series[a] * p[t - a] for a in range(t + 1)) for t in range(room + 1)]
        coeff = out.setdefault(final, {})
        for t, c in enumerate(series):
            if c:
                coeff[e0 + t] = coeff.get(e0 + t, 0) + sign * c
    return {s: {e: c for e, c in cs.items() if c} for s, cs in out.items()}
