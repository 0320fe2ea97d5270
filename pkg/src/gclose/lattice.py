"""Exact lattice reduction over the rationals.

LLL with delta = 3/4 on integer basis vectors, all Gram-Schmidt data kept as
Fractions so the reduction is deterministic and exact.  The candidate
generator builds the standard simultaneous-approximation lattice for a list
of real characters: short vectors give integer combinations whose pairings
with every character are small.
"""

from __future__ import annotations

from fractions import Fraction

from .circle import CirclePoint

__all__ = ["lll_reduce", "approximation_candidates"]


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def lll_reduce(basis: list[list[int]], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """Lenstra-Lenstra-Lovasz reduction of linearly independent integer rows."""
    b = [list(row) for row in basis]
    n = len(b)
    if n == 0:
        return []

    def gram(rows):
        # orthogonalized rows bstar and coefficients mu
        bstar: list[list[Fraction]] = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = [Fraction(x) for x in rows[i]]
            for j in range(i):
                mu[i][j] = _dot(rows[i], bstar[j]) / _dot(bstar[j], bstar[j])
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
        return bstar, mu

    bstar, mu = gram(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                bstar, mu = gram(b)
        lhs = _dot(bstar[k], bstar[k])
        rhs = (delta - mu[k][k - 1] ** 2) * _dot(bstar[k - 1], bstar[k - 1])
        if lhs >= rhs:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            bstar, mu = gram(b)
            k = max(k - 1, 1)
    return b


def _rational_approx(point: CirclePoint, scale: int) -> Fraction:
    """A fraction within 1/scale of the point's value."""
    if point.is_rational:
        return Fraction(point.num, point.den)
    enc = point.enclosure(Fraction(1, scale))
    return (enc.lower + enc.upper) / 2


def approximation_candidates(
    characters: tuple[tuple[CirclePoint, ...], ...], scale: int
) -> list[tuple[int, ...]]:
    """Nonzero integer vectors a with every norm(<a, h_i>) plausibly small.

    Rows of the reduced lattice [[I_k | scale*H^T], [0 | scale*I_m]] with H
    approximated rationally: a short row encodes a together with integers
    b_i making |<a, h_i> - b_i| small.  Callers must verify the candidates
    exactly; nothing returned here carries a certificate.
    """
    m = len(characters)
    if m == 0:
        return []
    k = len(characters[0])
    approx = [
        [_rational_approx(p, scale * scale) for p in char] for char in characters
    ]
    rows: list[list[int]] = []
    for j in range(k):
        head = [1 if t == j else 0 for t in range(k)]
        tail = [round(Fraction(scale) * approx[i][j]) for i in range(m)]
        rows.append(head + tail)
    for i in range(m):
        rows.append([0] * k + [scale if t == i else 0 for t in range(m)])
    reduced = lll_reduce(rows)
    seen: set[tuple[int, ...]] = set()
    candidates: list[tuple[int, ...]] = []

    def push(vec):
        a = tuple(vec[:k])
        if not any(a):
            return
        if a[next(i for i, x in enumerate(a) if x)] < 0:
            a = tuple(-x for x in a)
        if a not in seen:
            seen.add(a)
            candidates.append(a)

    for row in reduced:
        push(row)
    for i in range(len(reduced)):
        for j in range(i + 1, len(reduced)):
            push([x + y for x, y in zip(reduced[i], reduced[j])])
            push([x - y for x, y in zip(reduced[i], reduced[j])])
    candidates.sort(key=lambda a: (max(abs(x) for x in a), a))
    return candidates
