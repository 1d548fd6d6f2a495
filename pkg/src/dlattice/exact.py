"""Exact integer/rational matrix helpers.

Everything here works on plain lists of ``int`` or ``fractions.Fraction``;
there is no floating point anywhere.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

Matrix = list[list]


class BudgetExceeded(RuntimeError):
    """An enumeration ran past its configured node budget."""


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def quad(g: Sequence[Sequence], u: Sequence, v: Sequence | None = None):
    """Bilinear form u^T g v (v defaults to u)."""
    if v is None:
        v = u
    return dot(u, matvec(g, v))


def inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals. Raises ZeroDivisionError if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def det(a: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            if m[i][col] != 0:
                f = m[i][col] / m[r][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def smith_normal_form(a: Sequence[Sequence[int]]):
    """Return ``(U, diag, V)`` with ``U * a * V`` diagonal.

    ``U`` and ``V`` are unimodular, ``diag`` lists the nonnegative diagonal
    entries, and each entry divides the next.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    s = [list(row) for row in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        s[dst] = [x + q * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in s:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if s[i][j] and (piv is None or abs(s[i][j]) < abs(s[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            p = s[t][t]
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // p))
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // p))
            rest = [(abs(s[i][t]), i, None) for i in range(t + 1, m) if s[i][t]]
            rest += [(abs(s[t][j]), None, j) for j in range(t + 1, n) if s[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda r: r[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if s[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
    diag = [s[i][i] for i in range(min(m, n))]
    return u, diag, v


def hermite_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form: a basis of the integer row span."""
    pending = [list(r) for r in rows if any(r)]
    ncols = len(rows[0]) if rows else 0
    basis: list[list[int]] = []
    pivots: list[int] = []
    for col in range(ncols):
        if not pending:
            break
        active = [r for r in pending if r[col]]
        if not active:
            continue
        idle = [r for r in pending if not r[col]]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            p = active[0]
            survivors = [p]
            for r in active[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                if r[col]:
                    survivors.append(r)
                elif any(r):
                    idle.append(r)
            active = survivors
        p = active[0]
        if p[col] < 0:
            p = [-x for x in p]
        basis.append(p)
        pivots.append(col)
        pending = idle
    # reduce entries above each pivot into [0, pivot)
    for k, col in enumerate(pivots):
        for i in range(k):
            q = basis[i][col] // basis[k][col]
            if q:
                basis[i] = [x - q * y for x, y in zip(basis[i], basis[k])]
    return basis


def ldl(g: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact decomposition ``g = R^T diag(D) R`` with ``R`` unit upper triangular.

    Raises ValueError when ``g`` is not positive definite.
    """
    n = len(g)
    r = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    d: list[Fraction] = []
    for i in range(n):
        di = Fraction(g[i][i]) - sum(r[k][i] ** 2 * d[k] for k in range(i))
        if di <= 0:
            raise ValueError("Gram matrix is not positive definite")
        d.append(di)
        for j in range(i + 1, n):
            r[i][j] = (Fraction(g[i][j]) - sum(r[k][i] * r[k][j] * d[k] for k in range(i))) / di
    return r, d


class _Counter:
    __slots__ = ("left",)

    def __init__(self, budget: int):
        self.left = budget

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded("lattice enumeration budget exceeded")


def _level_candidates(center: Fraction, di: Fraction, room: Fraction) -> list[int]:
    # integers k with di*(k-center)^2 <= room, nearest first
    out = []
    k0 = round(center)
    k = k0
    while di * (k - center) ** 2 <= room:
        out.append(k)
        k += 1
    k = k0 - 1
    while di * (k - center) ** 2 <= room:
        out.append(k)
        k -= 1
    out.sort(key=lambda k: (abs(k - center), k))
    return out


def closest_points(r, d, target: Sequence[Fraction], bound: Fraction,
                   budget: int = 2_000_000) -> tuple[Fraction, list[tuple[int, ...]]]:
    """Minimise ``q(k - target)`` over integer vectors ``k``.

    ``q`` is the form with decomposition ``(r, d)``; only points with
    ``q <= bound`` are explored.  Returns the minimum and every minimiser.
    Depth-first, nearest-first, with the bound shrinking as better points
    turn up.
    """
    n = len(d)
    if n == 0:
        return Fraction(0), [()]
    k = [0] * n
    # nearest-plane point: a cheap upper bound that prunes the search below
    babai = Fraction(0)
    for i in reversed(range(n)):
        center = target[i] - sum(r[i][j] * (k[j] - target[j]) for j in range(i + 1, n))
        k[i] = round(center)
        babai += d[i] * (k[i] - center) ** 2
    best = [min(Fraction(bound), babai), []]
    counter = _Counter(budget)

    def descend(i: int, partial: Fraction):
        counter.tick()
        s = sum(r[i][j] * (k[j] - target[j]) for j in range(i + 1, n))
        center = target[i] - s
        for ki in _level_candidates(center, d[i], best[0] - partial):
            val = partial + d[i] * (ki - center) ** 2
            if val > best[0]:
                continue
            k[i] = ki
            if i == 0:
                if val < best[0]:
                    best[0] = val
                    best[1] = [tuple(k)]
                else:
                    best[1].append(tuple(k))
            else:
                descend(i - 1, val)

    descend(n - 1, Fraction(0))
    if not best[1]:
        raise ValueError("no lattice point within the initial bound")
    return best[0], sorted(best[1])


def points_within(r, d, bound: Fraction, budget: int = 2_000_000) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Yield every integer vector ``k`` with ``q(k) <= bound`` along with ``q(k)``."""
    n = len(d)
    if n == 0:
        yield (), Fraction(0)
        return
    k = [0] * n
    counter = _Counter(budget)

    def descend(i: int, partial: Fraction):
        counter.tick()
        center = -sum(r[i][j] * k[j] for j in range(i + 1, n))
        for ki in _level_candidates(center, d[i], bound - partial):
            k[i] = ki
            val = partial + d[i] * (ki - center) ** 2
            if i == 0:
                yield tuple(k), val
            else:
                yield from descend(i - 1, val)

    yield from descend(n - 1, Fraction(0))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


def common_denominator(values) -> int:
    den = 1
    for x in values:
        den = lcm(den, Fraction(x).denominator)
    return den
