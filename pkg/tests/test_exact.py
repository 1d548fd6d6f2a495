from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from dlattice import exact


def int_matrices(max_n=4, lo=-6, hi=6):
    return st.integers(1, max_n).flatmap(
        lambda m: st.integers(1, max_n).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                               min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_smith_form_is_diagonal_with_divisibility_chain(a):
    u, diag, v = exact.smith_normal_form(a)
    s = exact.matmul(exact.matmul(u, a), v)
    for i, row in enumerate(s):
        for j, x in enumerate(row):
            assert x == (diag[i] if i == j else 0)
    assert abs(exact.det(u)) == 1 and abs(exact.det(v)) == 1
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert diag[:len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_smith_known_case():
    _, diag, _ = exact.smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert diag == [2, 6, 12]


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_n=3, lo=-4, hi=4))
def test_hermite_rows_spans_same_group(rows):
    basis = exact.hermite_rows(rows)
    assert exact.rank(basis) == len(basis) == exact.rank(rows)
    # every original row is an integer combination of the basis (pivot structure makes it unique)
    for r in rows:
        rest = list(r)
        for b in basis:
            col = next(i for i, x in enumerate(b) if x)
            q, rem = divmod(rest[col], b[col])
            assert rem == 0
            rest = [x - q * y for x, y in zip(rest, b)]
        assert not any(rest)
    # same index in the common saturation, so the inclusion above is an equality
    def index(m):
        _, diag, _ = exact.smith_normal_form(m)
        out = 1
        for x in diag:
            out *= x or 1
        return out

    if basis:
        assert index(basis) == index(rows)


def test_det_and_inverse():
    a = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    assert exact.det(a) == 4
    inv = exact.inverse(a)
    assert exact.matmul(a, inv) == exact.identity(3)
    with pytest.raises(ZeroDivisionError):
        exact.inverse([[1, 2], [2, 4]])


def test_ldl_reconstructs_gram():
    g = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    r, d = exact.ldl(g)
    rt = exact.transpose(r)
    back = exact.matmul(exact.matmul(rt, [[d[i] if i == j else 0 for j in range(3)] for i in range(3)]), r)
    assert back == g
    with pytest.raises(ValueError):
        exact.ldl([[1, 2], [2, 1]])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=2, max_size=2))
def test_closest_points_against_scan(target):
    g = [[2, 1], [1, 3]]
    r, d = exact.ldl(g)
    best, pts = exact.closest_points(r, d, target, Fraction(100))
    scan = {}
    for k in product(range(-8, 9), repeat=2):
        diff = [a - b for a, b in zip(k, target)]
        scan[k] = exact.quad(g, diff)
    m = min(scan.values())
    assert best == m
    assert pts == sorted(k for k, q in scan.items() if q == m)


def test_points_within_counts():
    r, d = exact.ldl([[1, 0], [0, 1]])
    pts = {k for k, q in exact.points_within(r, d, Fraction(2))}
    assert len(pts) == 9


def test_budget_is_enforced():
    r, d = exact.ldl([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(exact.BudgetExceeded):
        list(exact.points_within(r, d, Fraction(50), budget=10))
