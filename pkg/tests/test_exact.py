from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from theta16.exact import (
    ExactMatrix, GaussianRational, Infeasible, LPProblem, RankError, Unbounded,
    det, fmt, inverse, rank, simplex_max, solve, solve_dual_basis,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussianRational, rationals, rationals)


def leibniz(m):
    n = len(m)
    total = Fraction(0)
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= m[i][p[i]]
        total += term
    return total


def square(n):
    return st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)


@given(gauss, gauss, gauss)
def test_gaussian_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a * b).norm() == a.norm() * b.norm()


@given(gauss, gauss)
def test_gaussian_division(a, b):
    if b:
        assert (a / b) * b == a
    else:
        with pytest.raises(ZeroDivisionError):
            a / b


def test_gaussian_powers_and_format():
    i = GaussianRational(0, 1)
    assert i ** 2 == -1 and i ** 4 == 1 and i ** -1 == -i
    assert str(GaussianRational(Fraction(1, 2), -3)) == "1/2-3i"
    assert fmt(Fraction(-6, 4)) == "-3/2" and fmt(7) == "7"
    with pytest.raises(TypeError):
        fmt(0.5)


@given(square(4))
def test_det_matches_leibniz(m):
    assert det(m) == leibniz([[Fraction(x) for x in r] for r in m])


@given(square(3), square(3))
def test_det_multiplicative(a, b):
    A, B = ExactMatrix(a), ExactMatrix(b)
    assert (A @ B).det() == A.det() * B.det()


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_vandermonde(n):
    xs = [Fraction(k * k + 1, k + 2) for k in range(n)]
    want = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            want *= xs[j] - xs[i]
    assert det([[x ** k for k in range(n)] for x in xs]) == want


def test_repeated_row_and_rank():
    m = [[1, 2, 3], [4, 5, 6], [1, 2, 3]]
    assert det(m) == 0 and rank(m) == 2
    with pytest.raises(RankError):
        inverse(ExactMatrix(m))


@given(square(3))
def test_inverse_and_solve(m):
    A = ExactMatrix(m)
    if A.det() == 0:
        return
    assert A @ inverse(A) == ExactMatrix.identity(3)
    b = [1, -2, 3]
    x = solve(A, b)
    assert [sum(A[i, j] * x[j] for j in range(3)) for i in range(3)] == b


def test_dual_basis():
    vs = [(1, 1, 1), (0, 2, 4), (0, 4, 16)]
    du = solve_dual_basis(vs)
    for j in range(3):
        for k in range(3):
            assert sum(a * b for a, b in zip(du[j], vs[k])) == (j == k)
    with pytest.raises(RankError):
        solve_dual_basis([(1, 2), (2, 4)])


def test_simplex_textbook():
    # max x1 + x2 with x1 + 2x2 + s1 = 4, 3x1 + x2 + s2 = 6
    p = LPProblem(((1, 3), (2, 1), (1, 0), (0, 1)), (4, 6), (1, 1, 0, 0))
    sol = simplex_max(p)
    assert sol.value == Fraction(14, 5)
    assert sol.weights[:2] == (Fraction(8, 5), Fraction(6, 5))
    assert sum(y * b for y, b in zip(sol.dual, p.rhs)) == sol.value


def test_simplex_degenerate_duplicate_columns():
    p = LPProblem(((1, 0), (1, 0), (0, 1), (1, 1)), (2, 3))
    sol = simplex_max(p)
    assert sol.value == 5


def test_simplex_negative_rhs():
    p = LPProblem(((-1,), (1,)), (-3,), (0, -1))
    sol = simplex_max(p)
    assert sol.value == 0 and sol.weights[0] == 3


def test_simplex_infeasible_and_unbounded():
    with pytest.raises(Infeasible):
        simplex_max(LPProblem(((1,), (1,)), (-1,)))
    with pytest.raises(Unbounded):
        simplex_max(LPProblem(((1,), (-1,)), (1,), (1, 1)))
