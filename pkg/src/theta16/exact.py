"""Exact scalars, dense rational matrices and a small rational simplex solver.

Nothing in here rounds.  Rationals are :class:`fractions.Fraction`; Gaussian
rationals and matrices are thin immutable wrappers around them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


def Q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, GaussianRational):
        if x.im:
            raise ValueError(f"{x} is not real")
        return x.re
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact values")
    return Fraction(x)


def fmt(x) -> str:
    """Exact string form: integers plainly, rationals as p/q."""
    if isinstance(x, GaussianRational):
        return str(x)
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Q(re))
        object.__setattr__(self, "im", Q(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conj(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        p = self * o.conj()
        return GaussianRational(p.re / n, p.im / n)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(1) / self ** (-k)
        result, base = GaussianRational(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussianRational({fmt(self.re)}, {fmt(self.im)})"

    def __str__(self):
        if not self.im:
            return fmt(self.re)
        if not self.re:
            return f"{fmt(self.im)}i"
        sign = "-" if self.im < 0 else "+"
        return f"{fmt(self.re)}{sign}{fmt(abs(self.im))}i"


I = GaussianRational(0, 1)


class RankError(ValueError):
    """Raised when a linear system that must be regular is singular."""


class ExactMatrix:
    """Dense row-major matrix of Fractions."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(Q(x) for x in r) for r in rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> ExactMatrix:
        return cls(zip(*cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"ExactMatrix({[[fmt(x) for x in r] for r in self.rows]})"

    @property
    def T(self) -> ExactMatrix:
        return ExactMatrix(zip(*self.rows)) if self.nrows else ExactMatrix([])

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows))
        return ExactMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])

    def __add__(self, other):
        return ExactMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return ExactMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c) -> ExactMatrix:
        c = Q(c)
        return ExactMatrix([[c * a for a in r] for r in self.rows])

    def tolist(self):
        return [list(r) for r in self.rows]

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.rows for x in r)

    def det(self) -> Fraction:
        return det(self)

    def rank(self) -> int:
        return rank(self.rows)

    def inverse(self) -> ExactMatrix:
        return inverse(self)


def _echelon(rows, ncols):
    """Gauss-Jordan on a copy; returns (reduced rows, pivot columns, sign of row swaps)."""
    a = [list(r) for r in rows]
    pivots, r, sign = [], 0, 1
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            sign = -sign
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots, sign


def det(m) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    rows = m.rows if isinstance(m, ExactMatrix) else m
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    den = 1
    for r in rows:
        for x in r:
            den = den * Q(x).denominator // _gcd(den, Q(x).denominator)
    a = [[int(Q(x) * den) for x in r] for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], den ** n)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def rank(rows) -> int:
    rows = [[Q(x) for x in r] for r in rows]
    if not rows:
        return 0
    return len(_echelon(rows, len(rows[0]))[1])


def inverse(m: ExactMatrix) -> ExactMatrix:
    n = m.nrows
    if m.ncols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.rows)]
    red, piv, _ = _echelon(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise RankError("matrix is singular")
    return ExactMatrix([r[n:] for r in red])


def solve(m: ExactMatrix, b: Sequence) -> list[Fraction]:
    """Solve m x = b for square regular m."""
    n = m.nrows
    aug = [list(r) + [Q(bi)] for r, bi in zip(m.rows, b)]
    red, piv, _ = _echelon(aug, n + 1)
    if piv[:n] != list(range(n)) or len(piv) > n:
        raise RankError("system is singular")
    return [r[n] for r in red[:n]]


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def solve_dual_basis(vectors: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Return the dual basis: out[j] . vectors[k] == (j == k)."""
    n = len(vectors)
    if any(len(v) != n for v in vectors):
        raise ValueError("need n vectors of dimension n")
    m = ExactMatrix(vectors)  # rows are the vectors
    try:
        inv = inverse(m)  # m @ inv = I, so columns of inv are the duals
    except RankError as exc:
        raise RankError(f"vectors are linearly dependent (rank {rank(m.rows)} < {n})") from exc
    return [tuple(col) for col in zip(*inv.rows)]


# --- linear programming -------------------------------------------------------

class LPError(Exception):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


@dataclass(frozen=True)
class LPProblem:
    """maximize c.x subject to A x = b, x >= 0.  ``columns`` are the columns of A."""

    columns: tuple
    rhs: tuple
    objective: tuple | None = None  # defaults to all ones

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(tuple(Q(x) for x in c) for c in self.columns))
        object.__setattr__(self, "rhs", tuple(Q(x) for x in self.rhs))
        obj = self.objective if self.objective is not None else [1] * len(self.columns)
        object.__setattr__(self, "objective", tuple(Q(x) for x in obj))


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    weights: tuple  # primal, one per column
    dual: tuple     # y with y.b == value and y.A_j >= c_j


def simplex_max(p: LPProblem) -> LPSolution:
    """Two-phase tableau simplex over the rationals with Bland's rule.

    The returned dual vector is checked against the primal: equal objective
    values and dual feasibility on every column, exactly.
    """
    m, n = len(p.rhs), len(p.columns)
    A = [[p.columns[j][i] for j in range(n)] for i in range(m)]
    b = list(p.rhs)
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    # columns 0..n-1 structural, n..n+m-1 artificial
    T = [A[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m

    def run(cost, allowed):
        # reduced costs r_j = cost_j - cost_B . column_j; maximise
        while True:
            cb = [cost[basis[i]] for i in range(m)]
            enter = None
            for j in range(width):
                if not allowed(j) or j in basis:
                    continue
                rj = cost[j] - sum(cb[i] * T[i][j] for i in range(m))
                if rj > 0:
                    enter = j
                    break
            if enter is None:
                return
            leave, best = None, None
            for i in range(m):
                if T[i][enter] > 0:
                    ratio = T[i][-1] / T[i][enter]
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        leave, best = i, ratio
            if leave is None:
                raise Unbounded("objective is unbounded")
            pivot(leave, enter)

    def pivot(r, c):
        inv = 1 / T[r][c]
        T[r] = [x * inv for x in T[r]]
        for i in range(m):
            if i != r and T[i][c] != 0:
                f = T[i][c]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        basis[r] = c

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(phase1, lambda j: True)
    if any(T[i][-1] != 0 for i in range(m) if basis[i] >= n):
        raise Infeasible("no feasible point")
    # drive remaining (zero-level) artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            c = next((j for j in range(n) if T[i][j] != 0), None)
            if c is not None:
                pivot(i, c)
    cost = list(p.objective) + [Fraction(0)] * m
    run(cost, lambda j: j < n)

    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    value = sum((cj * xj for cj, xj in zip(p.objective, x)), Fraction(0))
    # dual y solves B^T y = c_B over the original (sign-adjusted) rows
    B = [[A[i][basis[k]] if basis[k] < n else Fraction(int(i == basis[k] - n)) for i in range(m)]
         for k in range(m)]
    cB = [cost[basis[k]] for k in range(m)]
    y = _solve_any(B, cB)
    sign = [1 if Q(p.rhs[i]) >= 0 else -1 for i in range(m)]
    y = tuple(s * yi for s, yi in zip(sign, y))
    if dot(y, p.rhs) != value:
        raise LPError("strong duality check failed")
    for j in range(n):
        if dot(y, p.columns[j]) < p.objective[j]:
            raise LPError("dual certificate infeasible")
    return LPSolution(value, tuple(x), y)


def _solve_any(rows, rhs):
    """One solution of rows @ y = rhs (consistent system, possibly redundant rows)."""
    m = len(rows[0])
    aug = [list(r) + [Q(v)] for r, v in zip(rows, rhs)]
    red, piv, _ = _echelon(aug, m + 1)
    if m in piv:
        raise LPError("dual system inconsistent")
    y = [Fraction(0)] * m
    for r, c in zip(red, piv):
        y[c] = r[m]
    return y
