"""Fourier indices, the minimum of a form, and the certified dyadic trace.

Fourier indices are stored as ``N = 2T`` so that every key is integral.  The
dyadic trace works at the ``T`` scale: ``w(T)`` is the largest ``sum(alpha)``
over representations ``T = sum alpha_i v_i v_i'`` and is certified by a dual
form ``u`` with ``<u, T> = w(T)`` and ``m(u) >= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .exact import LPProblem, Q, fmt, simplex_max


class IndexError_(ValueError):
    """An index that is not symmetric positive semidefinite."""


# --- exact symmetric-matrix helpers -------------------------------------------

def _sym(m):
    m = [[Q(x) for x in r] for r in m]
    g = len(m)
    if any(len(r) != g for r in m):
        raise IndexError_("index matrix is not square")
    if any(m[i][j] != m[j][i] for i in range(g) for j in range(i)):
        raise IndexError_("index matrix is not symmetric")
    return m


def nonpositive_direction(m):
    """A rational vector w with w'mw <= 0, or None when m is positive definite."""
    m = [[Q(x) for x in r] for r in m]
    g = len(m)
    if g == 0:
        return None
    a = m[0][0]
    if a < 0:
        return [Fraction(1)] + [Fraction(0)] * (g - 1)
    if a == 0:
        j = next((j for j in range(1, g) if m[0][j] != 0), None)
        w = [Fraction(0)] * g
        w[0] = Fraction(1)
        if j is not None:
            w[0] = -(abs(m[j][j]) + 1) / m[0][j]
            w[j] = Fraction(1)
        return w
    schur = [[m[i][j] - m[i][0] * m[0][j] / a for j in range(1, g)] for i in range(1, g)]
    w = nonpositive_direction(schur)
    if w is None:
        return None
    return [-sum((m[0][j + 1] * w[j] for j in range(g - 1)), Fraction(0)) / a] + w


def is_positive_definite(m) -> bool:
    return nonpositive_direction(m) is None


def is_psd(m) -> bool:
    """Exact semidefiniteness by symmetric elimination."""
    a = [[Q(x) for x in r] for r in m]
    g = len(a)
    for k in range(g):
        p = a[k][k]
        if p < 0:
            return False
        if p == 0:
            if any(a[k][j] != 0 for j in range(k + 1, g)):
                return False
            continue
        for i in range(k + 1, g):
            f = a[i][k] / p
            if f:
                for j in range(k + 1, g):
                    a[i][j] -= f * a[k][j]
    return True


def integer_vector(w):
    den = 1
    for x in w:
        den = den * x.denominator // math.gcd(den, x.denominator)
    v = [int(x * den) for x in w]
    c = 0
    for x in v:
        c = math.gcd(c, x)
    return tuple(x // c for x in v) if c else tuple(v)


# --- Fourier indices ---------------------------------------------------------

@dataclass(frozen=True)
class FourierIndex:
    """Integral symmetric psd matrix N = 2T labelling the coefficient a(T)."""

    n: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.n)
        object.__setattr__(self, "n", rows)
        m = _sym(rows)
        if not is_psd(m):
            raise IndexError_(f"index {self.upper()} is not positive semidefinite")

    @classmethod
    def of(cls, n) -> FourierIndex:
        return n if isinstance(n, FourierIndex) else cls(tuple(map(tuple, n)))

    @classmethod
    def from_upper(cls, g: int, upper) -> FourierIndex:
        upper = list(upper)
        if len(upper) != g * (g + 1) // 2:
            raise ValueError(f"expected {g * (g + 1) // 2} upper-triangle entries, got {len(upper)}")
        m = [[0] * g for _ in range(g)]
        it = iter(upper)
        for i in range(g):
            for j in range(i, g):
                m[i][j] = m[j][i] = int(next(it))
        return cls(tuple(map(tuple, m)))

    @classmethod
    def parse(cls, text: str) -> FourierIndex:
        """Rows separated by ';', entries by ','; e.g. "2,-1;-1,2"."""
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(tuple(int(x) for x in row.split(",")) for row in text.split(";")))

    @classmethod
    def zero(cls, g: int) -> FourierIndex:
        return cls(tuple((0,) * g for _ in range(g)))

    @property
    def genus(self) -> int:
        return len(self.n)

    def upper(self) -> tuple:
        g = self.genus
        return tuple(self.n[i][j] for i in range(g) for j in range(i, g))

    def serialize(self) -> str:
        return ",".join(str(x) for x in self.upper())

    def __str__(self):
        return ";".join(",".join(str(x) for x in r) for r in self.n)

    @property
    def trace(self) -> int:
        return sum(self.n[i][i] for i in range(self.genus))

    @property
    def diagonal(self) -> tuple:
        return tuple(self.n[i][i] for i in range(self.genus))

    def is_definite(self) -> bool:
        return is_positive_definite(self.n)

    def block(self, other: FourierIndex, off=None) -> FourierIndex:
        """[[self, off], [off', other]]; off defaults to zero."""
        g1, g2 = self.genus, other.genus
        off = off or [[0] * g2 for _ in range(g1)]
        rows = [list(self.n[i]) + list(off[i]) for i in range(g1)]
        rows += [[off[i][j] for i in range(g1)] + list(other.n[j]) for j in range(g2)]
        return FourierIndex(tuple(map(tuple, rows)))

    def __add__(self, other):  # direct sum
        return self.block(other)

    def transform(self, U) -> FourierIndex:
        """U' N U."""
        g = self.genus
        NU = [[sum(self.n[i][k] * U[k][j] for k in range(g)) for j in range(g)] for i in range(g)]
        return FourierIndex(tuple(tuple(sum(U[k][i] * NU[k][j] for k in range(g)) for j in range(g))
                                  for i in range(g)))

    def permuted(self, perm) -> FourierIndex:
        return FourierIndex(tuple(tuple(self.n[perm[i]][perm[j]] for j in range(len(perm)))
                                  for i in range(len(perm))))

    def submatrix(self, idx) -> FourierIndex:
        return FourierIndex(tuple(tuple(self.n[i][j] for j in idx) for i in idx))


def psd_indices(g: int, max_trace: int | None = None, max_diag: int | None = None):
    """All integral symmetric psd g x g matrices with trace <= max_trace and diagonal <= max_diag."""
    if g == 0:
        yield FourierIndex(())
        return
    cap = max_diag if max_diag is not None else max_trace
    pairs = [(i, j) for i in range(g) for j in range(i + 1, g)]
    for diag in product(range(cap + 1), repeat=g):
        if max_trace is not None and sum(diag) > max_trace:
            continue
        ranges = [range(-math.isqrt(diag[i] * diag[j]), math.isqrt(diag[i] * diag[j]) + 1) for i, j in pairs]
        for off in product(*ranges):
            m = [[0] * g for _ in range(g)]
            for i in range(g):
                m[i][i] = diag[i]
            for (i, j), x in zip(pairs, off):
                m[i][j] = m[j][i] = x
            if is_psd(m):
                yield FourierIndex(tuple(map(tuple, m)))


# --- short vectors and the minimum -------------------------------------------

def short_vectors(form, bound, strict: bool = False):
    """Nonzero integer v (one of each pair +-v) with v'Fv <= bound (< bound if strict).

    Float Cholesky only proposes coordinate ranges, widened by one; every
    returned vector passes an exact check.
    """
    F = [[Q(x) for x in r] for r in form]
    g = len(F)
    bound = Q(bound)
    if not is_positive_definite(F):
        raise ValueError("short_vectors needs a positive definite form")
    q = [[float(x) for x in r] for r in F]
    for i in range(g):
        for j in range(i + 1, g):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, g):
            for l in range(k, g):
                q[k][l] -= q[k][i] * q[i][l]
    tol = 1e-9 * (float(bound) + 1)
    out, x = [], [0] * g

    def val(v):
        return sum(F[a][b] * v[a] * v[b] for a in range(g) for b in range(g) if v[a] and v[b])

    def rec(i, budget):
        c = -sum(q[i][j] * x[j] for j in range(i + 1, g))
        rad = math.sqrt(max(budget, 0.0) / q[i][i])
        for xi in range(math.ceil(c - rad) - 1, math.floor(c + rad) + 2):
            rest = budget - q[i][i] * (xi - c) ** 2
            if rest < -tol:
                continue
            x[i] = xi
            if i == 0:
                if any(x):
                    lead = next(t for t in x if t)
                    if lead > 0:
                        v = val(x)
                        if v < bound or (v == bound and not strict):
                            out.append((tuple(x), v))
            else:
                rec(i - 1, rest)
        x[i] = 0

    if g:
        rec(g - 1, float(bound))
    return out


def minimum(N) -> Fraction:
    """min of v'Nv over nonzero integer v; N must be positive definite."""
    m = [[Q(x) for x in r] for r in (N.n if isinstance(N, FourierIndex) else N)]
    if not m:
        raise ValueError("minimum of a genus-0 form")
    if not is_positive_definite(m):
        raise ValueError("minimum defined only for definite forms")
    best = max(m[i][i] for i in range(len(m)))  # the diagonal bounds m from above
    vals = [v for _, v in short_vectors(m, best)]
    result = min(vals)
    return int(result) if result.denominator == 1 else result


# --- dyadic trace --------------------------------------------------------------

@dataclass(frozen=True)
class DyadicCertificate:
    value: Fraction
    representation: tuple  # ((alpha, v), ...)
    dual_form: tuple        # rational symmetric u
    dual_minimum: Fraction  # m(u), >= 1

    def check(self, T) -> bool:
        T = [[Q(x) for x in r] for r in T]
        g = len(T)
        S = [[sum((a * v[i] * v[j] for a, v in self.representation), Fraction(0)) for j in range(g)]
             for i in range(g)]
        u = self.dual_form
        pair = sum((u[i][j] * T[i][j] for i in range(g) for j in range(g)), Fraction(0))
        return (S == T and sum(a for a, _ in self.representation) == self.value == pair
                and all(a > 0 for a, _ in self.representation)
                and minimum(u) >= 1)

    def __str__(self):
        rep = " + ".join(f"{fmt(a)}*{list(v)}" for a, v in self.representation)
        u = ";".join(",".join(fmt(x) for x in r) for r in self.dual_form)
        return f"w = {fmt(self.value)}\nrepresentation: {rep}\ndual form: {u}\nm(dual) = {fmt(self.dual_minimum)}"


def _upper_pairs(g):
    return [(i, j) for i in range(g) for j in range(i, g)]


def dyadic_trace(T, max_rounds: int = 64) -> DyadicCertificate:
    """Exact w(T) for rational positive definite T, by column generation.

    Columns are v v' for candidate integer v.  The LP dual gives a form u with
    v'uv >= 1 on the candidates; any integer v with v'uv < 1 is added as a new
    column until none exists, at which point u certifies optimality.
    """
    T = _sym(T)
    g = len(T)
    if g == 0:
        return DyadicCertificate(Fraction(0), (), (), Fraction(1))
    if not is_positive_definite(T):
        raise ValueError("dyadic trace needs a positive definite form")
    pairs = _upper_pairs(g)
    rhs = [T[i][j] for i, j in pairs]
    bound = Fraction(math.ceil(sum(T[i][i] for i in range(g))))
    Tinv = _inverse(T)
    cand: dict = {}

    def add(v):
        v = integer_vector([Fraction(x) for x in v])
        if any(v):
            lead = next(t for t in v if t)
            if lead < 0:
                v = tuple(-t for t in v)
            cand.setdefault(v, None)

    def enlarge(b):
        for v, _ in short_vectors(T, b):
            add(v)
        # the vectors of an optimal representation are short for T^-1
        for v, _ in short_vectors(Tinv, b):
            add(v)

    for i in range(g):
        add([int(i == k) for k in range(g)])
    enlarge(bound)
    for _ in range(max_rounds):
        vs = list(cand)
        cols = [[v[i] * v[j] for i, j in pairs] for v in vs]
        from .exact import Infeasible
        try:
            sol = simplex_max(LPProblem(tuple(map(tuple, cols)), tuple(rhs)))
        except Infeasible:
            bound *= 2
            enlarge(bound)
            continue
        u = [[Fraction(0)] * g for _ in range(g)]
        for (i, j), y in zip(pairs, sol.dual):
            if i == j:
                u[i][i] = y
            else:
                u[i][j] = u[j][i] = y / 2
        w = nonpositive_direction(u)
        if w is not None:
            add(integer_vector(w))
            bound *= 2
            enlarge(bound)
            continue
        viol = short_vectors(u, 1, strict=True)
        if viol:
            for v, _ in viol:
                add(v)
            continue
        rep = tuple((a, v) for a, v in zip(sol.weights, vs) if a > 0)
        cert = DyadicCertificate(sol.value, rep, tuple(map(tuple, u)), Fraction(minimum(u)))
        return cert
    raise RuntimeError("dyadic trace did not certify within the round limit")


def _inverse(m):
    from .exact import ExactMatrix
    return [list(r) for r in ExactMatrix(m).inverse().rows]


# --- translation lattices of the two cusps -------------------------------------

def _int_sym(S):
    S = [[int(x) for x in r] for r in S]
    g = len(S)
    if any(S[i][j] != S[j][i] for i in range(g) for j in range(g)):
        raise ValueError("matrix is not symmetric")
    return S


def is_tic_translation(S) -> bool:
    """t(S) lies in the theta group iff the diagonal of S is even."""
    S = _int_sym(S)
    return all(S[i][i] % 2 == 0 for i in range(len(S)))


def is_toc_translation(S, g: int | None = None) -> bool:
    """S I0 + S0 == 0 mod 2: every row sum plus the diagonal entry is even."""
    S = _int_sym(S)
    if g is not None and len(S) != g:
        raise ValueError("genus mismatch")
    return all((sum(row) + row[i]) % 2 == 0 for i, row in enumerate(S))


def _E(g, pairs):
    S = [[0] * g for _ in range(g)]
    for i, j in pairs:
        S[i][j] += 1
        if i != j:
            S[j][i] += 1
    return S


def toc_generators(g: int):
    """Generators of the TOC translation lattice: 2V, the diagonal, and triangles."""
    gens = []
    for i in range(g):
        for j in range(i, g):
            S = _E(g, [(i, j)])
            gens.append([[2 * x for x in r] for r in S])
    gens += [_E(g, [(i, i)]) for i in range(g)]
    gens += [_E(g, [(i, j), (j, k), (k, i)]) for i, j, k in combinations(range(g), 3)]
    return gens


def _mod2_vec(S):
    g = len(S)
    return [S[i][j] % 2 for i in range(g) for j in range(i, g)]


def toc_indices(g: int) -> tuple[int, int]:
    """([V:L], [L:2V]) by F2 linear algebra on V/2V."""
    from .symplectic import f2_rank
    dim = g * (g + 1) // 2
    # L/2V is the kernel of S -> (row sums of the off-diagonal part) mod 2
    rows = []
    for i in range(g):
        rows.append([int(a != b and i in (a, b)) for a in range(g) for b in range(a, g)])
    r = f2_rank(rows) if rows else 0
    # the generators must span the same kernel
    gens = [_mod2_vec(S) for S in toc_generators(g)]
    if f2_rank(gens) != dim - r:
        raise AssertionError("TOC generators do not span L/2V")
    return 2 ** r, 2 ** (dim - r)


def is_very_even(N) -> bool:
    """N in 4L*: <N, S> == 0 mod 4 for every generator S of L."""
    N = _int_sym(N.n if isinstance(N, FourierIndex) else N)
    g = len(N)
    for S in toc_generators(g):
        if sum(N[i][j] * S[i][j] for i in range(g) for j in range(g)) % 4:
            return False
    return True
