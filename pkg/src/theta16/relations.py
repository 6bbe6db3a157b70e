"""Linear relations among the eight genus-g theta series.

A coefficient vector w_g(N) lists the eight representation numbers at N.  The
six odd lattices carry the basis Xi^j = (0, 2^j, 4^j, 8^j, 16^j, 32^j) (the
norm-one counts raised to j) and its dual basis Xi_j; Theta_j = Xi_j . w.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import thetaengine as te
from .exact import det, rank, solve_dual_basis
from .lattices import LATTICE_IDS, build_lattice, shell_count
from .qforms import FourierIndex, psd_indices
from .symplectic import trace_constants

ODD = LATTICE_IDS[:6]
D4 = FourierIndex.parse("2,-1,0,0;-1,2,-1,-1;0,-1,2,0;0,-1,0,2")
C_VEC = (0, 0, 0, 0, 0, 0, 1, 1)
ONES8 = (1,) * 8


@lru_cache(maxsize=None)
def nodes() -> tuple:
    """Norm-one counts of the odd lattices."""
    return tuple(shell_count(build_lattice(i), 1) for i in ODD)


def xi_power(j: int) -> tuple:
    """Xi^j in dimension 6; Xi^0 is the all-ones vector."""
    return tuple(1 if j == 0 else x ** j for x in nodes())


def pad8(v) -> tuple:
    return tuple(v) + (0, 0)


@lru_cache(maxsize=None)
def xi_dual() -> tuple:
    """Xi_0..Xi_5 with Xi_j . Xi^k = delta_jk."""
    return tuple(solve_dual_basis([xi_power(k) for k in range(6)]))


def coefficient_vector(g: int, N) -> tuple:
    N = te._as_index(N)
    if N.genus != g:
        raise ValueError("genus mismatch")
    return tuple(te.rep_number(i, N) for i in LATTICE_IDS)


def sigma() -> tuple:
    return coefficient_vector(4, D4)


def filtration_rank(g: int, index_set) -> int:
    cols = [coefficient_vector(g, N) for N in index_set]
    return rank(cols) if cols else 0


def genus4_index_set() -> list[FourierIndex]:
    """All genus-4 indices with diagonal entries <= 2, plus D4."""
    idx = list(psd_indices(4, max_diag=2))
    if D4 not in idx:
        idx.append(D4)
    return idx


def relation4_det(N) -> Fraction:
    cols = [coefficient_vector(4, N), sigma()] + [pad8(xi_power(j)) for j in (4, 3, 2, 1)] + [C_VEC, ONES8]
    return det([list(r) for r in zip(*cols)])


def genus4_relation_check(N) -> bool:
    return relation4_det(N) == 0


# --- constants -----------------------------------------------------------------

def _det6(first) -> Fraction:
    cols = [tuple(first)] + [xi_power(j) for j in (4, 3, 2, 1, 0)]
    return det([list(r) for r in zip(*cols)])


def j4_at_d4() -> int:
    s = sigma()
    return s[6] - s[7]


def c0() -> Fraction:
    """(1/J(D4)) det(sigma, Xi^4..1) / det(Xi^5, Xi^4..1), sigma on the odd lattices."""
    return _det6(sigma()[:6]) / _det6(xi_power(5)) / j4_at_d4()


C0_CLOSED = Fraction(89 * 227, 2 ** 19 * 3 * 5 * 7 ** 2)
XI_CLOSED = Fraction(17 * 89 * 227, 2 ** 19 * 3 * 5 * 7 ** 2 * 33)


def xi_constant() -> Fraction:
    """Coefficient of J in Xi^(g)[0]: the genus-5 trace of Theta_5 is
    (#even characteristics with a_1 = 0) c0 J and the trace of J is index(5) J."""
    first0, first1 = trace_constants(5)
    return Fraction(first0, first0 + first1) * c0()


# --- combinations ----------------------------------------------------------------

def theta_combination(coeffs, g: int, max_trace: int | None = None) -> te.QExpansion:
    """sum_i r_i theta_i; r has 6 (odd lattices) or 8 entries."""
    r = tuple(Fraction(x) for x in coeffs)
    if len(r) not in (6, 8):
        raise ValueError("coefficients must have 6 or 8 entries")
    ids = LATTICE_IDS[:len(r)]
    integral = all(x.denominator == 1 for x in r)

    def fn(N):
        v = sum((x * te.rep_number(i, N) for x, i in zip(r, ids) if x), Fraction(0))
        return int(v) if integral else v

    e = te.lazy_expansion(g, fn, "integer" if integral else "rational")
    if max_trace is not None:
        e.coeffs = {N: fn(N) for N in psd_indices(g, max_trace)}
        e.bound = max_trace
    return e


def theta_j(j: int, g: int, max_trace: int | None = None) -> te.QExpansion:
    return theta_combination(xi_dual()[j], g, max_trace)


def theta_single(i: int, g: int, max_trace: int | None = None) -> te.QExpansion:
    r = [0] * 8
    r[i] = 1
    return theta_combination(r, g, max_trace)


def schottky(g: int, max_trace: int | None = None) -> te.QExpansion:
    return theta_combination((0, 0, 0, 0, 0, 0, 1, -1), g, max_trace)


def xi0(g: int, max_trace: int | None = None) -> te.QExpansion:
    """Theta_g - xi_constant J on the eight lattices."""
    r = list(xi_dual()[g]) + [0, 0]
    k = xi_constant()
    r[6] -= k
    r[7] += k
    return theta_combination(r, g, max_trace)


def we_check(g: int, N) -> bool:
    """theta(N) = sum_j Xi^j Theta_j(N) on the odd lattices."""
    w = coefficient_vector(g, N)[:6]
    th = [sum((x * y for x, y in zip(xi_dual()[j], w)), Fraction(0)) for j in range(6)]
    rebuilt = [sum(xi_power(j)[i] * th[j] for j in range(6)) for i in range(6)]
    return rebuilt == list(w)


# --- Witt images ---------------------------------------------------------------------

def _theta_named(name: str, g: int) -> te.QExpansion:
    if name == "t0":  # theta of the first lattice
        return theta_single(0, g)
    if name == "J":
        return schottky(g)
    return theta_j(int(name[1:]), g)


# label: (g1, g2, left term, [(coefficient, left factor, right factor), ...])
WITT_IDENTITIES = {
    "psi11_T2": (1, 1, "T2", [(1, "T1", "T1")]),
    "psi13_T4": (1, 3, "T4", [(1, "T1", "T3")]),
    "psi22_T4": (2, 2, "T4", [(1, "T2", "T2")]),
    "psi13_T3": (1, 3, "T3", [(1, "T1", "T2"), (1, "t0", "T3")]),
    "psi13_T2": (1, 3, "T2", [(1, "T1", "T1"), (1, "t0", "T2")]),
    "psi13_T1": (1, 3, "T1", [(1, "T1", "t0"), (1, "t0", "T1")]),
    "psi14_T5": (1, 4, "T5", [(1, "T1", "T4"), (62, "T1", "c0J"), (1, "t0", "c0J")]),
}


def _factor(name: str, g: int, N):
    if name == "c0J":
        return c0() * schottky(g)[N]
    return _theta_named(name, g)[N]


def witt_sides(identity: str, N1, N2):
    g1, g2, left, terms = WITT_IDENTITIES[identity]
    N1, N2 = te._as_index(N1), te._as_index(N2)
    if (N1.genus, N2.genus) != (g1, g2):
        raise ValueError(f"{identity} needs blocks of genus {g1} and {g2}")
    lhs = te.witt_coefficient(_theta_named(left, g1 + g2), N1, N2)
    rhs = sum((c * _factor(a, g1, N1) * _factor(b, g2, N2) for c, a, b in terms), Fraction(0))
    return Fraction(lhs), rhs


def witt_identity_check(identity: str, N1, N2) -> bool:
    lhs, rhs = witt_sides(identity, N1, N2)
    return lhs == rhs


XI6_COEFFS = (62, -1240, 9920, -31744, 32768)  # Xi^6 = sum c_k Xi^(5-k)


def power_identity() -> bool:
    lhs = xi_power(6)
    rhs = tuple(sum(c * xi_power(5 - k)[i] for k, c in enumerate(XI6_COEFFS)) for i in range(6))
    return lhs == rhs


def power_identity_from_roots() -> tuple:
    """(c5, ..., c1) with x^6 = sum c_k x^k on the nodes, from x * prod(x - r) over nonzero r."""
    poly = [1]  # highest degree first
    for r in nodes():
        if r:
            poly = [a - r * b for a, b in zip(poly + [0], [0] + poly)]
    return tuple(-c for c in poly[1:])


# --- genus-1 series ------------------------------------------------------------------

@dataclass
class HalfIntSeries:
    """sum c[n] q^(n/2), exact through n <= bound."""

    coeffs: list
    bound: int

    def __post_init__(self):
        self.coeffs = (list(self.coeffs) + [0] * (self.bound + 1))[:self.bound + 1]

    def __getitem__(self, n: int):
        if n > self.bound:
            raise KeyError(f"q^{n}/2 lies beyond the bound {self.bound}")
        return self.coeffs[n] if n >= 0 else 0

    def __mul__(self, other):
        if isinstance(other, HalfIntSeries):
            b = min(self.bound, other.bound)
            out = [0] * (b + 1)
            for i, x in enumerate(self.coeffs[:b + 1]):
                if x:
                    for j, y in enumerate(other.coeffs[:b + 1 - i]):
                        out[i + j] += x * y
            return HalfIntSeries(out, b)
        return HalfIntSeries([x * other for x in self.coeffs], self.bound)

    __rmul__ = __mul__

    def __add__(self, other):
        b = min(self.bound, other.bound)
        return HalfIntSeries([self[i] + other[i] for i in range(b + 1)], b)

    def __sub__(self, other):
        return self + other * -1

    def __pow__(self, k: int):
        out = HalfIntSeries([1], self.bound)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> HalfIntSeries:
        return HalfIntSeries([0] * k + self.coeffs[:self.bound + 1 - k], self.bound)


def eta_power_series(power: int, bound: int) -> HalfIntSeries:
    """prod_n (1 - q^n)^power in the variable q^(1/2)."""
    out = HalfIntSeries([1], bound)
    for n in range(1, bound // 2 + 1):
        f = [0] * (bound + 1)
        f[0] = 1
        f[2 * n] = -1
        out = out * HalfIntSeries(f, bound) ** power
    return out


def theta0_series(bound: int) -> HalfIntSeries:
    """sum_m q^(m^2/2)."""
    c = [0] * (bound + 1)
    m = 0
    while m * m <= bound:
        c[m * m] += 1 if m == 0 else 2
        m += 1
    return HalfIntSeries(c, bound)


def genus1_xi0_series(bound: int) -> HalfIntSeries:
    """eta^12 theta_0^4 = q^(1/2) prod(1 - q^n)^12 (sum q^(m^2/2))^4."""
    return (eta_power_series(12, bound) * theta0_series(bound) ** 4).shift(1)


def slope_table(g: int) -> tuple:
    mu = Fraction(2 ** g, 2 ** g + 1)
    return mu, 8 / mu
