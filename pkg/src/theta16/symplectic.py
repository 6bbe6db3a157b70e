"""Theta characteristics over F2 and the action of the integral symplectic group.

A characteristic is a pair (a, b) of vectors in F2^g.  The group acts on the
right by ``zeta . gamma = gamma' zeta + eps(gamma)`` with
``eps(gamma) = ((A'C)_0, (B'D)_0)`` where ``X_0`` is the diagonal of X.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product


def f2_rank(rows) -> int:
    """Rank over F2 of a list of 0/1 rows."""
    pivots: dict[int, int] = {}
    for r in rows:
        x = 0
        for k, bit in enumerate(r):
            if bit % 2:
                x |= 1 << k
        while x:
            top = x.bit_length() - 1
            if top not in pivots:
                pivots[top] = x
                break
            x ^= pivots[top]
    return len(pivots)


@dataclass(frozen=True, order=True)
class Characteristic:
    a: tuple
    b: tuple

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError("a and b must have the same length")
        object.__setattr__(self, "a", tuple(int(x) % 2 for x in self.a))
        object.__setattr__(self, "b", tuple(int(x) % 2 for x in self.b))

    @property
    def genus(self) -> int:
        return len(self.a)

    @property
    def parity(self) -> int:
        return sum(x * y for x, y in zip(self.a, self.b)) % 2

    def is_even(self) -> bool:
        return self.parity == 0

    @classmethod
    def zero(cls, g: int) -> Characteristic:
        return cls((0,) * g, (0,) * g)

    def __str__(self):
        return "[" + "".join(map(str, self.a)) + ";" + "".join(map(str, self.b)) + "]"


def all_characteristics(g: int):
    for a in product((0, 1), repeat=g):
        for b in product((0, 1), repeat=g):
            yield Characteristic(a, b)


def even_characteristics(g: int) -> list[Characteristic]:
    return [z for z in all_characteristics(g) if z.is_even()]


# --- integer matrix helpers ----------------------------------------------------

def _mul(X, Y):
    return tuple(tuple(sum(X[i][k] * Y[k][j] for k in range(len(Y))) for j in range(len(Y[0])))
                 for i in range(len(X)))


def _T(X):
    return tuple(zip(*X)) if X else ()


def _eye(g):
    return tuple(tuple(int(i == j) for j in range(g)) for i in range(g))


def _zero(g):
    return tuple((0,) * g for _ in range(g))


def _add(X, Y):
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(X, Y))


def _neg(X):
    return tuple(tuple(-x for x in r) for r in X)


def _diag(X):
    return tuple(X[i][i] for i in range(len(X)))


def _int_inverse(U):
    """Inverse of a unimodular integer matrix."""
    from .exact import ExactMatrix
    inv = ExactMatrix(U).inverse()
    if not inv.is_integral():
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in r) for r in inv.rows)


@dataclass(frozen=True)
class SymplecticMatrix:
    A: tuple
    B: tuple
    C: tuple
    D: tuple

    def __post_init__(self):
        for name in "ABCD":
            object.__setattr__(self, name, tuple(tuple(int(x) for x in r) for r in getattr(self, name)))
        if not self.is_symplectic():
            raise ValueError("blocks violate the symplectic relations")

    @property
    def genus(self) -> int:
        return len(self.A)

    def is_symplectic(self) -> bool:
        A, B, C, D = self.A, self.B, self.C, self.D
        g = len(A)
        AtC, BtD = _mul(_T(A), C), _mul(_T(B), D)
        return (AtC == _T(AtC) and BtD == _T(BtD)
                and _add(_mul(_T(A), D), _neg(_mul(_T(C), B))) == _eye(g))

    def __matmul__(self, o: SymplecticMatrix) -> SymplecticMatrix:
        A, B, C, D = self.A, self.B, self.C, self.D
        return SymplecticMatrix(_add(_mul(A, o.A), _mul(B, o.C)), _add(_mul(A, o.B), _mul(B, o.D)),
                                _add(_mul(C, o.A), _mul(D, o.C)), _add(_mul(C, o.B), _mul(D, o.D)))

    def inverse(self) -> SymplecticMatrix:
        return SymplecticMatrix(_T(self.D), _neg(_T(self.B)), _neg(_T(self.C)), _T(self.A))

    def epsilon(self) -> Characteristic:
        return Characteristic(_diag(_mul(_T(self.A), self.C)), _diag(_mul(_T(self.B), self.D)))


def identity(g: int) -> SymplecticMatrix:
    return SymplecticMatrix(_eye(g), _zero(g), _zero(g), _eye(g))


def t(S) -> SymplecticMatrix:
    g = len(S)
    return SymplecticMatrix(_eye(g), S, _zero(g), _eye(g))


def u(U) -> SymplecticMatrix:
    g = len(U)
    return SymplecticMatrix(U, _zero(g), _zero(g), _T(_int_inverse(U)))


def involution(g: int) -> SymplecticMatrix:
    return SymplecticMatrix(_zero(g), _eye(g), _neg(_eye(g)), _zero(g))


def lower(C) -> SymplecticMatrix:
    """(I 0; C I) for symmetric C."""
    g = len(C)
    return SymplecticMatrix(_eye(g), _zero(g), C, _eye(g))


def sym_unit(g: int, i: int, j: int):
    """E_ii, or E_ij + E_ji for i != j."""
    return tuple(tuple(int((r, c) in ((i, j), (j, i))) for c in range(g)) for r in range(g))


def elementary(g: int, i: int, j: int):
    """I + E_ij."""
    return tuple(tuple(int(r == c) + int((r, c) == (i, j)) for c in range(g)) for r in range(g))


def sign_flip(g: int, i: int):
    return tuple(tuple((-1 if r == i else 1) * int(r == c) for c in range(g)) for r in range(g))


def parabolic_generators(g: int) -> list[SymplecticMatrix]:
    """Generators of Delta_g(Z): translations t(S) over a basis of V_g(Z) and u(U)."""
    gens = [t(sym_unit(g, i, j)) for i in range(g) for j in range(i, g)]
    gens += [u(elementary(g, i, j)) for i in range(g) for j in range(g) if i != j]
    gens += [u(sign_flip(g, i)) for i in range(g)]
    return gens


def generators(g: int) -> list[SymplecticMatrix]:
    return parabolic_generators(g) + [involution(g)]


def random_word(g: int, length: int, rng: random.Random) -> SymplecticMatrix:
    gens = generators(g)
    gens += [x.inverse() for x in gens]
    w = identity(g)
    for _ in range(length):
        w = w @ rng.choice(gens)
    return w


# --- the action ------------------------------------------------------------------

def char_action(z: Characteristic, gamma: SymplecticMatrix) -> Characteristic:
    A, B, C, D = gamma.A, gamma.B, gamma.C, gamma.D
    g = gamma.genus
    if z.genus != g:
        raise ValueError("genus mismatch")
    e = gamma.epsilon()
    # gamma' = (A' C'; B' D')
    a = tuple((sum(A[k][i] * z.a[k] for k in range(g)) + sum(C[k][i] * z.b[k] for k in range(g)) + e.a[i]) % 2
              for i in range(g))
    b = tuple((sum(B[k][i] * z.a[k] for k in range(g)) + sum(D[k][i] * z.b[k] for k in range(g)) + e.b[i]) % 2
              for i in range(g))
    return Characteristic(a, b)


def in_theta_group_congruence(gamma: SymplecticMatrix) -> bool:
    ABt = _mul(gamma.A, _T(gamma.B))
    CDt = _mul(gamma.C, _T(gamma.D))
    return all(x % 2 == 0 for x in _diag(ABt) + _diag(CDt))


def in_theta_group_stabilizer(gamma: SymplecticMatrix) -> bool:
    return char_action(Characteristic.zero(gamma.genus), gamma) == Characteristic.zero(gamma.genus)


def is_theta_group(gamma: SymplecticMatrix) -> bool:
    """Membership in the theta group; the congruence and stabilizer tests must agree."""
    c = in_theta_group_congruence(gamma)
    s = in_theta_group_stabilizer(gamma)
    if c != s:
        raise AssertionError("congruence and stabilizer descriptions of the theta group disagree")
    return c


def coset_rep(z: Characteristic) -> SymplecticMatrix:
    """gamma_z = (I 0; diag(a) I)(I S; 0 I) with S a + S_0 = b, so that [0;0] . gamma_z = z."""
    if not z.is_even():
        raise ValueError(f"characteristic {z} is odd")
    g = z.genus
    a, b = z.a, z.b
    if not any(a):
        S = tuple(tuple(b[i] if i == j else 0 for j in range(g)) for i in range(g))
    else:
        beta = next(v for v in product((0, 1), repeat=g) if sum(x * y for x, y in zip(a, v)) % 2 == 1)
        S = tuple(tuple(beta[i] * b[j] + b[i] * beta[j] for j in range(g)) for i in range(g))
    gamma = lower(tuple(tuple(a[i] if i == j else 0 for j in range(g)) for i in range(g))) @ t(S)
    if char_action(Characteristic.zero(g), gamma) != z:
        raise AssertionError(f"coset representative for {z} has the wrong image")
    return gamma


def orbits(points, gens, act) -> list[list]:
    """Orbits of a finite set under the group generated by gens."""
    remaining = set(points)
    out = []
    for p in sorted(points):
        if p not in remaining:
            continue
        orbit, stack = {p}, [p]
        while stack:
            x = stack.pop()
            for h in gens:
                y = act(x, h)
                if y not in orbit:
                    orbit.add(y)
                    stack.append(y)
        remaining -= orbit
        out.append(sorted(orbit))
    return out


def double_coset_orbits(g: int) -> list[int]:
    """Sizes of the Delta_g(Z)-orbits on even characteristics, [0;*] orbit first."""
    orbs = orbits(even_characteristics(g), parabolic_generators(g), char_action)
    orbs.sort(key=lambda o: (any(o[0].a), len(o)))
    return [len(o) for o in orbs]


def trace_constants(g: int) -> tuple[int, int]:
    """Even characteristics split by the first entry of a."""
    ev = even_characteristics(g)
    first0 = sum(1 for z in ev if z.a[0] == 0)
    first1 = len(ev) - first0
    if first0 + first1 != 2 ** (g - 1) * (2 ** g + 1):
        raise AssertionError("even characteristic count is off")
    return first0, first1


def verify(g: int, words: int = 40, seed: int = 0) -> list[tuple[str, bool, str, str]]:
    """Count and orbit checks at genus g as (label, ok, lhs, rhs) rows."""
    rows = []
    ev = even_characteristics(g)
    rows.append((f"even_count g={g}", len(ev) == 2 ** (g - 1) * (2 ** g + 1),
                 str(len(ev)), str(2 ** (g - 1) * (2 ** g + 1))))
    odd = 4 ** g - len(ev)
    rows.append((f"odd_count g={g}", odd == 2 ** (g - 1) * (2 ** g - 1), str(odd), str(2 ** (g - 1) * (2 ** g - 1))))
    sizes = double_coset_orbits(g)
    want = [2 ** g, 2 ** (g - 1) * (2 ** g - 1)]
    rows.append((f"delta_orbits g={g}", sizes == want, ",".join(map(str, sizes)), ",".join(map(str, want))))
    tc = trace_constants(g)
    want_tc = (2 ** (g - 1) * (1 + 2 ** (g - 1)), 2 ** (2 * g - 2))
    rows.append((f"trace_constants g={g}", tc == want_tc, "%d,%d" % tc, "%d,%d" % want_tc))
    images = {char_action(Characteristic.zero(g), coset_rep(z)) for z in ev}
    rows.append((f"coset_reps_distinct g={g}", len(images) == len(ev), str(len(images)), str(len(ev))))
    from .qforms import toc_indices
    ti = toc_indices(g)
    want_ti = (2 ** (g - 1), 2 ** (1 + g * (g - 1) // 2))
    rows.append((f"toc_indices g={g}", ti == want_ti, "%d,%d" % ti, "%d,%d" % want_ti))
    rng = random.Random(seed)
    agree = True
    for _ in range(words):
        w = random_word(g, 8, rng)
        agree &= in_theta_group_congruence(w) == in_theta_group_stabilizer(w)
    rows.append((f"theta_group_tests_agree g={g}", agree, str(agree), "True"))
    return rows
