"""The eight self-dual lattices of rank 16, built from root lattices by gluing.

Lattice vectors are rows of a rational basis matrix in ambient coordinates
(denominators divide 4).  ``Λ1`` and ``Λ2`` need 17 and 18 ambient
coordinates because ``A15`` and ``E7`` sit in hyperplanes; only the Gram
matrix enters any count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from . import kernels
from .exact import ExactMatrix, det

LATTICE_IDS = tuple(f"L{i}" for i in range(8))

NAMES = {
    "L0": "(D8+D8)+",
    "L1": "Z+A15+",
    "L2": "Z2+(E7+E7)+",
    "L3": "Z4+D12+",
    "L4": "Z8+E8",
    "L5": "Z16",
    "L6": "E8+E8",
    "L7": "D16+",
}


class GlueError(ValueError):
    pass


@dataclass(frozen=True)
class LatticeBasis:
    id: str
    basis: ExactMatrix  # rows are basis vectors
    gram: tuple

    @property
    def rank(self) -> int:
        return self.basis.nrows

    @property
    def ambient(self) -> int:
        return self.basis.ncols

    @property
    def det(self) -> int:
        return int(det(self.gram))

    @property
    def gram_array(self) -> np.ndarray:
        return _gram_array(self.gram)

    def is_even(self) -> bool:
        # the diagonal of an integral Gram decides parity of every vector
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def parity(self) -> str:
        return "even" if self.is_even() else "odd"

    def is_unimodular(self) -> bool:
        return abs(self.det) == 1 and ExactMatrix(self.gram).inverse().is_integral()

    def norm(self, x) -> int:
        G = self.gram
        return sum(x[i] * G[i][j] * x[j] for i in range(self.rank) for j in range(self.rank))

    def embed(self, x) -> tuple:
        """Ambient coordinates of the lattice vector with basis coordinates x."""
        rows = self.basis.rows
        return tuple(sum((x[i] * rows[i][k] for i in range(self.rank)), Fraction(0))
                     for k in range(self.ambient))


@lru_cache(maxsize=None)
def _gram_array(gram):
    a = np.array(gram, dtype=np.int64)
    a.setflags(write=False)
    return a


def from_rows(id: str, rows, reduce: bool = True) -> LatticeBasis:
    basis = _lattice_basis(rows)
    if reduce:
        basis = lll(basis)
    m = ExactMatrix(basis)
    gram = m @ m.T
    if not gram.is_integral():
        raise GlueError(f"{id}: Gram matrix is not integral")
    return LatticeBasis(id, m, tuple(tuple(int(x) for x in r) for r in gram.rows))


def _lattice_basis(rows):
    """Z-basis (echelon form) of the lattice generated by rational rows."""
    rows = [[Fraction(x) for x in r] for r in rows]
    den = 1
    for r in rows:
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
    a = [[int(x * den) for x in r] for r in rows]
    ncols = len(a[0])
    out, r0 = [], 0
    for c in range(ncols):
        live = [i for i in range(r0, len(a)) if a[i][c] != 0]
        if not live:
            continue
        # Euclid down the column until one row holds the gcd
        while len(live) > 1:
            live.sort(key=lambda i: abs(a[i][c]))
            p = live[0]
            for i in live[1:]:
                q = a[i][c] // a[p][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[p])]
            live = [i for i in live if a[i][c] != 0]
        p = live[0]
        if a[p][c] < 0:
            a[p] = [-x for x in a[p]]
        a[r0], a[p] = a[p], a[r0]
        for i in range(r0):
            q = a[i][c] // a[r0][c]
            a[i] = [x - q * y for x, y in zip(a[i], a[r0])]
        r0 += 1
    out = [[Fraction(x, den) for x in r] for r in a[:r0]]
    return out


def lll(basis, delta=Fraction(3, 4)):
    """Exact LLL reduction of a list of rational row vectors."""
    b = [list(r) for r in basis]
    n = len(b)

    def ip(u, v):
        return sum((x * y for x, y in zip(u, v)), Fraction(0))

    def gso():
        bstar, mu, B = [], [[Fraction(0)] * n for _ in range(n)], []
        for i in range(n):
            v = list(b[i])
            for j in range(i):
                mu[i][j] = ip(b[i], bstar[j]) / B[j]
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            B.append(ip(v, v))
        return mu, B

    mu, B = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                for l in range(j + 1):
                    mu[k][l] -= q * (mu[j][l] if l < j else 1)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, B = gso()
            k = max(k - 1, 1)
    return b


# --- root lattices -----------------------------------------------------------

def _e(n, i, v=1):
    x = [0] * n
    x[i] = v
    return x


def Z(n: int) -> LatticeBasis:
    return from_rows(f"Z{n}", [_e(n, i) for i in range(n)], reduce=False)


def D(n: int) -> LatticeBasis:
    rows = [[int(k == i) - int(k == i + 1) for k in range(n)] for i in range(n - 1)]
    rows.append([int(k >= n - 2) for k in range(n)])
    return from_rows(f"D{n}", rows, reduce=False)


def A(n: int) -> LatticeBasis:
    """A_n in the sum-zero hyperplane of R^(n+1)."""
    rows = [[int(k == i) - int(k == i + 1) for k in range(n + 1)] for i in range(n)]
    return from_rows(f"A{n}", rows, reduce=False)


def half(n, signs=None):
    signs = signs or [1] * n
    return [Fraction(s, 2) for s in signs]


def E8() -> LatticeBasis:
    return glue(D(8), [half(8)], id="E8")


def E7() -> LatticeBasis:
    """E7 as the vectors of E8 with coordinate sum zero."""
    a7 = from_rows("A7", [[int(k == i) - int(k == i + 1) for k in range(8)] for i in range(7)], reduce=False)
    return glue(a7, [half(8, [1, 1, 1, 1, -1, -1, -1, -1])], id="E7")


def glue_class(i: int, n: int):
    """The A_n glue vector [i]: j coordinates i/(n+1) then i coordinates -j/(n+1)."""
    j = n + 1 - i
    return [Fraction(i, n + 1)] * j + [Fraction(-j, n + 1)] * i


def direct_sum(*parts: LatticeBasis, id: str | None = None, reduce: bool = False) -> LatticeBasis:
    width = sum(p.ambient for p in parts)
    rows, off = [], 0
    for p in parts:
        for r in p.basis.rows:
            rows.append([Fraction(0)] * off + list(r) + [Fraction(0)] * (width - off - p.ambient))
        off += p.ambient
    return from_rows(id or "+".join(p.id for p in parts), rows, reduce=reduce)


def glue(base: LatticeBasis, glue_vectors, id: str | None = None, reduce: bool = True) -> LatticeBasis:
    """Overlattice of ``base`` generated by adding the glue vectors."""
    basis = [list(r) for r in base.basis.rows]
    gv = [[Fraction(x) for x in v] for v in glue_vectors]
    for v in gv:
        if len(v) != base.ambient:
            raise GlueError(f"glue vector has {len(v)} coordinates, base lives in {base.ambient}")
        pair = [sum((a * b for a, b in zip(v, r)), Fraction(0)) for r in basis]
        bad = [p for p in pair if p.denominator != 1]
        if bad:
            raise GlueError(f"glue vector {[str(x) for x in v]} pairs non-integrally with the base: {bad[0]}")
        if sum(x * x for x in v).denominator != 1:
            raise GlueError(f"glue vector {[str(x) for x in v]} has non-integral norm {sum(x * x for x in v)}")
    for a in range(len(gv)):
        for b in range(a):
            p = sum((x * y for x, y in zip(gv[a], gv[b])), Fraction(0))
            if p.denominator != 1:
                raise GlueError(f"glue vectors {a} and {b} pair to {p}")
    new = from_rows(id or base.id + "+", basis + gv, reduce=reduce)
    if new.rank != base.rank:
        raise GlueError("glue vectors leave the span of the base lattice")
    return new


@lru_cache(maxsize=None)
def build_lattice(id: str) -> LatticeBasis:
    if id == "L0":
        d8 = direct_sum(D(8), D(8))
        w12 = half(8) + [0] * 7 + [1]
        w21 = [0] * 7 + [1] + half(8)
        w33 = half(8, [1] * 7 + [-1]) * 2
        return glue(d8, [w12, w21, w33], id="L0")
    if id == "L1":
        a15p = glue(A(15), [glue_class(4, 15)], id="A15+")
        return direct_sum(Z(1), a15p, id="L1", reduce=True)
    if id == "L2":
        e77 = direct_sum(E7(), E7())
        g = [Fraction(1, 4)] * 6 + [Fraction(-3, 4)] * 2
        e77p = glue(e77, [g + g], id="(E7+E7)+")
        return direct_sum(Z(2), e77p, id="L2", reduce=True)
    if id == "L3":
        return direct_sum(Z(4), glue(D(12), [half(12)], id="D12+"), id="L3", reduce=True)
    if id == "L4":
        return direct_sum(Z(8), E8(), id="L4", reduce=True)
    if id == "L5":
        return from_rows("L5", [_e(16, i) for i in range(16)], reduce=False)
    if id == "L6":
        return direct_sum(E8(), E8(), id="L6")
    if id == "L7":
        return glue(D(16), [half(16)], id="L7")
    raise KeyError(f"unknown lattice id {id!r}")


def catalog() -> list[LatticeBasis]:
    return [build_lattice(i) for i in LATTICE_IDS]


# --- shells ------------------------------------------------------------------

@dataclass(frozen=True)
class NormShell:
    lattice: str
    norm: int
    vectors: tuple

    def __len__(self):
        return len(self.vectors)


def canonical_order(vecs: np.ndarray) -> np.ndarray:
    """Positive half (first nonzero coordinate > 0) sorted, then the negatives in the same order."""
    if len(vecs) == 0:
        return vecs
    nz = vecs != 0
    first = np.argmax(nz, axis=1)
    lead = vecs[np.arange(len(vecs)), first]
    pos = vecs[lead > 0]
    if not nz.any(axis=1).all():  # the zero vector, only in the norm-0 shell
        return vecs[~nz.any(axis=1)]
    pos = pos[np.lexsort(pos.T[::-1])]
    return np.ascontiguousarray(np.vstack([pos, -pos]))


_SHELLS: dict = {}


def shell_array(lat: LatticeBasis, n: int, backend=None) -> np.ndarray:
    """Canonically ordered vectors of norm n, as an int64 array (read-only, cached)."""
    key = (lat.gram, n)
    arr = _SHELLS.get(key)
    if arr is None:
        if n < 0:
            arr = np.zeros((0, lat.rank), dtype=np.int64)
        else:
            raw = kernels.backend(backend).shell(lat.gram_array, n)
            arr = canonical_order(raw)
        arr.setflags(write=False)
        _SHELLS[key] = arr
    return arr


def shell_count(lat: LatticeBasis, n: int, backend=None) -> int:
    key = (lat.gram, n)
    if key in _SHELLS:
        return len(_SHELLS[key])
    return kernels.backend(backend).shell_count(lat.gram_array, n) if n >= 0 else 0


def norm_shell(lat: LatticeBasis, n: int) -> NormShell:
    if n < 0:
        raise ValueError("norm must be nonnegative")
    arr = shell_array(lat, n)
    return NormShell(lat.id, n, tuple(tuple(int(x) for x in r) for r in arr))
