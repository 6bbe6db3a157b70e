"""Theta series of I8 and E8 weighted by P4(X) = det(L'X)^4, L' = (1_g 0 i1_g 0).

The weight is evaluated on the embedded vectors B X, with B a fixed rational
generator matrix (standard half-integer coordinates for E8).  Coordinates are
scaled by the common denominator d so the kernel works on Gaussian integers;
the sum is divided by d^(4g) at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import thetaengine as te
from .exact import GaussianRational, det
from .lattices import LatticeBasis, E8, Z
from .qforms import FourierIndex, psd_indices

BASES = ("I8", "E8")


@dataclass(frozen=True)
class HarmonicSpec:
    base: str
    genus: int

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"base must be one of {BASES}")
        if not 1 <= self.genus <= 4:
            raise ValueError("genus must be between 1 and 4")

    @cached_property
    def lattice(self) -> LatticeBasis:
        return Z(8) if self.base == "I8" else E8()

    @cached_property
    def embedding(self):
        """B with columns the basis vectors, so that B'B is the Gram matrix."""
        return tuple(zip(*self.lattice.basis.rows))

    @cached_property
    def scale(self) -> int:
        d = 1
        for r in self.embedding:
            for x in r:
                d = max(d, x.denominator)
        return d

    @property
    def L(self):
        """8 x g complex matrix (conjugate transpose of L' is not used; L'=L^T)."""
        g = self.genus
        rows = [[GaussianRational(0)] * g for _ in range(8)]
        for k in range(g):
            rows[k][k] = GaussianRational(1)
            rows[4 + k][k] = GaussianRational(0, 1)
        return rows

    def check_frame(self) -> bool:
        """L'L = 0 and L' conj(L) = 2 I."""
        L, g = self.L, self.genus
        ok = True
        for a in range(g):
            for b in range(g):
                s = sum((L[k][a] * L[k][b] for k in range(8)), GaussianRational(0))
                h = sum((L[k][a] * L[k][b].conj() for k in range(8)), GaussianRational(0))
                ok &= s == 0 and h == (2 if a == b else 0)
        return ok

    def z_matrices(self):
        """Integer g x rank matrices giving d * L'B x as (re, im)."""
        g, d, B = self.genus, self.scale, self.embedding
        re = [[int(B[k][i] * d) for i in range(8)] for k in range(g)]
        im = [[int(B[4 + k][i] * d) for i in range(8)] for k in range(g)]
        return re, im


def p4_eval(X, spec: HarmonicSpec) -> GaussianRational:
    """det(L' B X)^4 for an integer 8 x g matrix X of lattice coordinates."""
    g, B = spec.genus, spec.embedding
    X = [[int(x) for x in r] for r in X]
    if len(X) != 8 or any(len(r) != g for r in X):
        raise ValueError(f"expected an 8 x {g} matrix")
    Y = [[sum((B[k][i] * X[i][c] for i in range(8)), Fraction(0)) for c in range(g)] for k in range(8)]
    # det over Q(i) by expanding into real 2g x 2g form is avoidable: use Leibniz on Gaussian entries
    M = [[GaussianRational(Y[k][c], Y[4 + k][c]) for c in range(g)] for k in range(g)]
    return _gdet(M) ** 4


def _gdet(M) -> GaussianRational:
    from itertools import permutations
    from ._pykernels import _perm_sign
    g = len(M)
    total = GaussianRational(0)
    for p in permutations(range(g)):
        term = GaussianRational(_perm_sign(p))
        for r in range(g):
            term = term * M[r][p[r]]
        total = total + term
    return total


def harmonic_coeff(spec: HarmonicSpec, N, backend: str | None = None) -> GaussianRational:
    """Sum of P4 over the solutions of X'GX = N; must come out real."""
    N = te._as_index(N)
    if N.genus != spec.genus:
        raise ValueError("index genus differs from the spec genus")
    re, im = spec.z_matrices()
    hist = te.det_histogram(spec.lattice, N, re, im, backend=backend)
    total = GaussianRational(0)
    for (a, b), count in sorted(hist.items()):
        total = total + GaussianRational(a, b) ** 4 * count
    value = total / spec.scale ** (4 * spec.genus)
    if not value.is_real():
        raise te.IntegrityError(f"harmonic coefficient at {N} is not real: {value}")
    return value


def harmonic_coeff_generic(spec: HarmonicSpec, N) -> GaussianRational:
    """Same value through the per-solution callback path."""
    value = te.weighted_rep(spec.lattice, N, lambda X: p4_eval(X.tolist(), spec))
    return GaussianRational(value) if not isinstance(value, GaussianRational) else value


@dataclass(frozen=True)
class HarmonicCoefficient:
    index: FourierIndex
    value: GaussianRational


def harmonic_table(spec: HarmonicSpec, max_trace: int) -> list[HarmonicCoefficient]:
    return [HarmonicCoefficient(N, harmonic_coeff(spec, N)) for N in psd_indices(spec.genus, max_trace)]


def embedding_check(spec: HarmonicSpec) -> bool:
    """B'B equals the Gram matrix and det(B) = +-1."""
    B = spec.embedding
    G = [[sum((B[k][i] * B[k][j] for k in range(8)), Fraction(0)) for j in range(8)] for i in range(8)]
    return G == [list(r) for r in spec.lattice.gram] and abs(det(B)) == 1
