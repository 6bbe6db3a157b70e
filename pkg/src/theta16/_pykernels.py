"""Pure-Python enumeration kernels.

Same signatures and results as the compiled ``_ckernels`` module.  Bitsets are
Python ints here; the compiled module works on the uint64 word arrays directly.
"""

from __future__ import annotations

import math
from itertools import permutations

import numpy as np

BACKEND = "python"


def _cholesky_form(gram):
    """Fincke-Pohst form: x'Gx = sum_i q[i][i] * (x_i + sum_{j>i} q[i][j] x_j)^2."""
    r = len(gram)
    q = [[float(gram[i][j]) for j in range(r)] for i in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, r):
            for l in range(k, r):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def _fincke_pohst(gram, n, visit):
    gram = np.asarray(gram, dtype=np.int64)
    r = gram.shape[0]
    q = _cholesky_form(gram.tolist())
    tol = 1e-6 * (n + 1)
    x = [0] * r
    G = gram.tolist()

    def rec(i, budget):
        c = -sum(q[i][j] * x[j] for j in range(i + 1, r))
        rad = math.sqrt(max(budget, 0.0) / q[i][i])
        lo, hi = math.ceil(c - rad) - 1, math.floor(c + rad) + 1
        for xi in range(lo, hi + 1):
            rest = budget - q[i][i] * (xi - c) ** 2
            if rest < -tol:
                continue
            x[i] = xi
            if i == 0:
                val = sum(x[a] * G[a][b] * x[b] for a in range(r) for b in range(r) if x[a] and x[b])
                if val == n:
                    visit(x)
            else:
                rec(i - 1, rest)
        x[i] = 0

    if r:
        rec(r - 1, float(n))
    elif n == 0:
        visit(x)


def shell(gram, n: int) -> np.ndarray:
    out = []
    _fincke_pohst(gram, n, lambda x: out.append(tuple(x)))
    r = np.asarray(gram).shape[0]
    return np.array(out, dtype=np.int64).reshape(len(out), r)


def shell_count(gram, n: int) -> int:
    box = [0]

    def visit(_):
        box[0] += 1

    _fincke_pohst(gram, n, visit)
    return box[0]


def _to_ints(words) -> int:
    return int.from_bytes(np.ascontiguousarray(words, dtype="<u8").tobytes(), "little")


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class _IntMasks:
    """Lazy int view of a (k, nv, W) mask array."""

    def __init__(self, masks):
        self.masks = masks
        self.cache = {}

    def __call__(self, v, t):
        key = (v, t)
        m = self.cache.get(key)
        if m is None:
            m = self.cache[key] = _to_ints(self.masks[v, t])
        return m


def bitset_count(masks, base, validx, first) -> int:
    g = base.shape[0]
    M = _IntMasks(masks)
    bases = [_to_ints(base[j]) for j in range(g)]
    vi = [[int(validx[i][j]) for j in range(g)] for i in range(g)]

    def rec(d, cand):
        if d == g - 1:
            return cand[g - 1].bit_count()
        if d == g - 2:
            last, t = cand[g - 1], vi[d][g - 1]
            return sum((last & M(v, t)).bit_count() for v in _bits(cand[d]))
        total = 0
        for v in _bits(cand[d]):
            nxt = [0] * g
            for j in range(d + 1, g):
                nxt[j] = cand[j] & M(v, vi[d][j])
                if not nxt[j]:
                    break
            else:
                total += rec(d + 1, nxt)
        return total

    total = 0
    for v in first:
        v = int(v)
        cand = [0] * g
        for j in range(1, g):
            cand[j] = bases[j] & M(v, vi[0][j])
        if all(cand[1:]):
            total += rec(1, cand)
    return total


def iter_solutions(masks, base, validx, first):
    """Yield every solution as a tuple of universe indices, one per column."""
    g = base.shape[0]
    M = _IntMasks(masks)
    bases = [_to_ints(base[j]) for j in range(g)]
    vi = [[int(validx[i][j]) for j in range(g)] for i in range(g)]
    chosen = [0] * g

    def rec(d, cand):
        for v in _bits(cand[d]):
            chosen[d] = v
            if d == g - 1:
                yield tuple(chosen)
                continue
            nxt = [0] * g
            for j in range(d + 1, g):
                nxt[j] = cand[j] & M(v, vi[d][j])
            if all(nxt[d + 1:]):
                yield from rec(d + 1, nxt)

    for v in first:
        v = int(v)
        chosen[0] = v
        if g == 1:
            yield (v,)
            continue
        cand = [0] * g
        for j in range(1, g):
            cand[j] = bases[j] & M(v, vi[0][j])
        if all(cand[1:]):
            yield from rec(1, cand)


def _perm_sign(p):
    s, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, L = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                L += 1
            if L % 2 == 0:
                s = -s
    return s


def gauss_det(re, im):
    """Determinant of a square Gaussian-integer matrix given as (re, im) rows."""
    g = len(re)
    dr, di = 0, 0
    for p in permutations(range(g)):
        s = _perm_sign(p)
        pr, pi = 1, 0
        for row in range(g):
            a, b = re[row][p[row]], im[row][p[row]]
            pr, pi = pr * a - pi * b, pr * b + pi * a
        dr += s * pr
        di += s * pi
    return dr, di


def bitset_det_histogram(masks, base, validx, first, zre, zim) -> dict:
    """Histogram of det(Z) over solutions; column c of Z is (zre + i zim)[u_c]."""
    g = base.shape[0]
    zre = zre.tolist()
    zim = zim.tolist()
    hist = {}
    for sol in iter_solutions(masks, base, validx, first):
        re = [[zre[sol[c]][row] for c in range(g)] for row in range(g)]
        im = [[zim[sol[c]][row] for c in range(g)] for row in range(g)]
        key = gauss_det(re, im)
        hist[key] = hist.get(key, 0) + 1
    return hist


def scan_count(vecs, gram, starts, stops, N, first) -> int:
    """Forward-filtering count for universes too large for bitsets."""
    g = len(starts)
    N = np.asarray(N, dtype=np.int64)
    vecs = np.asarray(vecs, dtype=np.int64)
    gram = np.asarray(gram, dtype=np.int64)
    cols = [np.arange(starts[j], stops[j]) for j in range(g)]

    def rec(d, cand):
        if d == g - 1:
            return len(cand[g - 1])
        total = 0
        for v in cand[d]:
            y = gram @ vecs[v]
            nxt = list(cand)
            ok = True
            for j in range(d + 1, g):
                c = cand[j]
                nxt[j] = c[vecs[c] @ y == N[d, j]]
                if not len(nxt[j]):
                    ok = False
                    break
            if ok:
                total += rec(d + 1, nxt)
        return total

    total = 0
    for v in first:
        y = gram @ vecs[int(v)]
        cand = list(cols)
        ok = True
        for j in range(1, g):
            c = cols[j]
            cand[j] = c[vecs[c] @ y == N[0, j]]
            if not len(cand[j]):
                ok = False
                break
        if ok:
            total += rec(1, cand) if g > 1 else 1
    return total
