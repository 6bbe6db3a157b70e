# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled enumeration kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, free
from libc.math cimport sqrt, ceil, floor

cnp.import_array()

BACKEND = "cython"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


# --- shells -----------------------------------------------------------------

cdef class _Sink:
    cdef readonly int64_t count
    cdef int64_t cap
    cdef int64_t r
    cdef readonly object buf
    cdef bint keep

    def __init__(self, int64_t r, bint keep):
        self.count = 0
        self.r = r
        self.keep = keep
        self.cap = 1024 if keep else 0
        self.buf = np.empty((self.cap, r), dtype=np.int64) if keep else None

    cdef void push(self, int64_t* x):
        cdef int64_t[:, ::1] view
        cdef int64_t i
        if self.keep:
            if self.count == self.cap:
                self.cap *= 2
                nb = np.empty((self.cap, self.r), dtype=np.int64)
                nb[:self.count] = self.buf[:self.count]
                self.buf = nb
            view = self.buf
            for i in range(self.r):
                view[self.count, i] = x[i]
        self.count += 1


cdef void _fp(const double* q, const int64_t* G, int64_t r, int64_t n, _Sink sink) noexcept:
    cdef int64_t* x = <int64_t*> calloc(r, sizeof(int64_t))
    cdef int64_t* lo = <int64_t*> malloc(r * sizeof(int64_t))
    cdef int64_t* hi = <int64_t*> malloc(r * sizeof(int64_t))
    cdef double* budget = <double*> malloc((r + 1) * sizeof(double))
    cdef double* center = <double*> malloc(r * sizeof(double))
    cdef double tol = 1e-6 * (n + 1)
    cdef double rad, c, rest
    cdef int64_t i, j, a, b, val, s
    cdef bint descend
    if r == 0:
        if n == 0:
            sink.push(x)
        free(x); free(lo); free(hi); free(budget); free(center)
        return
    i = r - 1
    budget[r - 1] = <double> n
    # set up level i
    c = 0.0
    center[i] = c
    rad = sqrt(budget[i] / q[i * r + i]) if budget[i] > 0 else 0.0
    lo[i] = <int64_t> ceil(c - rad) - 1
    hi[i] = <int64_t> floor(c + rad) + 1
    x[i] = lo[i] - 1
    while True:
        x[i] += 1
        if x[i] > hi[i]:
            x[i] = 0
            i += 1
            if i == r:
                break
            continue
        rest = budget[i] - q[i * r + i] * (x[i] - center[i]) * (x[i] - center[i])
        if rest < -tol:
            continue
        if i == 0:
            val = 0
            for a in range(r):
                if x[a] == 0:
                    continue
                s = 0
                for b in range(r):
                    s += G[a * r + b] * x[b]
                val += x[a] * s
            if val == n:
                sink.push(x)
            continue
        i -= 1
        budget[i] = rest
        c = 0.0
        for j in range(i + 1, r):
            c -= q[i * r + j] * x[j]
        center[i] = c
        rad = sqrt(rest / q[i * r + i]) if rest > 0 else 0.0
        lo[i] = <int64_t> ceil(c - rad) - 1
        hi[i] = <int64_t> floor(c + rad) + 1
        x[i] = lo[i] - 1
    free(x); free(lo); free(hi); free(budget); free(center)


def _cholesky_form(gram):
    r = gram.shape[0]
    q = gram.astype(np.float64).copy()
    for i in range(r):
        for j in range(i + 1, r):
            q[j, i] = q[i, j]
            q[i, j] = q[i, j] / q[i, i]
        for k in range(i + 1, r):
            for l in range(k, r):
                q[k, l] -= q[k, i] * q[i, l]
    return np.ascontiguousarray(q)


def _run_fp(gram, int64_t n, bint keep):
    gram = np.ascontiguousarray(gram, dtype=np.int64)
    cdef int64_t r = gram.shape[0]
    cdef double[:, ::1] q = _cholesky_form(gram)
    cdef const int64_t[:, ::1] G = gram
    sink = _Sink(r, keep)
    if r:
        _fp(&q[0, 0], &G[0, 0], r, n, sink)
    else:
        _fp(NULL, NULL, 0, n, sink)
    return sink


def shell(gram, n):
    sink = _run_fp(gram, n, True)
    return np.array(sink.buf[:sink.count]).reshape(sink.count, np.asarray(gram).shape[0])


def shell_count(gram, n):
    return _run_fp(gram, n, False).count


# --- bitset counting --------------------------------------------------------

cdef inline int64_t _popc(const uint64_t* a, int64_t W) noexcept nogil:
    cdef int64_t s = 0, w
    for w in range(W):
        s += __builtin_popcountll(a[w])
    return s


cdef inline int64_t _popc_and(const uint64_t* a, const uint64_t* b, int64_t W) noexcept nogil:
    cdef int64_t s = 0, w
    for w in range(W):
        s += __builtin_popcountll(a[w] & b[w])
    return s


cdef inline bint _and_into(uint64_t* out, const uint64_t* a, const uint64_t* b, int64_t W) noexcept nogil:
    cdef uint64_t acc = 0
    cdef int64_t w
    for w in range(W):
        out[w] = a[w] & b[w]
        acc |= out[w]
    return acc != 0


cdef int64_t _rec_count(const uint64_t* masks, int64_t nv, int64_t W, const int64_t* vi,
                        uint64_t* cand, int64_t g, int64_t d) noexcept nogil:
    # cand[(lev * g + j) * W + w]
    cdef uint64_t* cur = cand + d * g * W
    cdef uint64_t* nxt = cand + (d + 1) * g * W
    cdef int64_t total = 0, w, j, v, t
    cdef uint64_t word
    cdef bint ok
    if d == g - 1:
        return _popc(cur + (g - 1) * W, W)
    if d == g - 2:
        t = vi[d * g + g - 1]
        for w in range(W):
            word = cur[d * W + w]
            while word:
                v = w * 64 + __builtin_ctzll(word)
                word &= word - 1
                total += _popc_and(cur + (g - 1) * W, masks + (v * nv + t) * W, W)
        return total
    for w in range(W):
        word = cur[d * W + w]
        while word:
            v = w * 64 + __builtin_ctzll(word)
            word &= word - 1
            ok = True
            for j in range(d + 1, g):
                if not _and_into(nxt + j * W, cur + j * W, masks + (v * nv + vi[d * g + j]) * W, W):
                    ok = False
                    break
            if ok:
                total += _rec_count(masks, nv, W, vi, cand, g, d + 1)
    return total


def bitset_count(masks, base, validx, first):
    cdef const uint64_t[:, :, ::1] M = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef const uint64_t[:, ::1] B = np.ascontiguousarray(base, dtype=np.uint64)
    cdef const int64_t[:, ::1] VI = np.ascontiguousarray(validx, dtype=np.int64)
    cdef const int64_t[::1] F = np.ascontiguousarray(first, dtype=np.int64)
    cdef int64_t g = B.shape[0], W = B.shape[1], nv = M.shape[1]
    cdef int64_t nf = F.shape[0], total = 0, a, j, v
    cdef uint64_t* cand
    cdef bint ok
    if g == 1:
        return nf
    if nf == 0:
        return 0
    cand = <uint64_t*> calloc(g * g * W, sizeof(uint64_t))
    with nogil:
        for a in range(nf):
            v = F[a]
            ok = True
            for j in range(1, g):
                if not _and_into(cand + (g + j) * W, &B[j, 0], &M[v, VI[0, j], 0], W):
                    ok = False
                    break
            if ok:
                total += _rec_count(&M[0, 0, 0], nv, W, &VI[0, 0], cand, g, 1)
    free(cand)
    return total


# --- weighted enumeration: determinant histogram ----------------------------

cdef void _gdet(const int64_t* zre, const int64_t* zim, int64_t zstride, const int64_t* chosen,
                int64_t g, const int64_t* perms, const int64_t* signs, int64_t nperm,
                int64_t* out_re, int64_t* out_im) noexcept nogil:
    # matrix entry (row, col) = z[chosen[col]][row]
    cdef int64_t k, row, col, dr = 0, di = 0, pr, pi, a, b, tmp
    for k in range(nperm):
        pr = 1
        pi = 0
        for row in range(g):
            col = perms[k * g + row]
            a = zre[chosen[col] * zstride + row]
            b = zim[chosen[col] * zstride + row]
            tmp = pr * a - pi * b
            pi = pr * b + pi * a
            pr = tmp
        dr += signs[k] * pr
        di += signs[k] * pi
    out_re[0] = dr
    out_im[0] = di


def bitset_det_histogram(masks, base, validx, first, zre, zim):
    from itertools import permutations
    from ._pykernels import _perm_sign
    cdef const uint64_t[:, :, ::1] M = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef const uint64_t[:, ::1] B = np.ascontiguousarray(base, dtype=np.uint64)
    cdef const int64_t[:, ::1] VI = np.ascontiguousarray(validx, dtype=np.int64)
    cdef const int64_t[::1] F = np.ascontiguousarray(first, dtype=np.int64)
    cdef const int64_t[:, ::1] ZR = np.ascontiguousarray(zre, dtype=np.int64)
    cdef const int64_t[:, ::1] ZI = np.ascontiguousarray(zim, dtype=np.int64)
    cdef int64_t g = B.shape[0], W = B.shape[1], nv = M.shape[1]
    plist = list(permutations(range(g)))
    cdef int64_t[:, ::1] P = np.array(plist, dtype=np.int64).reshape(len(plist), g)
    cdef int64_t[::1] S = np.array([_perm_sign(p) for p in plist], dtype=np.int64)
    cdef int64_t nperm = len(plist)
    cdef int64_t* chosen = <int64_t*> calloc(g, sizeof(int64_t))
    cdef uint64_t* cand = <uint64_t*> calloc((g + 1) * g * W, sizeof(uint64_t))
    cdef int64_t* wordpos = <int64_t*> calloc(g, sizeof(int64_t))
    cdef uint64_t* pending = <uint64_t*> calloc(g, sizeof(uint64_t))
    cdef int64_t a, d, j, v, dr, di
    cdef bint ok
    hist = {}
    if g == 0:
        free(chosen); free(cand); free(wordpos); free(pending)
        return {(1, 0): 1}
    for a in range(F.shape[0]):
        v = F[a]
        chosen[0] = v
        if g == 1:
            _gdet(&ZR[0, 0], &ZI[0, 0], ZR.shape[1], chosen, g, &P[0, 0], &S[0], nperm, &dr, &di)
            key = (dr, di)
            hist[key] = hist.get(key, 0) + 1
            continue
        ok = True
        for j in range(1, g):
            if not _and_into(cand + (g + j) * W, &B[j, 0], &M[v, VI[0, j], 0], W):
                ok = False
                break
        if not ok:
            continue
        # iterative DFS over levels 1..g-1
        d = 1
        wordpos[1] = 0
        pending[1] = cand[(g + 1) * W]
        while d >= 1:
            if pending[d] == 0:
                wordpos[d] += 1
                if wordpos[d] >= W:
                    d -= 1
                    continue
                pending[d] = cand[(d * g + d) * W + wordpos[d]]
                continue
            v = wordpos[d] * 64 + __builtin_ctzll(pending[d])
            pending[d] &= pending[d] - 1
            chosen[d] = v
            if d == g - 1:
                _gdet(&ZR[0, 0], &ZI[0, 0], ZR.shape[1], chosen, g, &P[0, 0], &S[0], nperm, &dr, &di)
                key = (dr, di)
                hist[key] = hist.get(key, 0) + 1
                continue
            ok = True
            for j in range(d + 1, g):
                if not _and_into(cand + ((d + 1) * g + j) * W, cand + (d * g + j) * W,
                                 &M[v, VI[d, j], 0], W):
                    ok = False
                    break
            if ok:
                d += 1
                wordpos[d] = 0
                pending[d] = cand[(d * g + d) * W]
    free(chosen); free(cand); free(wordpos); free(pending)
    return hist


# --- scan counting for large universes --------------------------------------

cdef int64_t _scan_rec(const int64_t* V, int64_t r, const int64_t* G, const int64_t* N, int64_t g,
                       int64_t** lists, int64_t* lens, int64_t maxlen, int64_t d, int64_t* y) noexcept nogil:
    # lists[d * g + j] holds candidate indices of column j at level d, length lens[d*g+j]
    cdef int64_t total = 0, a, j, k, u, s, i, b, cnt
    cdef int64_t* cur
    cdef bint ok
    if d == g - 1:
        return lens[d * g + g - 1]
    for a in range(lens[d * g + d]):
        u = lists[d * g + d][a]
        for i in range(r):
            s = 0
            for b in range(r):
                s += G[i * r + b] * V[u * r + b]
            y[i] = s
        ok = True
        for j in range(d + 1, g):
            cnt = 0
            cur = lists[d * g + j]
            for k in range(lens[d * g + j]):
                s = 0
                for i in range(r):
                    s += V[cur[k] * r + i] * y[i]
                if s == N[d * g + j]:
                    if d + 1 == g - 1 and j == g - 1:
                        cnt += 1
                    else:
                        lists[(d + 1) * g + j][cnt] = cur[k]
                        cnt += 1
            lens[(d + 1) * g + j] = cnt
            if cnt == 0:
                ok = False
                break
        if ok:
            total += _scan_rec(V, r, G, N, g, lists, lens, maxlen, d + 1, y)
    return total


def scan_count(vecs, gram, starts, stops, N, first):
    cdef const int64_t[:, ::1] V = np.ascontiguousarray(vecs, dtype=np.int64)
    cdef const int64_t[:, ::1] G = np.ascontiguousarray(gram, dtype=np.int64)
    cdef const int64_t[:, ::1] NN = np.ascontiguousarray(N, dtype=np.int64)
    cdef const int64_t[::1] F = np.ascontiguousarray(first, dtype=np.int64)
    cdef int64_t g = len(starts), r = V.shape[1], total = 0, a, j, k, lev
    cdef int64_t maxlen = max(int(stops[j] - starts[j]) for j in range(g)) if g else 0
    if g == 1:
        return F.shape[0]
    cdef int64_t** lists = <int64_t**> calloc(g * g, sizeof(int64_t*))
    cdef int64_t* lens = <int64_t*> calloc(g * g, sizeof(int64_t))
    cdef int64_t* y = <int64_t*> calloc(r, sizeof(int64_t))
    for lev in range(g):
        for j in range(g):
            lists[lev * g + j] = <int64_t*> malloc((maxlen + 1) * sizeof(int64_t))
    # level 0 lists are the full shells; the first column is driven by F
    for j in range(g):
        lens[j] = stops[j] - starts[j]
        for k in range(lens[j]):
            lists[j][k] = starts[j] + k
    lens[0] = 1
    with nogil:
        for a in range(F.shape[0]):
            lists[0][0] = F[a]
            total += _scan_rec(&V[0, 0], r, &G[0, 0], &NN[0, 0], g, lists, lens, maxlen, 0, y)
    for lev in range(g * g):
        free(lists[lev])
    free(lists); free(lens); free(y)
    return total
