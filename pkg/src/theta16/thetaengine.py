"""Representation numbers a(N) = #{X : X'SX = N} and the q-expansions built from them.

Counting runs column by column.  All vectors of the needed norms form a
*universe*; for every universe vector v and inner-product value t a bitset
marks the universe vectors u with <v, u> = t.  A partial solution keeps one
candidate bitset per open column and each chosen column ANDs them down, so
the Gram constraints never need to be re-evaluated.  Universes too large for
dense bitsets fall back to a forward-filtering scan.

Every count is exact.  Floating point appears only in the shell enumerator's
range proposals (see ``lattices``).
"""

from __future__ import annotations

import math
import os
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from pathlib import Path
from typing import Callable

import numpy as np

from . import kernels
from .lattices import LATTICE_IDS, LatticeBasis, build_lattice, shell_array, shell_count
from .qforms import FourierIndex, is_psd, psd_indices

BITSET_LIMIT = 6000


class IntegrityError(RuntimeError):
    """A stored or computed value contradicts another one."""


# --- thread setting ----------------------------------------------------------

_threads = int(os.environ.get("THETA_THREADS", "1") or 1)


def set_threads(n: int) -> None:
    global _threads
    if n < 1:
        raise ValueError("thread count must be positive")
    _threads = n


def get_threads() -> int:
    return _threads


# --- universes -----------------------------------------------------------------

@dataclass
class Universe:
    norms: tuple           # distinct norms, ascending
    vecs: np.ndarray       # concatenated shells, canonical order within each
    offsets: dict          # norm -> (start, stop)
    maxn: int
    masks: np.ndarray | None = None  # (k, 2*maxn+1, W) uint64, or None for the scan path

    @property
    def size(self) -> int:
        return len(self.vecs)

    @property
    def words(self) -> int:
        return (self.size + 63) // 64

    def base(self, norms_per_col) -> np.ndarray:
        W = self.words
        out = np.zeros((len(norms_per_col), W), dtype=np.uint64)
        for j, n in enumerate(norms_per_col):
            a, b = self.offsets[n]
            out[j] = _pack_range(a, b, W)
        return out


def _pack_bool(rows: np.ndarray, W: int) -> np.ndarray:
    """Bool array (m, k) -> (m, W) little-endian uint64 bitsets."""
    m, k = rows.shape
    pad = np.zeros((m, W * 64), dtype=bool)
    pad[:, :k] = rows
    return np.packbits(pad, axis=1, bitorder="little").view("<u8")


def _pack_range(a: int, b: int, W: int) -> np.ndarray:
    row = np.zeros((1, W * 64), dtype=bool)
    row[0, a:b] = True
    return np.packbits(row, axis=1, bitorder="little").view("<u8")[0]


_UNIVERSES: OrderedDict = OrderedDict()
_ULOCK = threading.Lock()


def universe(lat: LatticeBasis, norms, with_masks: bool | None = None) -> Universe:
    norms = tuple(sorted(set(int(n) for n in norms)))
    key = (lat.gram, norms)
    with _ULOCK:
        u = _UNIVERSES.get(key)
        if u is not None:
            _UNIVERSES.move_to_end(key)
    if u is None:
        parts, offsets, pos = [], {}, 0
        for n in norms:
            s = shell_array(lat, n)
            offsets[n] = (pos, pos + len(s))
            pos += len(s)
            parts.append(s)
        vecs = np.ascontiguousarray(np.vstack(parts)) if parts else np.zeros((0, lat.rank), np.int64)
        u = Universe(norms, vecs, offsets, max(norms) if norms else 0)
        with _ULOCK:
            _UNIVERSES[key] = u
            while len(_UNIVERSES) > 16:
                _UNIVERSES.popitem(last=False)
    if with_masks is None:
        with_masks = u.size <= BITSET_LIMIT
    if with_masks and u.masks is None:
        u.masks = _build_masks(lat, u)
    return u


def _build_masks(lat: LatticeBasis, u: Universe) -> np.ndarray:
    k, W, mx = u.size, u.words, u.maxn
    nv = 2 * mx + 1
    masks = np.zeros((k, nv, W), dtype=np.uint64)
    GU = u.vecs @ lat.gram_array  # (k, r)
    for a in range(0, k, 512):
        P = GU[a:a + 512] @ u.vecs.T
        for t in range(-mx, mx + 1):
            masks[a:a + 512, t + mx] = _pack_bool(P == t, W)
    masks.setflags(write=False)
    return masks


# --- index preparation -----------------------------------------------------------

def _as_index(N) -> FourierIndex:
    if isinstance(N, FourierIndex):
        return N
    if isinstance(N, str):
        return FourierIndex.parse(N)
    if isinstance(N, int):
        return FourierIndex(((N,),))
    return FourierIndex(tuple(tuple(r) for r in N))


@lru_cache(maxsize=1 << 16)
def canonical_form(N: FourierIndex) -> FourierIndex:
    """Least upper-triangle over signed column permutations; the count is unchanged."""
    g = N.genus
    if g <= 1:
        return N
    n = N.n
    best = None
    for p in permutations(range(g)):
        for signs in product((1, -1), repeat=g - 1):
            s = (1,) + signs
            up = tuple(s[i] * s[j] * n[p[i]][p[j]] for i in range(g) for j in range(i, g))
            if best is None or up < best:
                best = up
    return FourierIndex.from_upper(g, best)


def _strip_zero(N: FourierIndex) -> FourierIndex:
    keep = [i for i in range(N.genus) if N.n[i][i] != 0]
    return N.submatrix(keep) if len(keep) < N.genus else N


def _column_order(lat, N: FourierIndex):
    """Smallest shells first; ties broken toward columns with more nonzero constraints."""
    g = N.genus
    size = {n: len(shell_array(lat, n)) for n in set(N.diagonal)}
    nz = [sum(1 for j in range(g) if j != i and N.n[i][j]) for i in range(g)]
    return sorted(range(g), key=lambda i: (size[N.n[i][i]], -nz[i], i))


def _chunks(arr, parts):
    if parts <= 1 or len(arr) < 2:
        return [arr]
    step = max(1, math.ceil(len(arr) / (4 * parts)))
    return [arr[i:i + step] for i in range(0, len(arr), step)]


def _reduce(fn, chunks, threads):
    if threads <= 1 or len(chunks) == 1:
        return sum(fn(c) for c in chunks)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return sum(ex.map(fn, chunks))  # map keeps chunk order


# --- counting ------------------------------------------------------------------------

_MEMO: dict = {}
_MEMO_LOCK = threading.Lock()


def _count(lat: LatticeBasis, N: FourierIndex, threads: int, backend=None) -> int:
    N = _strip_zero(N)
    g = N.genus
    if g == 0:
        return 1
    if lat.is_even() and any(x % 2 for x in N.diagonal):
        return 0
    if g == 1:
        return shell_count(lat, N.n[0][0], backend)
    order = _column_order(lat, N)
    N = N.permuted(order)
    if any(len(shell_array(lat, n)) == 0 for n in N.diagonal):
        return 0
    K = kernels.backend(backend)
    u = universe(lat, N.diagonal)
    a, b = u.offsets[N.n[0][0]]
    half = (b - a) // 2
    first = np.arange(a, a + half, dtype=np.int64)  # positive half; X -> -X doubles it
    if u.masks is not None:
        base = u.base(N.diagonal)
        validx = np.array([[N.n[i][j] + u.maxn for j in range(g)] for i in range(g)], dtype=np.int64)
        fn = lambda c: K.bitset_count(u.masks, base, validx, c)  # noqa: E731
    else:
        starts = [u.offsets[n][0] for n in N.diagonal]
        stops = [u.offsets[n][1] for n in N.diagonal]
        Narr = np.array(N.n, dtype=np.int64)
        fn = lambda c: K.scan_count(u.vecs, lat.gram_array, starts, stops, Narr, c)  # noqa: E731
    return 2 * _reduce(fn, _chunks(first, threads), threads)


def rep_number(lat, N, threads: int | None = None, backend: str | None = None, cache=None) -> int:
    """#{X in Z^(rank x g) : X'GX = N} for the lattice with Gram G."""
    N = _as_index(N)
    if N.genus > 5:
        raise ValueError("genus above 5 is not supported")
    lat_id = lat if isinstance(lat, str) else lat.id
    store = default_cache() if cache is None else cache
    persistent = lat_id in LATTICE_IDS and store is not False
    if persistent:
        hit = store.get(lat_id, N)
        if hit is not None:
            return hit
    if isinstance(lat, str):
        lat = build_lattice(lat)
    key = (lat.gram, canonical_form(_strip_zero(N)))
    if backend is None:
        with _MEMO_LOCK:
            val = _MEMO.get(key)
    else:
        val = None
    if val is None:
        val = _count(lat, key[1], threads or _threads, backend)
        if backend is None:
            with _MEMO_LOCK:
                _MEMO[key] = val
    if persistent:
        store.put(lat.id, N, val)
    return val


def clear_memo() -> None:
    with _MEMO_LOCK:
        _MEMO.clear()


# --- weighted enumeration ---------------------------------------------------------------

def _setup_unordered(lat, N: FourierIndex):
    """Universe data for enumerating every solution with columns in the original order."""
    g = N.genus
    u = universe(lat, N.diagonal, with_masks=True)
    base = u.base(N.diagonal)
    validx = np.array([[N.n[i][j] + u.maxn if abs(N.n[i][j]) <= u.maxn else 0 for j in range(g)]
                       for i in range(g)], dtype=np.int64)
    a, b = u.offsets[N.n[0][0]]
    return u, base, validx, np.arange(a, b, dtype=np.int64)


def iter_solutions(lat, N):
    """Yield every X (rank x g int array) with X'GX = N, each exactly once."""
    if isinstance(lat, str):
        lat = build_lattice(lat)
    N = _as_index(N)
    g = N.genus
    if g == 0:
        yield np.zeros((lat.rank, 0), dtype=np.int64)
        return
    if any(len(shell_array(lat, n)) == 0 for n in N.diagonal):
        return
    u, base, validx, first = _setup_unordered(lat, N)
    for sol in kernels._pykernels.iter_solutions(u.masks, base, validx, first):
        yield u.vecs[list(sol)].T


def weighted_rep(lat, N, weight: Callable):
    """Sum of weight(X) over all solutions X; no symmetry shortcuts."""
    total = 0
    for X in iter_solutions(lat, N):
        total = total + weight(X)
    return total


def det_histogram(lat, N, mre, mim, backend: str | None = None) -> dict:
    """{(re, im): count} of det(Z) over solutions, where Z = (mre + i mim) X.

    mre, mim are integer g x rank matrices.
    """
    if isinstance(lat, str):
        lat = build_lattice(lat)
    N = _as_index(N)
    g = N.genus
    if g == 0:
        return {(1, 0): 1}
    if any(len(shell_array(lat, n)) == 0 for n in N.diagonal):
        return {}
    u, base, validx, first = _setup_unordered(lat, N)
    zre = np.ascontiguousarray(u.vecs @ np.asarray(mre, dtype=np.int64).T)
    zim = np.ascontiguousarray(u.vecs @ np.asarray(mim, dtype=np.int64).T)
    return kernels.backend(backend).bitset_det_histogram(u.masks, base, validx, first, zre, zim)


# --- q-expansions --------------------------------------------------------------------

@dataclass
class QExpansion:
    """Finite table of Fourier coefficients keyed by N = 2T.

    Every psd N with trace <= bound is present; ``compute`` (if given) supplies
    coefficients beyond the bound on demand.
    """

    genus: int
    coeffs: dict
    bound: int
    kind: str = "integer"
    compute: Callable | None = field(default=None, repr=False, compare=False)

    def __getitem__(self, N):
        N = _as_index(N)
        if N.genus != self.genus:
            raise ValueError(f"index of genus {N.genus} in a genus-{self.genus} expansion")
        v = self.coeffs.get(N)
        if v is not None:
            return v
        if self.compute is None:
            if N.trace <= self.bound:
                raise IntegrityError(f"index {N} within the bound is missing")
            raise KeyError(f"index {N} lies beyond the bound {self.bound}")
        v = self.compute(N)
        self.coeffs[N] = v
        return v

    def indices(self):
        return sorted((N for N in self.coeffs if N.trace <= self.bound), key=lambda N: (N.trace, N.upper()))

    def combine(self, other: QExpansion, a=1, b=1) -> QExpansion:
        if other.genus != self.genus:
            raise ValueError("genus mismatch")
        bound = min(self.bound, other.bound)
        coeffs = {N: a * self[N] + b * other[N] for N in psd_indices(self.genus, bound)}
        comp = None
        if self.compute is not None and other.compute is not None:
            comp = lambda N: a * self[N] + b * other[N]  # noqa: E731
        kind = "integer" if all(isinstance(x, int) for x in (a, b)) and self.kind == other.kind == "integer" \
            else "rational"
        return QExpansion(self.genus, coeffs, bound, kind, comp)

    def __add__(self, other):
        return self.combine(other)

    def __sub__(self, other):
        return self.combine(other, 1, -1)

    def is_zero(self) -> bool:
        return all(v == 0 for N, v in self.coeffs.items() if N.trace <= self.bound)


def q_expansion(lat, g: int, max_trace: int, lazy: bool = True) -> QExpansion:
    if isinstance(lat, str):
        lat = build_lattice(lat)
    coeffs = {N: rep_number(lat, N) for N in psd_indices(g, max_trace)}
    comp = (lambda N: rep_number(lat, N)) if lazy else None
    return QExpansion(g, coeffs, max_trace, "integer", comp)


def lazy_expansion(g: int, fn: Callable, kind: str = "integer") -> QExpansion:
    """An expansion with no stored table; every coefficient comes from fn."""
    return QExpansion(g, {}, -1, kind, fn)


def phi_image(e: QExpansion) -> QExpansion:
    """a'(N') = a(N' + 0)."""
    if e.genus == 0:
        raise ValueError("phi of a genus-0 expansion")
    z = FourierIndex.zero(1)
    coeffs = {N: e[N + z] for N in psd_indices(e.genus - 1, e.bound)} if e.bound >= 0 else {}
    comp = (lambda N: e[N + z]) if e.compute is not None else None
    return QExpansion(e.genus - 1, coeffs, e.bound, e.kind, comp)


def completions(N1: FourierIndex, N2: FourierIndex):
    """Every integral B with [[N1, B], [B', N2]] psd."""
    g1, g2 = N1.genus, N2.genus
    ranges = [range(-math.isqrt(N1.n[i][i] * N2.n[j][j]), math.isqrt(N1.n[i][i] * N2.n[j][j]) + 1)
              for i in range(g1) for j in range(g2)]
    for entries in product(*ranges):
        B = [list(entries[i * g2:(i + 1) * g2]) for i in range(g1)]
        rows = [list(N1.n[i]) + B[i] for i in range(g1)]
        rows += [[B[i][j] for i in range(g1)] + list(N2.n[j]) for j in range(g2)]
        if is_psd(rows):
            yield N1.block(N2, B)


def witt_coefficient(e: QExpansion, N1, N2):
    """Coefficient of the block-diagonal restriction at (N1, N2): sum over psd completions."""
    N1, N2 = _as_index(N1), _as_index(N2)
    if N1.genus + N2.genus != e.genus:
        raise ValueError("block sizes do not add up to the genus")
    total = 0
    for N in completions(N1, N2):
        total = total + e[N]
    return total


# --- persistent cache ---------------------------------------------------------------------

class RepCache:
    """RepCount records, optionally backed by ``<dir>/repcounts.v1``.

    Lines read ``v1|<lattice>|<g>|<upper triangle>|<count>``, sorted.  One
    writer per directory.
    """

    FILENAME = "repcounts.v1"

    def __init__(self, directory=None, autosave: int = 500):
        self.directory = Path(directory) if directory else None
        self.store: dict = {}
        self.lock = threading.Lock()
        self.dirty = 0
        self.autosave = autosave
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            if self.path.exists():
                self.import_file(self.path, mark_dirty=False)

    @property
    def path(self) -> Path:
        return self.directory / self.FILENAME

    def __len__(self):
        return len(self.store)

    @staticmethod
    def _key(lat_id, N: FourierIndex):
        return (lat_id, N.genus, N.upper())

    def get(self, lat_id: str, N) -> int | None:
        return self.store.get(self._key(lat_id, _as_index(N)))

    def put(self, lat_id: str, N, count: int, mark_dirty: bool = True) -> None:
        key = self._key(lat_id, _as_index(N))
        with self.lock:
            old = self.store.get(key)
            if old is not None:
                if old != count:
                    raise IntegrityError(f"cache conflict for {lat_id} {key[2]}: {old} != {count}")
                return
            self.store[key] = int(count)
            if mark_dirty:
                self.dirty += 1
                if self.directory is not None and self.dirty >= self.autosave:
                    self._flush_locked()

    @staticmethod
    def format(key, count) -> str:
        lat_id, g, up = key
        return f"v1|{lat_id}|{g}|{','.join(map(str, up))}|{count}"

    def lines(self) -> list[str]:
        with self.lock:
            return sorted(self.format(k, v) for k, v in self.store.items())

    def export(self, path) -> int:
        lines = self.lines()
        _atomic_write(Path(path), lines)
        return len(lines)

    def import_file(self, path, mark_dirty: bool = True) -> int:
        recs = []
        with open(path, encoding="utf-8") as fh:
            for no, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                recs.append(_parse_line(line, path, no))
        for lat_id, N, count in recs:
            self.put(lat_id, N, count, mark_dirty=mark_dirty)
        return len(recs)

    def flush(self) -> None:
        if self.directory is None:
            return
        with self.lock:
            self._flush_locked()

    def _flush_locked(self) -> None:
        lines = sorted(self.format(k, v) for k, v in self.store.items())
        _atomic_write(self.path, lines)
        self.dirty = 0


def _parse_line(line: str, path, no: int):
    parts = line.split("|")
    where = f"{path}:{no}"
    if len(parts) != 5 or parts[0] != "v1":
        raise IntegrityError(f"{where}: malformed cache line {line!r}")
    _, lat_id, g, up, count = parts
    try:
        g = int(g)
        upper = [int(x) for x in up.split(",")] if up else []
        count = int(count)
        N = FourierIndex.from_upper(g, upper)
    except ValueError as exc:
        raise IntegrityError(f"{where}: {exc}") from None
    if lat_id not in LATTICE_IDS:
        raise IntegrityError(f"{where}: unknown lattice {lat_id!r}")
    if count < 0:
        raise IntegrityError(f"{where}: negative count")
    return lat_id, N, count


def _atomic_write(path: Path, lines) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    os.replace(tmp, path)


_DEFAULT: RepCache | None = None


def default_cache() -> RepCache:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = RepCache(os.environ.get("THETA_CACHE_DIR") or None)
        import atexit
        atexit.register(_DEFAULT.flush)
    return _DEFAULT


def reset_default_cache(directory=None) -> RepCache:
    """Replace the process cache (used by the CLI and tests)."""
    global _DEFAULT
    if _DEFAULT is not None:
        _DEFAULT.flush()
    _DEFAULT = RepCache(directory)
    return _DEFAULT


def coefficient_fraction(x) -> Fraction:
    return Fraction(x)
