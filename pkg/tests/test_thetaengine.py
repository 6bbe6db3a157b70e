import random
from collections import OrderedDict
from itertools import product

import numpy as np
import pytest

from theta16 import kernels
from theta16 import thetaengine as te
from theta16.lattices import D, E8, build_lattice, shell_array
from theta16.qforms import FourierIndex, psd_indices

BACKENDS = kernels.available()


def brute_genus2(lat, N):
    """Pairs of shell vectors with the prescribed inner product, by dense numpy products."""
    (a, b), (_, c) = N.n
    if a == 0 or c == 0:
        return None
    Sa, Sc = shell_array(lat, a), shell_array(lat, c)
    return int(((Sa @ lat.gram_array @ Sc.T) == b).sum())


def brute_genus3(lat, N):
    n = N.n
    S = [shell_array(lat, n[i][i]) for i in range(3)]
    G = lat.gram_array
    P01 = (S[0] @ G @ S[1].T) == n[0][1]
    P02 = (S[0] @ G @ S[2].T) == n[0][2]
    P12 = (S[1] @ G @ S[2].T) == n[1][2]
    return int(np.einsum("ij,ik,jk->", P01.astype(np.int64), P02.astype(np.int64), P12.astype(np.int64)))


def unimodular(rng, g):
    U = np.eye(g, dtype=np.int64)
    for _ in range(rng.randint(1, 6)):
        i, j = rng.sample(range(g), 2)
        U[:, j] += rng.choice((-1, 1)) * U[:, i]
        if rng.random() < 0.3:
            U[:, i] *= -1
        if rng.random() < 0.3:
            U[:, [i, j]] = U[:, [j, i]]
    return U.tolist()


def small_transforms(N, rng, count, max_diag):
    """Distinct random U'NU whose diagonal stays small enough to enumerate."""
    out = []
    while len(out) < count:
        M = N.transform(unimodular(rng, N.genus))
        if max(M.diagonal) <= max_diag:
            out.append(M)
    return out


@pytest.mark.parametrize("lid", ["L0", "L3", "L5", "L7"])
def test_genus2_against_brute_force(lid):
    lat = build_lattice(lid)
    for N in psd_indices(2, 4):
        want = brute_genus2(lat, N)
        if want is not None:
            assert te.rep_number(lat, N, cache=False) == want, N


def test_genus3_against_brute_force_d4_and_e8():
    for lat in (D(4), E8()):
        for N in psd_indices(3, max_diag=2):
            if all(N.diagonal):
                assert te.rep_number(lat, N, cache=False) == brute_genus3(lat, N), N


def test_trivial_indices():
    assert te.rep_number("L5", FourierIndex(())) == 1
    assert te.rep_number("L6", FourierIndex.zero(3)) == 1
    assert te.rep_number("L6", "1") == 0
    # a zero row contributes a zero column only
    assert te.rep_number("L5", FourierIndex.parse("1,0;0,0")) == 32


@pytest.mark.parametrize("backend", BACKENDS)
def test_backends_bitset_and_scan(backend, monkeypatch):
    N = FourierIndex.parse("2,1,0;1,2,1;0,1,2")
    want = brute_genus3(build_lattice("L2"), N)
    assert te.rep_number("L2", N, backend=backend, cache=False) == want
    monkeypatch.setattr(te, "BITSET_LIMIT", 0)
    monkeypatch.setattr(te, "_UNIVERSES", OrderedDict())
    assert te.rep_number("L2", N, backend=backend, cache=False) == want


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")
def test_backends_agree_genus4():
    N = FourierIndex.parse("2,1,0,0;1,2,1,0;0,1,2,1;0,0,1,2")
    a = te.rep_number("L1", N, backend="python", cache=False)
    b = te.rep_number("L1", N, backend="cython", cache=False)
    assert a == b > 0


def test_thread_counts_agree():
    N = FourierIndex.parse("2,-1,0;-1,2,-1;0,-1,2")
    counts = {te.rep_number("L0", N, threads=k, backend=kernels.available()[0], cache=False) for k in (1, 2, 8)}
    assert len(counts) == 1


@pytest.mark.parametrize("lid,N", [("L1", "2,1;1,3"), ("L4", "2,-1,0;-1,2,1;0,1,3"), ("L6", "2,1;1,4")])
def test_gl_invariance_raw_count(lid, N):
    """Counts on U'NU straight from the counter, bypassing every memo."""
    lat, N = build_lattice(lid), FourierIndex.parse(N)
    base = te._count(lat, N, 1)
    for M in small_transforms(N, random.Random(lid), 5, 4):
        assert te._count(lat, M, 1) == base


def test_iter_solutions_and_weight_one():
    N = FourierIndex.parse("1,0;0,2")
    sols = list(te.iter_solutions("L3", N))
    assert len(sols) == te.rep_number("L3", N)
    G = build_lattice("L3").gram_array
    assert all((X.T @ G @ X).tolist() == [list(r) for r in N.n] for X in sols)
    assert len({X.tobytes() for X in sols}) == len(sols)
    assert te.weighted_rep("L3", N, lambda X: 1) == len(sols)


def test_phi_image():
    e3 = te.q_expansion("L2", 3, 3)
    e2 = te.q_expansion("L2", 2, 3)
    phi = te.phi_image(e3)
    assert all(phi[N] == e2[N] for N in psd_indices(2, 3))


@pytest.mark.parametrize("lid", ["L0", "L5", "L6"])
def test_witt_multiplicative_split(lid):
    e2 = te.q_expansion(lid, 2, 4)
    for a, c in product(range(5), repeat=2):
        if a + c <= 4:
            N1, N2 = FourierIndex(((a,),)), FourierIndex(((c,),))
            assert te.witt_coefficient(e2, N1, N2) == te.rep_number(lid, N1) * te.rep_number(lid, N2)


def test_completions_are_psd_and_bounded():
    N1, N2 = FourierIndex.parse("1"), FourierIndex.parse("2,1;1,2")
    comps = list(te.completions(N1, N2))
    assert all(N.submatrix([0]) == N1 and N.submatrix([1, 2]) == N2 for N in comps)
    assert FourierIndex.parse("1,0,0;0,2,1;0,1,2") in comps


def test_expansion_bounds():
    e = te.q_expansion("L5", 1, 3, lazy=False)
    assert [e[n] for n in range(4)] == [1, 32, 480, 4480]
    with pytest.raises(KeyError):
        e[5]
    diff = te.q_expansion("L6", 2, 3) - te.q_expansion("L7", 2, 3)
    assert diff.is_zero()
    with pytest.raises(ValueError):
        te.rep_number("L0", FourierIndex.zero(6))


# --- cache -------------------------------------------------------------------------

def test_cache_roundtrip(tmp_path):
    c = te.RepCache(tmp_path / "a")
    te.rep_number("L4", "2,1;1,2", cache=c)
    te.rep_number("L4", "1", cache=c)
    c.flush()
    text = (tmp_path / "a" / te.RepCache.FILENAME).read_text()
    assert text.splitlines() == sorted(text.splitlines())
    assert c.export(tmp_path / "x.txt") == 2
    d = te.RepCache(tmp_path / "b")
    assert d.import_file(tmp_path / "x.txt") == 2
    assert d.lines() == c.lines()
    again = te.RepCache(tmp_path / "a")
    assert again.get("L4", "1") == 8 + 8


def test_cache_conflict(tmp_path):
    c = te.RepCache()
    c.put("L5", "1", 32)
    c.put("L5", "1", 32)
    with pytest.raises(te.IntegrityError, match="conflict"):
        c.put("L5", "1", 33)
    bad = tmp_path / "bad.txt"
    bad.write_text("v1|L5|1|1|31\n")
    with pytest.raises(te.IntegrityError):
        c.import_file(bad)


@pytest.mark.parametrize("line", [
    "v2|L5|1|1|32", "v1|L5|1|1", "v1|L9|1|1|32", "v1|L5|1|x|32", "v1|L5|2|1,2,1|3", "v1|L5|1|1|-4",
])
def test_cache_malformed(tmp_path, line):
    p = tmp_path / "c.txt"
    p.write_text("v1|L5|1|2|480\n" + line + "\n")
    with pytest.raises(te.IntegrityError, match=":2"):
        te.RepCache().import_file(p)


def test_cache_autosave(tmp_path):
    c = te.RepCache(tmp_path, autosave=2)
    c.put("L5", "1", 32)
    assert not c.path.exists()
    c.put("L5", "2", 480)
    assert len(c.path.read_text().splitlines()) == 2
