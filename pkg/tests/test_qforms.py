import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from theta16.qforms import (
    FourierIndex, IndexError_, dyadic_trace, is_positive_definite, is_psd, is_tic_translation,
    is_toc_translation, is_very_even, minimum, nonpositive_direction, psd_indices, short_vectors,
    toc_generators, toc_indices,
)
from theta16.symplectic import is_theta_group, t

D4 = [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]]


def eye(g, k=1):
    return [[k * int(i == j) for j in range(g)] for i in range(g)]


def random_pd(rng, g, bound=4, den=2):
    while True:
        m = [[Fraction(0)] * g for _ in range(g)]
        for i in range(g):
            for j in range(i, g):
                m[i][j] = m[j][i] = Fraction(rng.randint(-bound * den, bound * den), den)
            m[i][i] = Fraction(rng.randint(1, bound * den), den)
        if is_positive_definite(m):
            return m


def random_unimodular(rng, g, steps=6):
    U = np.eye(g, dtype=np.int64)
    for _ in range(steps):
        i, j = rng.sample(range(g), 2) if g > 1 else (0, 0)
        if i != j:
            U[:, j] += rng.choice((-1, 1)) * U[:, i]
        if rng.random() < 0.3:
            U[:, i] *= -1
    return U.tolist()


def congruent(T, U):
    g = len(T)
    return [[sum(U[k][i] * T[k][l] * U[l][j] for k in range(g) for l in range(g)) for j in range(g)]
            for i in range(g)]


def block(T1, T2, W=None):
    g1, g2 = len(T1), len(T2)
    W = W or [[0] * g2 for _ in range(g1)]
    rows = [list(T1[i]) + list(W[i]) for i in range(g1)]
    rows += [[W[i][j] for i in range(g1)] + list(T2[j]) for j in range(g2)]
    return rows


# --- FourierIndex --------------------------------------------------------------------

@given(st.integers(1, 4).flatmap(lambda g: st.tuples(st.just(g), st.integers(0, 10 ** 6))))
def test_index_serialization_roundtrip(arg):
    g, seed = arg
    rng = random.Random(seed)
    N = FourierIndex(tuple(map(tuple, congruent(eye(g, 2), random_unimodular(rng, g)))))
    assert FourierIndex.from_upper(g, N.upper()) == N
    assert FourierIndex.parse(str(N)) == N
    assert FourierIndex.from_upper(g, [int(x) for x in N.serialize().split(",")]) == N if g else True


def test_index_rejects_bad_input():
    with pytest.raises(IndexError_):
        FourierIndex(((1, 2), (2, 1)))
    with pytest.raises(IndexError_):
        FourierIndex(((1, 0), (1, 1)))
    with pytest.raises(ValueError):
        FourierIndex.parse("1,x;2,3")


def test_index_block_operations():
    a, b = FourierIndex.parse("2"), FourierIndex.parse("2,1;1,2")
    s = a + b
    assert s.genus == 3 and s.trace == 6 and s.diagonal == (2, 2, 2)
    assert s.submatrix([1, 2]) == b
    assert FourierIndex.zero(2).trace == 0 and not FourierIndex.zero(2).is_definite()


def test_psd_indices_genus2_count():
    idx = list(psd_indices(2, 2))
    brute = [m for m in product(range(3), range(-2, 3), range(3))
             if m[0] + m[2] <= 2 and m[0] * m[2] >= m[1] ** 2]
    assert len(idx) == len(brute) == len(set(idx))


def test_psd_and_direction():
    assert is_psd([[1, 1], [1, 1]]) and not is_positive_definite([[1, 1], [1, 1]])
    w = nonpositive_direction([[1, 2], [2, 1]])
    m = [[1, 2], [2, 1]]
    assert sum(w[i] * m[i][j] * w[j] for i in range(2) for j in range(2)) <= 0
    assert nonpositive_direction(D4) is None


# --- minimum ------------------------------------------------------------------------

@pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
def test_minimum_identity_and_scaling(g):
    assert minimum(eye(g)) == 1
    assert minimum(eye(g, 2)) == 2


def test_minimum_d4_against_box():
    box = min(np.array(v) @ np.array(D4) @ np.array(v)
              for v in product(range(-3, 4), repeat=4) if any(v))
    assert minimum(D4) == box == 2


def test_minimum_rejects_singular():
    with pytest.raises(ValueError, match="definite"):
        minimum([[1, 1], [1, 1]])


def test_short_vectors_complete():
    T = [[Fraction(3, 2), Fraction(1, 2)], [Fraction(1, 2), 1]]
    got = {v for v, _ in short_vectors(T, 3)}
    box = set()
    for v in product(range(-4, 5), repeat=2):
        if any(v) and sum(v[i] * T[i][j] * v[j] for i in range(2) for j in range(2)) <= 3:
            if v not in box and tuple(-x for x in v) not in box:
                box.add(v)
    assert {frozenset((v, tuple(-x for x in v))) for v in got} == \
        {frozenset((v, tuple(-x for x in v))) for v in box}


@pytest.mark.parametrize("seed", range(10))
def test_minimum_invariance_and_superadditivity(seed):
    rng = random.Random(seed)
    g = rng.randint(2, 4)
    a, b = random_pd(rng, g), random_pd(rng, g)
    U = random_unimodular(rng, g)
    assert minimum(congruent(a, U)) == minimum(a)
    s = [[a[i][j] + b[i][j] for j in range(g)] for i in range(g)]
    assert minimum(s) >= minimum(a) + minimum(b)
    assert minimum([[3 * x for x in r] for r in a]) == 3 * minimum(a)


# --- dyadic trace -------------------------------------------------------------------

@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_dyadic_identity(g):
    cert = dyadic_trace(eye(g))
    assert cert.value == g and cert.check(eye(g))
    assert cert.dual_minimum >= 1


def test_dyadic_known_values():
    assert dyadic_trace([[1, 2], [2, 5]]).value == 2
    assert dyadic_trace([[1, Fraction(1, 2)], [Fraction(1, 2), 1]]).value == Fraction(3, 2)
    with pytest.raises(ValueError):
        dyadic_trace([[1, 1], [1, 1]])


@pytest.mark.parametrize("seed", range(8))
def test_dyadic_invariance_and_scaling(seed):
    rng = random.Random(100 + seed)
    g = rng.randint(2, 3)
    T = random_pd(rng, g)
    w = dyadic_trace(T)
    assert w.check(T)
    TU = congruent(T, random_unimodular(rng, g))
    assert dyadic_trace(TU).value == w.value
    assert dyadic_trace([[Fraction(5, 2) * x for x in r] for r in T]).value == Fraction(5, 2) * w.value


# --- translation lattices -----------------------------------------------------------

def test_tic_examples_and_membership():
    assert is_tic_translation([[2, 0], [0, 0]])
    assert not is_tic_translation([[1, 0], [0, 0]])
    assert is_tic_translation([[0, 1], [1, 0]])
    for S in product(range(2), repeat=3):
        m = [[S[0], S[1]], [S[1], S[2]]]
        assert is_tic_translation(m) == is_theta_group(t(m))


def test_toc_examples():
    assert is_toc_translation([[2, 4], [4, 6]])
    assert is_toc_translation(eye(3))
    assert is_toc_translation([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert not is_toc_translation([[0, 1], [1, 0]])
    assert all(is_toc_translation(S) for S in toc_generators(4))


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_toc_indices(g):
    i, j = toc_indices(g)
    assert (i, j) == (2 ** (g - 1), 2 ** (1 + g * (g - 1) // 2))
    assert i * j == 2 ** (g * (g + 1) // 2)


def test_very_even():
    for g in (1, 2, 3, 4):
        assert is_very_even(eye(g, 4))
        assert not is_very_even(eye(g, 2))
    for N in psd_indices(2, 8):
        if is_very_even(N):
            assert all(x % 4 == 0 for x in N.diagonal)
