from fractions import Fraction

import pytest

from theta16 import relations as rel
from theta16 import thetaengine as te
from theta16.lattices import LATTICE_IDS
from theta16.qforms import FourierIndex, psd_indices

RAMANUJAN_TAU = [1, -24, 252, -1472, 4830, -6048]


def test_nodes_and_powers():
    assert rel.nodes() == (0, 2, 4, 8, 16, 32)
    assert rel.xi_power(0) == (1,) * 6
    assert rel.xi_power(2) == (0, 4, 16, 64, 256, 1024)


def test_dual_basis():
    du = rel.xi_dual()
    for j in range(6):
        for k in range(6):
            assert sum(a * b for a, b in zip(du[j], rel.xi_power(k))) == (j == k)


def test_power_identity():
    assert rel.power_identity()
    assert rel.power_identity_from_roots() == rel.XI6_COEFFS
    x = 2
    assert x ** 6 == sum(c * x ** (5 - k) for k, c in enumerate(rel.XI6_COEFFS))


def test_eta24_is_ramanujan_tau():
    s = rel.eta_power_series(24, 2 * (len(RAMANUJAN_TAU) - 1))
    assert [s[2 * n] for n in range(len(RAMANUJAN_TAU))] == RAMANUJAN_TAU
    assert all(s[2 * n + 1] == 0 for n in range(len(RAMANUJAN_TAU) - 1))


def test_series_algebra():
    a = rel.HalfIntSeries([1, 2, 3], 4)
    b = rel.HalfIntSeries([0, 1], 4)
    assert (a * b).coeffs == [0, 1, 2, 3, 0]
    assert (a + b - b).coeffs == a.coeffs
    assert (b ** 3).coeffs == [0, 0, 0, 1, 0]
    with pytest.raises(KeyError):
        a[5]


def test_genus1_three_term_relation():
    bound = 8
    xi = rel.genus1_xi0_series(bound)
    assert xi.coeffs[:9] == [0, 1, 8, 12, -64, -210, 96, 1016, 512]
    for i, tau in enumerate(rel.nodes()):
        for n in range(bound + 1):
            want = tau * xi[n] + te.rep_number("L0", n)
            assert te.rep_number(LATTICE_IDS[i], n) == want


def test_theta1_equals_series():
    xi = rel.genus1_xi0_series(8)
    T1 = rel.theta_j(1, 1)
    assert all(T1[FourierIndex(((n,),))] == xi[n] for n in range(9))


@pytest.mark.parametrize("g", [1, 2])
def test_expansion_identity(g):
    for N in psd_indices(g, 4):
        assert rel.we_check(g, N)


def test_theta_combination_kinds():
    e = rel.theta_combination((1, -1, 0, 0, 0, 0), 1, 2)
    assert e.kind == "integer" and e[FourierIndex(((1,),))] == -2
    assert rel.theta_j(5, 1).kind == "rational"
    with pytest.raises(ValueError):
        rel.theta_combination((1, 2), 1)


def test_schottky_vanishes_genus2():
    J = rel.schottky(2, 4)
    assert J.is_zero()


@pytest.mark.parametrize("g,want", [(1, (Fraction(2, 3), 12)), (2, (Fraction(4, 5), 10)), (3, (Fraction(8, 9), 9))])
def test_slopes(g, want):
    assert rel.slope_table(g) == want


def test_witt_identity_low_genus():
    one = FourierIndex(((1,),))
    assert rel.witt_identity_check("psi11_T2", one, one)
    with pytest.raises(ValueError):
        rel.witt_sides("psi11_T2", one, FourierIndex.parse("1,0;0,1"))


def test_filtration_rank_monotone():
    idx = list(psd_indices(1, 3))
    ranks = [rel.filtration_rank(1, idx[:k]) for k in range(len(idx) + 1)]
    assert ranks == sorted(ranks) and ranks[-1] == 3
