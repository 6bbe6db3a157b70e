import random

import pytest

from theta16.symplectic import (
    Characteristic, SymplecticMatrix, all_characteristics, char_action, coset_rep,
    double_coset_orbits, even_characteristics, f2_rank, generators, identity,
    in_theta_group_congruence, in_theta_group_stabilizer, involution, is_theta_group, random_word,
    t, trace_constants, u, verify,
)


@pytest.mark.parametrize("g", range(1, 7))
def test_even_count(g):
    assert len(even_characteristics(g)) == 2 ** (g - 1) * (2 ** g + 1)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_delta_orbits(g):
    assert double_coset_orbits(g) == [2 ** g, 2 ** (g - 1) * (2 ** g - 1)]


def test_trace_constants_genus5():
    assert trace_constants(5) == (272, 256) == (16 * 17, 256)


def test_f2_rank():
    assert f2_rank([[1, 0, 1], [0, 1, 1], [1, 1, 0]]) == 2
    assert f2_rank([[2, 4], [0, 0]]) == 0
    assert f2_rank([]) == 0


def test_symplectic_validation():
    with pytest.raises(ValueError):
        SymplecticMatrix(((1,),), ((1,),), ((1,),), ((1,),))
    J = involution(3)
    assert (J @ J @ J @ J) == identity(3)
    assert J @ J.inverse() == identity(3)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_action_is_a_right_action(g):
    rng = random.Random(g)
    for _ in range(30):
        a, b = random_word(g, 6, rng), random_word(g, 6, rng)
        z = rng.choice(list(all_characteristics(g)))
        assert char_action(char_action(z, a), b) == char_action(z, a @ b)
        assert char_action(z, a).parity == z.parity
    assert all(char_action(z, identity(g)) == z for z in all_characteristics(g))


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_theta_group_tests_agree(g):
    rng = random.Random(10 + g)
    seen = set()
    for _ in range(60):
        w = random_word(g, rng.randint(1, 10), rng)
        seen.add(is_theta_group(w))
        assert in_theta_group_congruence(w) == in_theta_group_stabilizer(w)
    assert seen == {True, False}


def test_generator_membership():
    assert is_theta_group(involution(2))
    assert is_theta_group(t(((2, 1), (1, 0))))
    assert not is_theta_group(t(((1, 0), (0, 0))))
    assert is_theta_group(u(((1, 1), (0, 1))))
    assert all(g.is_symplectic() for g in generators(3))


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_coset_representatives(g):
    z0 = Characteristic.zero(g)
    for z in even_characteristics(g):
        assert char_action(z0, coset_rep(z)) == z
    odd = next(z for z in all_characteristics(g) if not z.is_even())
    with pytest.raises(ValueError):
        coset_rep(odd)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_verify_rows_pass(g):
    rows = verify(g, words=20)
    assert all(ok for _, ok, _, _ in rows), rows


def test_characteristic_format():
    z = Characteristic((1, 0), (1, 1))
    assert str(z) == "[10;11]" and z.parity == 1 and not z.is_even()
    with pytest.raises(ValueError):
        Characteristic((1,), (0, 0))
