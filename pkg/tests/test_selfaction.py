from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cogalois.catalog import abelian, by_name, cyclic, dicyclic, dihedral
from cogalois.classify import d8_q_triples, family_i, remark_triple
from cogalois.cocycle import Triple
from cogalois.errors import BadParameters, NotAdequate, NotKneser
from cogalois.groups import find_isomorphism
from cogalois.kneser import is_cogalois_triple
from cogalois.operators import trivial_action
from cogalois.selfaction import (
    adequate_units,
    adequate_units_brute,
    adequate_units_criterion,
    deform,
    deformation_classes,
    induced_self_action,
    is_adequate,
    is_rigid,
    kneser_structure,
    self_action,
    unit_is_adequate,
    unit_self_action,
)


def bullet_associative(n, u):
    """Oracle: x . y = x + u^-x y on Z/n is associative."""
    ui = pow(u, -1, n)
    b = [[(x + pow(ui, x, n) * y) % n for y in range(n)] for x in range(n)]
    return all(b[b[x][y]][z] == b[x][b[y][z]] for x in range(n) for y in range(n) for z in range(n))


@pytest.mark.parametrize("n", list(range(2, 31)))
def test_adequate_units_against_associativity(n):
    expected = [u for u in range(1, n) if gcd(u, n) == 1 and pow(u, n, n) == 1 % n and bullet_associative(n, u)]
    assert adequate_units(n) == expected


def test_adequate_unit_values():
    assert adequate_units(4) == [1, 3]
    assert adequate_units(8) == [1, 3, 5, 7]
    assert adequate_units(9) == [1, 4, 7]


def test_trivial_and_z4_adequate():
    G = cyclic(5)
    assert is_adequate(self_action(G, [list(range(5))] * 5))
    assert unit_is_adequate(4, 3)
    # 2 has order 6 mod 9, so y -> 2^x y is not even a self-action of Z/9
    with pytest.raises(BadParameters):
        unit_self_action(9, 2)


def test_deformations():
    assert find_isomorphism(deform(unit_self_action(4, 3)).group, abelian(2, 2)) is not None
    assert find_isomorphism(deform(unit_self_action(8, 7)).group, dihedral(8)) is not None
    assert find_isomorphism(deform(unit_self_action(8, 3)).group, dicyclic(8)) is not None
    d = deform(unit_self_action(6, 1))
    assert d.group.table == cyclic(6).table
    assert d.forward.values == tuple(range(6))


def test_not_adequate_rejected():
    # first unit self-action that the oracle rejects
    for n in range(2, 40):
        for u in range(1, n):
            if gcd(u, n) == 1 and pow(u, n, n) == 1 % n and not bullet_associative(n, u):
                with pytest.raises(NotAdequate):
                    deform(unit_self_action(n, u))
                return
    pytest.fail("no non-adequate unit self-action found below 40")


def test_deformation_classes():
    for p in (3, 5, 7):
        assert is_rigid(cyclic(p))
    names = lambda G: [c.representative for c in deformation_classes(G)]
    c4 = names(cyclic(4))
    assert len(c4) == 2 and find_isomorphism(c4[1], abelian(2, 2)) is not None
    c8 = names(cyclic(8))
    assert len(c8) == 3
    assert any(find_isomorphism(g, dihedral(8)) for g in c8)
    assert any(find_isomorphism(g, dicyclic(8)) for g in c8)


def test_example_triples_for_n_8():
    for u in (7, 3):
        d = deform(unit_self_action(8, u))
        assert is_cogalois_triple(d.forward)
        assert d.backward.is_surjective and not is_cogalois_triple(d.backward)


def test_kneser_structures():
    one = kneser_structure(Triple(trivial_action(cyclic(3), cyclic(1)), (0, 0, 0)))
    assert len(one.points) == 1
    ks = kneser_structure(family_i())
    assert len(ks.points) == 4
    fwd, _ = d8_q_triples()
    ks = kneser_structure(fwd)
    assert len(ks.points) == 8
    with pytest.raises(NotKneser):
        kneser_structure(remark_triple())


def test_induced_self_action_of_deformation():
    d = deform(unit_self_action(8, 3))
    sa = induced_self_action(d.backward)
    assert sa is not None


@given(st.integers(2, 60))
def test_criterion_and_formula_agree(n):
    assert adequate_units_brute(n) == adequate_units_criterion(n)
