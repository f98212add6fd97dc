import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cogalois.catalog import abelian, by_name, cyclic, dicyclic, dihedral
from cogalois.classify import d8_q_triples, family_i, remark_triple
from cogalois.errors import NotAnAction, NotAutomorphism, ParseError
from cogalois.groups import automorphisms, bits, find_isomorphism, to_mask
from cogalois.operators import (
    GammaGroup,
    action_from_semidirect,
    all_actions,
    all_ideals,
    character_action,
    characters,
    gamma_group_from_json,
    gamma_group_to_json,
    make_gamma_group,
    quotient_gamma,
    semidirect,
    trivial_action,
    unit_group,
)

from conftest import SMALL

NEG4 = [[0, 1, 2, 3], [0, 3, 2, 1]]


def test_fixers():
    gg = trivial_action(cyclic(3), cyclic(4))
    assert gg.fix_mask == gg.gamma.full_mask
    assert bits(make_gamma_group(cyclic(2), cyclic(4), NEG4).fix_mask) == [0]
    fi = family_i().gg
    assert bits(fi.fix_mask) == [0, 1]  # tau = 1 acts trivially, sigma = 2 by negation


def test_rejects_non_action():
    with pytest.raises(NotAutomorphism):
        make_gamma_group(cyclic(2), cyclic(4), [[0, 1, 2, 3], [0, 2, 1, 3]])
    with pytest.raises(NotAnAction):
        # a valid automorphism, but order 4 cannot be the image of Z/2
        make_gamma_group(cyclic(2), abelian(2, 2), [[0, 1, 2, 3], [0, 2, 3, 1]])


def test_semidirect_examples():
    gg = trivial_action(cyclic(2), cyclic(3))
    assert find_isomorphism(semidirect(gg).e, cyclic(6)) is not None
    neg = make_gamma_group(cyclic(2), cyclic(4), NEG4)
    sd = semidirect(neg)
    assert find_isomorphism(sd.e, dihedral(8)) is not None
    assert action_from_semidirect(sd) == [list(r) for r in neg.act]


@given(st.sampled_from([g for g in SMALL if g.order <= 4]), st.sampled_from([g for g in SMALL if g.order <= 6]), st.data())
def test_semidirect_roundtrip(gamma, g, data):
    act = data.draw(st.sampled_from(all_actions(gamma, g)))
    gg = GammaGroup(gamma, g, act)
    assert action_from_semidirect(semidirect(gg)) == [list(r) for r in gg.act]


def _brute_action_count(gamma, g):
    auts = [a.map for a in automorphisms(g)]
    count = 0
    for images in itertools.product(auts, repeat=gamma.order):
        if images[0] != tuple(range(g.order)):
            continue
        if all(
            images[gamma.table[s][u]] == tuple(images[s][images[u][x]] for x in range(g.order))
            for s in range(gamma.order)
            for u in range(gamma.order)
        ):
            count += 1
    return count


@pytest.mark.parametrize("gn,hn", [("C2", "C4"), ("C2^2", "C4"), ("C3", "C2^2"), ("C4", "C2^2"), ("S3", "C3"), ("C2", "S3")])
def test_action_count_matches_brute_force(gn, hn):
    gamma, g = by_name(gn), by_name(hn)
    assert len(all_actions(gamma, g)) == _brute_action_count(gamma, g)


def test_ideals_examples():
    neg = make_gamma_group(cyclic(2), cyclic(4), NEG4)
    assert sorted(bits(m) for m in all_ideals(neg).masks) == [[0], [0, 1, 2, 3], [0, 2]]
    # simple module: Z/2 acting on F_3 by negation
    simple = make_gamma_group(cyclic(2), cyclic(3), [[0, 1, 2], [0, 2, 1]])
    assert len(simple.ideal_masks) == 2
    fwd, _ = d8_q_triples()
    Q = fwd.g
    ideals = set(fwd.gg.ideal_masks)
    assert {1, Q.center_mask, Q.full_mask} <= ideals
    brute = set()
    T, act = Q.table, fwd.gg.act
    for r in range(8):
        for rest in itertools.combinations(range(1, 8), r):
            s = {0, *rest}
            closed = all(T[a][Q.inverse[b]] in s for a in s for b in s)
            normal = all(T[T[g][a]][Q.inverse[g]] in s for g in range(8) for a in s)
            invariant = all(act[c][a] in s for c in range(8) for a in s)
            if closed and normal and invariant:
                brute.add(to_mask(s))
    assert ideals == brute


def test_quotient_gamma():
    neg = make_gamma_group(cyclic(2), cyclic(4), NEG4)
    q, proj = quotient_gamma(neg, 1)
    assert q.g.order == 4
    q, _ = quotient_gamma(neg, neg.g.full_mask)
    assert q.g.order == 1
    q, _ = quotient_gamma(neg, to_mask([0, 2]))
    assert q.g.order == 2 and q.is_trivial


def test_characters():
    U = unit_group(8)
    assert list(U.units) == [1, 3, 5, 7]
    chis = characters(abelian(2, 2), 4)
    assert len(chis) == 4  # Hom((Z/2)^2, (Z/4)^x)
    gg = character_action(abelian(2, 2), cyclic(4), chis[-1])
    assert GammaGroup(gg.gamma, gg.g, gg.act) is not None


def test_json_roundtrip():
    gg = remark_triple().gg
    back = gamma_group_from_json(gamma_group_to_json(gg))
    assert [list(r) for r in back.act] == [list(r) for r in gg.act]
    with pytest.raises(ParseError):
        gamma_group_from_json({"gamma": {}, "g": {}})


@given(st.sampled_from([g for g in SMALL if g.order <= 4]), st.sampled_from([g for g in SMALL if g.order <= 8]), st.data())
def test_ideal_lattice_is_closed(gamma, g, data):
    act = data.draw(st.sampled_from(all_actions(gamma, g)))
    gg = GammaGroup(gamma, g, act, validate=False)
    masks = gg.ideal_masks
    for a in masks:
        for b in masks:
            assert a & b in masks
            assert gg.ideal_closure(a | b) in masks
