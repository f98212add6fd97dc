import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cogalois.catalog import abelian, by_name, cyclic
from cogalois.classify import family_i, remark_triple
from cogalois.cocycle import Triple, cocycle_value_lists, generating_triples
from cogalois.connexion import (
    augmentation_check,
    augmentation_model,
    cog_group,
    cog_lemma_check,
    composition_check,
    connexion,
    dual_module,
    equivariant_homs,
    hom_gamma_count,
    op_J,
    op_S,
    pairing_check,
    verify_cogalois_connexion,
    z1_module,
)
from cogalois.errors import NotAboveKernel
from cogalois.groups import bits, to_mask
from cogalois.operators import GammaGroup, all_actions, make_gamma_group, trivial_action

from conftest import SMALL

NEG4 = [[0, 1, 2, 3], [0, 3, 2, 1]]


def test_j_and_s_examples():
    t = family_i()
    assert op_J(t, t.kernel_mask).mask == 1
    assert op_J(t, t.gamma.full_mask).mask == t.g.full_mask
    sigma = 2
    assert op_J(t, to_mask([0, sigma])).mask == t.g.full_mask
    r = remark_triple()
    assert op_S(r, 1).mask == r.kernel_mask
    assert op_S(r, r.g.full_mask).mask == r.gamma.full_mask
    assert bits(op_S(r, to_mask([0, 2])).mask) == [0]


def test_j_needs_subgroup_over_kernel():
    t = Triple(trivial_action(cyclic(4), cyclic(2)), (0, 1, 0, 1))
    with pytest.raises(NotAboveKernel):
        op_J(t, 1)


def test_connexion_reports():
    for t in (family_i(), remark_triple()):
        rep = verify_cogalois_connexion(t)
        assert rep.ok and rep.checked > 0
    trivial = Triple(trivial_action(cyclic(2), cyclic(1)), (0, 0))
    assert verify_cogalois_connexion(trivial).ok
    lam, ids = connexion(family_i()).fixed_points()
    assert family_i().gamma.full_mask in lam


@given(st.sampled_from([g for g in SMALL if g.order <= 6]), st.sampled_from([g for g in SMALL if g.order <= 6]), st.data())
def test_connexion_laws_random(gamma, g, data):
    act = data.draw(st.sampled_from(all_actions(gamma, g)))
    gg = GammaGroup(gamma, g, act, validate=False)
    gen = list(generating_triples(gg))
    if not gen:
        return
    t = data.draw(st.sampled_from(gen))
    assert verify_cogalois_connexion(t).ok
    # independent recomputation of J and S
    for lam in t.subgroups_over_kernel:
        j = t.J(lam)
        assert t.image_of(lam) & ~j == 0 and gg.is_ideal_mask(j)
        assert lam & ~t.S(j) == 0


def test_z1_examples():
    z = z1_module(trivial_action(cyclic(2), cyclic(2)))
    assert z.order == 2
    neg = make_gamma_group(cyclic(2), cyclic(4), NEG4)
    z = z1_module(neg)
    assert (z.order, bin(z.coboundary_mask).count("1"), z.h1_order) == (4, 2, 2)
    d = dual_module(neg)
    assert len(equivariant_homs(d)) == 4
    assert d.triple.is_generating


def test_dual_trivial_is_iso():
    d = dual_module(trivial_action(cyclic(2), cyclic(2)))
    assert d.order == 2 and d.triple.is_bijective


def test_s3_sign_action_full_pass():
    S3 = by_name("S3")
    sign_acts = [a for a in all_actions(S3, cyclic(3)) if any(list(row) != [0, 1, 2] for row in a)]
    assert sign_acts
    gg = GammaGroup(S3, cyclic(3), sign_acts[0])
    d = dual_module(gg)
    assert pairing_check(d).ok
    assert composition_check(d).ok


@pytest.mark.parametrize("gn", ["C1", "C2", "C3", "C2^2", "S3"])
def test_augmentation_counts(gn):
    gamma = by_name(gn)
    for p in (2, 3):
        for A in (cyclic(p), abelian(p, p)):
            for act in all_actions(gamma, A):
                gg = GammaGroup(gamma, A, act)
                assert augmentation_check(gg).ok
                assert len(cocycle_value_lists(gg)) == hom_gamma_count(gg, p)


def test_augmentation_trivial_and_model():
    gg = trivial_action(cyclic(2), cyclic(2))
    assert hom_gamma_count(gg, 2) == 2 == len(cocycle_value_lists(gg))
    I, t = augmentation_model(cyclic(3), 3)
    assert I.g.order == 9 and t.is_generating




def test_cog_examples():
    triv = trivial_action(cyclic(2), cyclic(3))
    assert cog_group(triv).cog.order == 1
    neg = make_gamma_group(cyclic(2), cyclic(4), NEG4)
    data = cog_group(neg)
    assert bits(data.invariants) == [0, 2] and data.cog.order == 2
    assert cog_lemma_check(neg) is False
    simple = make_gamma_group(cyclic(2), cyclic(3), [[0, 1, 2], [0, 2, 1]])
    assert cog_lemma_check(simple) is True


@given(st.sampled_from([g for g in SMALL if g.order <= 4]), st.sampled_from([g for g in SMALL if g.order <= 6 and g.is_abelian]), st.data())
def test_pairing_and_composition_random(gamma, A, data):
    act = data.draw(st.sampled_from(all_actions(gamma, A)))
    d = dual_module(GammaGroup(gamma, A, act, validate=False))
    assert pairing_check(d).ok
    assert composition_check(d).ok
