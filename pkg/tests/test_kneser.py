import pytest
from hypothesis import given
from hypothesis import strategies as st

from cogalois.catalog import abelian, by_name, cyclic
from cogalois.classify import family_i, family_ii, family_iii, remark_triple
from cogalois.cocycle import Triple, cocycle_value_lists, generating_triples, make_triple
from cogalois.errors import NotNilpotent
from cogalois.groups import bits, to_mask
from cogalois.kneser import (
    central_image_criterion,
    classify_ideals,
    cogalois_criterion,
    is_cogalois_triple,
    is_surjective_multi,
    kneser_criterion,
    pronil_criterion,
    triple_summary,
)
from cogalois.operators import GammaGroup, all_actions, make_gamma_group, trivial_action
from cogalois.selfaction import deform, unit_self_action

from conftest import SMALL


def test_surjectivity_examples():
    t = Triple(trivial_action(cyclic(2), cyclic(2)), (0, 0))
    assert not is_surjective_multi(t).is_kneser
    rep = is_surjective_multi(family_i())
    assert rep.is_kneser and rep.witnesses["index"] == 4 == family_i().g.order
    r = remark_triple()
    assert not is_surjective_multi(r).is_kneser
    assert bin(r.image_mask).count("1") == 2


def test_pronil_on_z6():
    gamma = abelian(2, 3)
    g = cyclic(6)
    gg = trivial_action(gamma, g)
    # hom onto the 2-part only: (a, b) -> 3a
    two_only = make_triple(gg, [3 * (x // 3) % 6 for x in range(6)])
    assert pronil_criterion(two_only) is False
    iso = make_triple(gg, [(3 * (x // 3) + 2 * (x % 3)) % 6 for x in range(6)])
    assert pronil_criterion(iso) is True
    with pytest.raises(NotNilpotent):
        pronil_criterion(Triple(trivial_action(cyclic(2), by_name("S3")), (0, 0)))


def test_ideal_criterion_central_case():
    for t in (family_i(), family_ii(), family_iii(3, 2)):
        assert central_image_criterion(t) == t.is_surjective


def test_ideal_classification_examples():
    r = remark_triple()
    cls = classify_ideals(r)
    assert sorted(bits(a) for a in cls.kneser_set) == [[0, 1, 2, 3], [0, 2]]
    assert [bits(a) for a in cls.nk_max] == [[0]]
    f = classify_ideals(family_i())
    assert sorted(bits(a) for a in f.cogalois_set) == [[0, 1, 2, 3], [0, 2]]
    assert [bits(a) for a in f.ncg_max] == [[0]]
    assert kneser_criterion(r, to_mask([0, 2])) is True
    assert kneser_criterion(r, 1) is False
    assert cogalois_criterion(family_i(), to_mask([0, 2])) is True


def test_cogalois_examples():
    gg = trivial_action(cyclic(3), cyclic(3))
    assert is_cogalois_triple(make_triple(gg, [0, 1, 2]))
    d = deform(unit_self_action(4, 3))
    assert is_cogalois_triple(d.forward)
    assert d.backward.is_surjective and not is_cogalois_triple(d.backward)


def test_summary_shape():
    s = triple_summary(remark_triple())
    assert set(s) >= {"generating", "normalized", "kneser", "cogalois", "ideals", "nk_max", "ncg_max"}
    t = Triple(trivial_action(cyclic(2), cyclic(1)), (0, 0))
    assert triple_summary(t)["kneser"] is True


@given(st.sampled_from([g for g in SMALL if g.order <= 6]), st.sampled_from([g for g in SMALL if g.order <= 8]), st.data())
def test_ideal_sets_are_upper_sets(gamma, g, data):
    act = data.draw(st.sampled_from(all_actions(gamma, g)))
    gg = GammaGroup(gamma, g, act, validate=False)
    gen = list(generating_triples(gg))
    if not gen:
        return
    t = data.draw(st.sampled_from(gen))
    cls = classify_ideals(t)
    for a in cls.ideals:
        for b in cls.ideals:
            if a & b == a:
                assert not cls.kneser[a] or cls.kneser[b]
                assert not cls.cogalois[a] or cls.cogalois[b]
        assert kneser_criterion(t, a) == cls.kneser[a]
        # Kneser ideal means the induced cocycle is onto G/a: count cosets hit
        assert cls.kneser[a] == _onto_quotient(t, a)


def _onto_quotient(t, a):
    g = t.g
    members = bits(a)
    hit = {frozenset(g.table[v][x] for x in members) for v in t.values}
    return len(hit) * len(members) == g.order
