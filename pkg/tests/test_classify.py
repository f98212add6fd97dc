from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cogalois.catalog import abelian, cyclic, dihedral
from cogalois.classify import (
    ClassificationRun,
    FoundClass,
    d8_q_triples,
    endomorphism_ring,
    enumerate_mncg,
    enumerate_mnk,
    expected_mncg,
    family_i,
    family_ii,
    family_iii,
    family_iii_flags,
    is_mncg,
    is_mnk,
    mnk_invariant_audit,
    remark_triple,
    ring_is_local,
    triple_invariants,
    triples_isomorphic,
)
from cogalois.cocycle import Triple, make_triple
from cogalois.errors import BoundExceeded, NotGenerating, NotSurjective
from cogalois.groups import find_isomorphism
from cogalois.operators import trivial_action
from cogalois.rings import field_triple, truncated_polynomial_ring, principal_unit_triples


def test_mnk_examples():
    assert is_mnk(remark_triple())
    assert is_mnk(field_triple(3, 2))
    assert not is_mnk(family_i())  # Kneser
    with pytest.raises(NotGenerating):
        is_mnk(Triple(trivial_action(cyclic(2), cyclic(2)), (0, 0)))


def test_mncg_examples():
    assert is_mncg(family_i())
    assert is_mncg(family_ii())
    fwd, _ = d8_q_triples()
    assert is_mncg(fwd)
    with pytest.raises(NotSurjective):
        is_mncg(remark_triple())


def test_family_ii_shape():
    t = family_ii()
    assert find_isomorphism(t.gamma, dihedral(8)) is not None
    assert t.g.order == 8 and t.is_surjective


def test_family_iii_smallest():
    t = family_iii(3, 2)
    assert t.gamma.order == 6 and not t.gamma.is_abelian
    assert t.g.order == 6 and is_mncg(t)


def test_d8_q_backward():
    fwd, back = d8_q_triples()
    assert fwd.is_bijective and back.is_bijective
    inv = [0] * 8
    for s, v in enumerate(fwd.values):
        inv[v] = s
    assert back.values == tuple(inv)


def test_isomorphism_search():
    t = family_i()
    iso = triples_isomorphic(t, t)
    assert iso is not None and list(iso.phi.map) == list(range(t.gamma.order))
    assert triples_isomorphic(family_i(), family_ii()) is None
    assert triples_isomorphic(remark_triple(), field_triple(3, 2)) is None


def test_coboundary_scaling_gives_isomorphic_triples():
    # field triples differ only by the choice of nonzero coboundary; scaling by a unit is an isomorphism
    t = field_triple(7, 3)
    gg = t.gg
    for c in range(2, 7):
        scaled = make_triple(gg, [(c * v) % 7 for v in t.values])
        iso = triples_isomorphic(t, scaled)
        assert iso is not None
        # the witness really intertwines everything
        for s in range(t.gamma.order):
            assert iso.psi.map[t.values[s]] == scaled.values[iso.phi.map[s]]


def test_tiny_enumerations():
    run = enumerate_mnk(2, 4, "all")
    found = [c.triple for c in run.classes]
    assert len(found) == 2
    assert any(triples_isomorphic(t, remark_triple()) for t in found)
    assert any(triples_isomorphic(t, field_triple(3, 2)) for t in found)
    run = enumerate_mncg(4, 4, "all")
    assert len(run.classes) == 1 and triples_isomorphic(run.classes[0].triple, family_i())


def test_coprime_abelian_classes_are_field_pairs():
    run = enumerate_mnk(4, 7, "abelian")
    coprime = [c.triple for c in run.classes if _coprime(c.triple.gamma.order, c.triple.g.order)]
    pairs = [(7, 3), (3, 2), (5, 2), (7, 2), (5, 4), (2, 3)]
    assert len(coprime) == len(pairs)
    for p, r in pairs:
        assert sum(triples_isomorphic(t, field_triple(p, r)) is not None for t in coprime) == 1


def _coprime(a, b):
    return gcd(a, b) == 1


def test_workers_do_not_change_output():
    a = enumerate_mnk(4, 8, "character", workers=1).to_json()
    b = enumerate_mnk(4, 8, "character", workers=2).to_json()
    assert a == b


def test_bounds_checked():
    with pytest.raises(BoundExceeded):
        enumerate_mnk(17, 16)


def test_run_json_schema():
    run = enumerate_mnk(2, 4, "all")
    out = run.to_json()
    assert set(out) >= {"bounds", "filter", "classes"}
    assert set(out["classes"][0]) >= {"gamma", "g", "action", "cocycle", "certificate"}


def test_audit_examples():
    rep = mnk_invariant_audit([remark_triple(), field_triple(3, 2)])
    assert rep.ok
    t = field_triple(3, 2)
    assert t.gg.invariants_mask == 1  # G^Gamma = 0
    R = truncated_polynomial_ring(3, 2)
    res = principal_unit_triples(R)
    t = res.triples[0]
    ring = endomorphism_ring(t.gg)
    assert ring_is_local(ring, t.g)
    assert mnk_invariant_audit(res.triples).ok


def test_expected_mncg_families():
    names = [n for n, _ in expected_mncg()]
    assert names == ["i", "ii", "iii(3,2)", "iii(5,2)", "iii(7,2)"]
    for _, t in expected_mncg():
        assert is_mncg(t)
    assert triple_invariants(family_i()) != triple_invariants(family_ii())


def test_family_iii_flags_clean_on_families():
    run = ClassificationRun("mncg", {}, "character", [FoundClass(t, {}) for _, t in expected_mncg()])
    assert family_iii_flags(run) == []
