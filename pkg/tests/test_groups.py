import itertools
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cogalois.catalog import abelian, by_name, cyclic, dicyclic, dihedral, small_groups
from cogalois.errors import NoIdentity, NoInverse, NotAssociative, ParseError
from cogalois.groups import (
    all_subgroups,
    automorphisms,
    bits,
    find_isomorphism,
    group_from_json,
    group_to_json,
    homomorphisms,
    make_group,
    quotient,
    to_mask,
)
from cogalois.selfaction import deform, unit_self_action

from conftest import SMALL


def z(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def test_trivial_and_cyclic():
    assert make_group([[0]]).order == 1
    G = make_group(z(4))
    assert G.inverse[1] == 3


def test_perturbed_s3_is_rejected(s3):
    # every single-entry perturbation of S3 that keeps the Latin square broken somewhere
    table = [list(r) for r in s3.table]
    table[1][2], table[1][3] = table[1][3], table[1][2]
    with pytest.raises((NotAssociative, NoInverse, NoIdentity)):
        make_group(table)


def test_identity_must_sit_at_zero():
    t = [[1, 0], [0, 1]]
    with pytest.raises(NoIdentity):
        make_group(t)


def test_closure(s3):
    G = make_group(z(4))
    assert G.closure([]) == [0]
    assert sorted(G.closure([2])) == [0, 2]
    transposition = next(x for x in range(6) if s3.element_orders[x] == 2)
    three_cycle = next(x for x in range(6) if s3.element_orders[x] == 3)
    assert sorted(s3.closure([transposition, three_cycle])) == list(range(6))


def _brute_subgroups(G):
    out = set()
    for r in range(1, G.order + 1):
        for sub in itertools.combinations(range(G.order), r):
            s = set(sub)
            if 0 in s and all(G.table[a][G.inverse[b]] in s for a in s for b in s):
                out.add(to_mask(s))
    return out


@pytest.mark.parametrize("name,count", [("C4", 3), ("C2^2", 5), ("S3", 6)])
def test_subgroup_counts(name, count):
    G = by_name(name)
    masks = G.subgroup_masks()
    assert len(masks) == count
    assert set(masks) == _brute_subgroups(G)


@pytest.mark.parametrize("G", [g for g in SMALL if g.order <= 8], ids=lambda g: g.name)
def test_subgroup_lattice_matches_brute_force(G):
    assert set(G.subgroup_masks()) == _brute_subgroups(G)


def test_quotients(s3, d8):
    C4 = cyclic(4)
    assert quotient(C4, to_mask([0, 2]))[0].order == 2
    a3 = next(m for m in s3.subgroup_masks() if bin(m).count("1") == 3)
    assert quotient(s3, a3)[0].order == 2
    q, _ = quotient(d8, d8.center_mask)
    assert find_isomorphism(abelian(2, 2), q) is not None


@pytest.mark.parametrize("name,count", [("C4", 2), ("C2^2", 6), ("C8", 4), ("D8", 8), ("Q8", 24), ("S3", 6)])
def test_automorphism_counts(name, count):
    assert len(automorphisms(by_name(name))) == count


def test_isomorphism_examples():
    assert find_isomorphism(cyclic(4), abelian(2, 2)) is None
    assert find_isomorphism(cyclic(6), abelian(2, 3)) is not None
    D = deform(unit_self_action(8, 7)).group
    assert find_isomorphism(D, dihedral(8)) is not None


@given(st.integers(1, 12), st.integers(1, 12))
def test_hom_count_between_cyclic_groups(m, n):
    assert len(homomorphisms(cyclic(m), cyclic(n))) == gcd(m, n)


# catalog: number of groups of each order up to 16
GROUP_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2, 11: 1, 12: 5, 13: 1, 14: 2, 15: 1, 16: 14}


def test_catalog_is_complete_and_irredundant():
    groups = small_groups(16)
    for n, k in GROUP_COUNTS.items():
        same = [G for G in groups if G.order == n]
        assert len(same) == k, n
    # pairwise non-isomorphic within each order (orders up to 12 to keep this quick)
    for n in range(1, 13):
        same = [G for G in groups if G.order == n]
        for a, b in itertools.combinations(same, 2):
            assert find_isomorphism(a, b) is None, (a.name, b.name)


def test_quaternion_and_dihedral_encodings():
    Q = dicyclic(8, "Q8")
    assert sorted(Q.element_orders) == [1, 2, 4, 4, 4, 4, 4, 4]
    D = dihedral(8)
    assert sorted(D.element_orders) == [1, 2, 2, 2, 2, 2, 4, 4]


@given(st.sampled_from(SMALL), st.data())
def test_group_axioms_hold(G, data):
    a, b, c = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    T = G.table
    assert T[T[a][b]][c] == T[a][T[b][c]]
    assert T[a][G.inverse[a]] == 0 == T[G.inverse[a]][a]
    assert T[0][a] == a == T[a][0]


@given(st.sampled_from(SMALL), st.data())
def test_closure_is_a_subgroup(G, data):
    gens = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    m = G.closure_mask(gens)
    assert G.is_subgroup_mask(m)
    assert all((m >> x) & 1 for x in gens)


def test_json_roundtrip(d8):
    assert group_from_json(group_to_json(d8)).table == d8.table
    with pytest.raises(ParseError):
        group_from_json({"order": 3, "table": z(2)})
