import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cogalois.classify import is_mnk, remark_triple, triples_isomorphic
from cogalois.errors import BadParameters, BadShape, BoundExceeded, ModelUnavailable
from cogalois.groups import bits
from cogalois.rings import (
    EisensteinData,
    build_local_ring,
    eta_param_kernel,
    field_triple,
    finite_field,
    local_alphas,
    local_model,
    principal_unit_triples,
    prop_case,
    quadratic_family,
    quadratic_ring,
    truncated_polynomial_ring,
    unit_cocycle,
)


def ring_axioms(R):
    n = R.order
    A, M = R.add, R.mul
    for a, b, c in itertools.product(range(n), repeat=3):
        assert A[A[a, b], c] == A[a, A[b, c]]
        assert M[M[a, b], c] == M[a, M[b, c]]
        assert M[a, A[b, c]] == A[M[a, b], M[a, c]]


@pytest.mark.parametrize("p,r", [(3, 2), (7, 3), (2, 3), (5, 4), (13, 12)])
def test_field_triples(p, r):
    t = field_triple(p, r)
    assert t.gamma.order == r and is_mnk(t)


def test_field_triple_p2_r3_uses_f4():
    assert field_triple(2, 3).g.order == 4


def test_finite_field_is_a_field():
    K = finite_field(2, 2)
    assert K.order == 4 and len(K.units) == 3
    ring_axioms(K)


def test_truncated_polynomial_rings():
    R = truncated_polynomial_ring(3, 2)
    ring_axioms(R)
    assert R.nilpotency_index == 2 and R.characteristic == 3
    R = truncated_polynomial_ring(2, 3)
    assert [len(R.ideal_power(k)) for k in range(4)] == [8, 4, 2, 1]


def test_eisenstein_rings():
    Z4 = build_local_ring(EisensteinData(2, 2, 1, 1, (1,)))
    assert Z4.order == 4 and Z4.characteristic == 4
    R = build_local_ring(EisensteinData.parse("2,2,2,2,1,1"))
    ring_axioms(R)
    assert R.order == 16 and R.nilpotency_index == 4
    assert len(R.ideal_power(3)) > 1 and len(R.ideal_power(4)) == 1
    assert prop_case(R) == "ii"
    with pytest.raises(BadParameters):
        EisensteinData.parse("2,2,2,2,0,1")  # a0 must be a unit
    with pytest.raises(BoundExceeded):
        build_local_ring(EisensteinData(3, 1, 7, 7, (1,) * 7))


def test_principal_unit_examples():
    res = principal_unit_triples(truncated_polynomial_ring(3, 2))
    assert res.gamma_group.gamma.order == 3 and res.gamma_group.g.order == 9
    assert res.injective and all(res.mnk)
    res = principal_unit_triples(truncated_polynomial_ring(3, 3))
    assert not res.has_mnk
    res = principal_unit_triples(build_local_ring(EisensteinData(2, 2, 1, 1, (1,))))
    assert res.case == "ii" and len(res.orbits) == 1
    assert triples_isomorphic(res.triples[0], remark_triple()) is not None


def test_principal_unit_case_iii():
    R = build_local_ring(EisensteinData.parse("2,2,3,2,1,0,0"))
    assert prop_case(R) == "iii"
    res = principal_unit_triples(R)
    assert res.has_mnk and res.predicted_count == len(res.injective)


def test_nonprincipal_ring_is_flagged():
    res = principal_unit_triples(quadratic_ring(3, 2))
    assert res.classification == "UNCLASSIFIED"


@pytest.mark.parametrize("kind,p,n,m", [("fp", 3, 1, 2), ("zp", 2, 1, 3), ("zp", 2, 2, 3), ("fp", 2, 1, 4)])
def test_local_model_kernels(kind, p, n, m):
    model = local_model(kind, p, n, m)
    assert model.gamma.order == model.g.order == p**m
    for a in range(model.g.order):
        for alpha in local_alphas(model):
            pk = eta_param_kernel(model, a, alpha)
            assert pk.kernel & pk.level_mask == pk.kernel
    unit = next(a for a in range(model.g.order) if model.valuation_m(a) == 0)
    assert unit_cocycle(model, unit).is_bijective
    zero = eta_param_kernel(model, 0)
    assert zero.is_hom and zero.kernel == model.gamma.full_mask  # eta = alpha = 0


def test_local_model_bounds():
    with pytest.raises(ModelUnavailable):
        local_model("fp", 3, 2, 2)
    with pytest.raises(ModelUnavailable):
        local_model("qp", 3, 1, 2)


def test_quadratic_examples():
    q = quadratic_family(3, 2, [0, 0], [[1, 0], [0, 1]])
    assert q.det == 1 and q.verdict and q.classify_verdict is True
    q = quadratic_family(3, 2, [0, 0], [[0, 0], [0, 0]])
    assert not q.verdict and not q.triple.is_injective
    with pytest.raises(BadShape):
        quadratic_family(3, 2, [0, 0], [[1, 1], [0, 1]])


@given(st.lists(st.integers(0, 2), min_size=3, max_size=3), st.lists(st.integers(0, 2), min_size=2, max_size=2))
def test_quadratic_verdict_matches_determinant(entries, lam0):
    a, b, c = entries
    q = quadratic_family(3, 2, lam0, [[a, b], [b, c]])
    assert q.verdict == ((a * c - b * b) % 3 != 0)
