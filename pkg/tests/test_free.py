import itertools

import numpy as np
import pytest

from latcon.congruence import enumerate_con, principal_congruence
from latcon.errors import NotAHom, NotASubset, RelationViolated, ResourceCap
from latcon.free import (ChainPresentation, KernelModel, VarietySpec, count_free_elements,
                         eval_hom, free_element_bounds, free_over_chains, inclusion_hom,
                         order_pairs, reduce_columns, relation_assignments, retraction_hom,
                         _closure, _tables)
from latcon.lattice import FiniteLattice, compose, find_isomorphism, is_distributive, m3, n5, two
from latcon.replication import reference_D


def free(name, k, bounded=False):
    return free_over_chains(VarietySpec.named(name), ChainPresentation.chains(k, bounded))


def test_assignment_counts():
    assert len(relation_assignments(ChainPresentation.chains(1), two())) == 3
    assert len(relation_assignments(ChainPresentation.chains(1), m3())) == 12
    assert len(relation_assignments(ChainPresentation.chains(3), m3())) == 1728
    assert len(order_pairs(m3())) == 12
    with pytest.raises(ResourceCap):
        relation_assignments(ChainPresentation.chains(3), m3(), max_coordinates=1000)


def test_d_matches_figure():
    F = free("two", 2)
    assert F.size == 18
    assert is_distributive(F.lattice)[0]
    R = reference_D()
    assert find_isomorphism(R, F.lattice) is not None
    # the hom fixed by the generators is onto the drawing with labels in place
    f = eval_hom(F, R, {"s0": "u0", "t0": "v0", "s1": "u1", "t1": "v1"})
    assert f.is_injective() and f.is_surjective()


def test_single_chain():
    F = free("m3", 1)
    assert F.size == 2
    assert F.lattice.le("s0", "t0")


def test_bounded_sizes():
    assert free("two", 0, True).size == 2
    assert free("two", 1, True).size == 4
    assert free("two", 2, True).size == 20


def test_column_reduction_keeps_iso_type():
    V = VarietySpec.named("m3")
    P = ChainPresentation.chains(2)
    A = relation_assignments(P, V.M)
    kept, prov = reduce_columns(V.M, A)
    assert len(kept) + len(prov) == len(A)
    for c, (k, f) in prov.items():
        assert np.array_equal(np.asarray(f)[A[k]], A[c])
    # the full-coordinate closure gives the same lattice
    vecs, _ = _closure(V.M, np.ascontiguousarray(A.T), 10**6)
    leq, meet, join = _tables(V.M, vecs)
    full = FiniteLattice(leq, meet, join)
    assert find_isomorphism(full, free("m3", 2).lattice) is not None


@pytest.mark.parametrize("name", ["two", "m3", "n5"])
def test_universal_property(name):
    F = free(name, 2)
    M = F.variety.M
    for row in relation_assignments(F.presentation, M):
        h = eval_hom(F, M, [int(v) for v in row])
        for g, v in zip(F.presentation.generator_names, row):
            assert h.map[F.element(g)] == v


def test_relation_violated():
    F = free("two", 2)
    M = n5()
    with pytest.raises(RelationViolated):
        eval_hom(F, M, {"s0": "a", "t0": "c", "s1": "0", "t1": "1"})


def test_not_a_hom_into_n5():
    # a map out of a distributive free lattice into N5 need not exist
    F = free("two", 2)
    with pytest.raises(NotAHom):
        eval_hom(F, n5(), {"s0": "c", "t0": "a", "s1": "b", "t1": "b"})


def test_inclusion_retraction():
    V = VarietySpec.named("m3")
    BX = free_over_chains(V, ChainPresentation.chains(2, bounded=True))
    for r in range(3):
        for Y in itertools.combinations(range(2), r):
            BY = free_over_chains(V, ChainPresentation(Y, bounded=True))
            inc, ret = inclusion_hom(BY, BX), retraction_hom(BX, BY)
            assert np.array_equal(compose(ret, inc).map, np.arange(BY.size))
            e = compose(inc, ret)
            assert np.array_equal(compose(e, e).map, e.map)
    B1 = free_over_chains(V, ChainPresentation((1,), bounded=True))
    B0 = free_over_chains(V, ChainPresentation((0,), bounded=True))
    with pytest.raises(NotASubset):
        inclusion_hom(BX, B1)
    with pytest.raises(NotASubset):
        retraction_hom(B0, B1)


@pytest.mark.parametrize("name,k", [("two", 1), ("two", 2), ("two", 3), ("m3", 1), ("m3", 2),
                                    ("n5", 1), ("n5", 2)])
def test_count_matches_materialised(name, k):
    V = VarietySpec.named(name)
    for bounded in (False, True):
        P = ChainPresentation.chains(k, bounded)
        assert count_free_elements(V, P) == free_over_chains(V, P).size


def test_bounds_when_budget_is_small():
    V = VarietySpec.named("m3")
    P = ChainPresentation.chains(2)
    b = free_element_bounds(V, P, state_budget=3)
    n = free_over_chains(V, P).size
    assert b["exact"] is None and b["lower"] <= n <= b["upper"]
    assert free_element_bounds(V, P)["exact"] == n


@pytest.mark.parametrize("name,expected", [("two", 512), ("m3", 512), ("n5", 3296)])
def test_kernel_model_counts(name, expected):
    V = VarietySpec.named(name)
    P = ChainPresentation.chains(2, bounded=True)
    B = free_over_chains(V, P)
    assert len(enumerate_con(B.lattice)) == expected
    assert KernelModel(V, P).count_congruences() == expected


@pytest.mark.parametrize("name", ["two", "m3"])
def test_kernel_model_principal_congruences(name):
    V = VarietySpec.named(name)
    P = ChainPresentation.chains(2, bounded=True)
    B = free_over_chains(V, P)
    K = KernelModel(V, P)
    homs = K.restricted_homs(B)
    for a, b in B.lattice.covers():
        mask = K.embed(B, principal_congruence(B.lattice, a, b), homs)
        # the kernel model reading of Theta(a, b) is the set of kernels
        # identifying a and b
        assert mask == K._mask(homs[:, a] == homs[:, b])
    # distinct congruences stay distinct
    con = enumerate_con(B.lattice)
    masks = {K.embed(B, t, homs) for t in con}
    assert len(masks) == len(con)
    assert K.is_zero(K.embed(B, con[con.zero], homs))
    assert K.is_one(K.embed(B, con[con.one], homs))


def test_kernel_model_theta_terms():
    V = VarietySpec.named("two")
    P = ChainPresentation.chains(3, bounded=True)
    B = free_over_chains(V, P)
    K = KernelModel(V, P)
    homs = K.restricted_homs(B)
    for g, h in [("s0", "t0"), ("s1", "t2"), ("0", "s2")]:
        t = principal_congruence(B.lattice, B.element(g), B.element(h))
        assert K.embed(B, t, homs) == K.theta(g, h)
    x = ("meet", "t0", "t1")
    assert K.theta(x, "t0") == K.theta_plus("t0", "t1")
    assert K.leq(K.theta("s0", "t0"), K.join(K.theta("s0", "t0"), K.theta("s1", "t1")))
    assert K.is_boolean() and K.count_congruences() == 2 ** K.m


def test_kernel_model_needs_bounds():
    with pytest.raises(ValueError):
        KernelModel(VarietySpec.named("two"), ChainPresentation.chains(1))
