import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latcon.congruence import (Congruence, compatibility_violation, con_map, enumerate_con,
                               image_congruence, is_congruence_splitting, is_weak_distributive,
                               principal_congruence, theta_plus)
from latcon.errors import HostMismatch, NotAHom
from latcon.free import ChainPresentation, VarietySpec, free_over_chains, retraction_hom
from latcon.lattice import all_lattices, chain, check_hom, identity_hom, is_distributive, m3, n5
from latcon.semilattice import as_semilattice, check_URP_at

import props


def brute_con(L):
    """Every partition of L that is compatible, by enumerating set partitions."""
    out = set()

    def rec(i, labels):
        if i == L.size:
            lab = np.array(labels)
            if compatibility_violation(L, lab) is None:
                out.add(Congruence(L, lab))
            return
        for r in sorted(set(labels)):
            rec(i + 1, labels + [r])
        rec(i + 1, labels + [i])

    rec(0, [])
    return out


def test_theta_examples():
    L = chain(3)
    assert principal_congruence(L, 1, 1).is_zero()
    assert principal_congruence(L, 0, 1).blocks == [[0, 1], [2]]
    M = m3()
    assert principal_congruence(M, "0", "p").is_one()


def test_theta_plus():
    L = n5()
    assert theta_plus(L, "c", "a").is_zero()
    t = theta_plus(L, "a", "b")
    assert t == principal_congruence(L, "0", "a")
    # least congruence making a <= b in the quotient
    for theta in enumerate_con(L):
        forced = theta.related(L.index("a"), L.meet[L.index("a"), L.index("b")])
        assert forced == (t <= theta)


def test_enumerate_examples():
    assert len(enumerate_con(chain(2))) == 2
    assert len(enumerate_con(m3())) == 2
    assert len(enumerate_con(n5())) == 5


@pytest.mark.parametrize("L", all_lattices(6), ids=lambda L: f"n{L.size}")
def test_enumeration_matches_brute_force(L):
    con = enumerate_con(L)
    assert set(con.elements) == brute_con(L)
    assert set(enumerate_con(L, seeds="pairs").elements) == set(con.elements)


def test_con_of_d_is_boolean():
    D = free_over_chains(VarietySpec.named("two"), ChainPresentation.chains(2)).lattice
    CL = enumerate_con(D).lattice
    assert is_distributive(CL)[0]
    atoms = [i for i in range(CL.size) if CL.leq[CL.bottom, i] and i != CL.bottom
             and all(not (CL.leq[j, i] and j not in (i, CL.bottom)) for j in range(CL.size))]
    assert CL.size == 2 ** len(atoms)


def test_congruence_operations():
    L = n5()
    con = enumerate_con(L)
    for s, t in itertools.product(con.elements, repeat=2):
        j, m = s | t, s & t
        assert j.is_compatible() and m.is_compatible()
        assert s <= j and t <= j and m <= s and m <= t
        assert con.join(con.find(s), con.find(t)) == con.find(j)
        assert con.meet(con.find(s), con.find(t)) == con.find(m)


def test_host_mismatch():
    with pytest.raises(HostMismatch):
        Congruence.zero(chain(3)) | Congruence.zero(chain(4))


def test_con_map_identity_and_retraction():
    L = n5()
    con = enumerate_con(L)
    assert list(con_map(identity_hom(L), con, con).table) == list(range(len(con)))
    # B(3) in HSP(M3) has about 10^6 elements, too many for n x n tables
    V = VarietySpec.named("two")
    B3 = free_over_chains(V, ChainPresentation.chains(3, bounded=True))
    B12 = free_over_chains(V, ChainPresentation((1, 2), bounded=True))
    r = retraction_hom(B3, B12)
    theta = principal_congruence(B3.lattice, B3.element("s0"), B3.element("t0"))
    assert image_congruence(r, theta).is_zero()


def test_weak_distributive_examples():
    two, M = as_semilattice(chain(2)), as_semilattice(m3())
    assert is_weak_distributive(np.arange(M.size), M, M) == (True, None)
    ok, w = is_weak_distributive(np.array([0, 4]), two, M)
    assert not ok
    e, b0, b1 = w
    assert e == 1 and M.join[b0, b1] == 4 and 4 not in (b0, b1)
    with pytest.raises(NotAHom):
        is_weak_distributive(np.array([1, 4]), two, M)


def test_con_of_surjection_weak_distributive():
    L = n5()
    f = np.arange(L.size)
    f[L.index("c")] = L.index("a")
    # the collapse onto the 4-element image, viewed inside N5
    h = check_hom(f, L, L)
    con = enumerate_con(L)
    ok, _ = is_weak_distributive(con_map(h, con, con).table, con, con)
    assert ok


def test_splitting_examples():
    assert not is_congruence_splitting(chain(3))[0]
    assert is_congruence_splitting(m3())[0]
    assert is_congruence_splitting(chain(2))[0]


def test_splitting_implies_urp_on_con():
    for L in all_lattices(5):
        if is_congruence_splitting(L)[0]:
            S = as_semilattice(enumerate_con(L))
            assert all(check_URP_at(S, e).holds for e in range(S.size))


def test_con_distributive_property():
    assert props.con_distributivity(6)["lattices"] == 25


def test_functoriality_small():
    stats = props.con_functoriality(4, 3)
    assert stats["homs"] > 0 and stats["compositions"] > 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 24), st.data())
def test_principal_is_least(k, data):
    L = all_lattices(6)[k]
    a = data.draw(st.integers(0, L.size - 1))
    b = data.draw(st.integers(0, L.size - 1))
    t = principal_congruence(L, a, b)
    assert t.related(a, b) and t.is_compatible()
    for s in props.con_of(L):
        if s.related(a, b):
            assert t <= s
