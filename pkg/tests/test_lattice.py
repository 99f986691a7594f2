import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latcon.errors import NotAHom, NotALattice, NotAPartialOrder, ParseError
from latcon.lattice import (FiniteLattice, adjoin_bounds, all_lattices, chain, check_hom,
                            compose, count_downsets, distributive_lattices, downset_lattice,
                            find_isomorphism, find_m3_or_n5, format_lattice, generated_sublattice,
                            identity_hom, is_distributive, m3, make_decorated, n5, parse_dot,
                            read_lattice, to_dot, two, validate_lattice)


def test_one_element():
    L = validate_lattice(1)
    assert L.size == 1 and L.bottom == L.top == 0


def test_fork_has_no_join():
    # 0 < a, 0 < b, a < 3: a and b have no common upper bound
    with pytest.raises(NotALattice) as exc:
        validate_lattice(4, covers=[(0, 1), (0, 2), (1, 3)])
    assert exc.value.witness == (1, 2)


def test_cycle_rejected():
    with pytest.raises(NotAPartialOrder):
        validate_lattice(2, covers=[(0, 1), (1, 0)])


def test_m3_tables():
    L = m3()
    p, q, r = (L.index(x) for x in "pqr")
    assert L.meet[p, q] == L.bottom and L.join[p, q] == L.top
    assert L.join[q, r] == L.top
    ok, w = is_distributive(L)
    assert not ok and w == (p, q, r)


def test_n5_not_distributive():
    L = n5()
    assert L.le("c", "a") and not L.le("b", "a")
    assert not is_distributive(L)[0]


def test_chains_distributive():
    for n in range(1, 7):
        assert is_distributive(chain(n)) == (True, None)


@pytest.mark.parametrize("L", all_lattices(6), ids=lambda L: f"n{L.size}")
def test_axioms_hold(L):
    assert L.check_axioms() == []
    L.check()


def test_distributivity_double_implementation():
    for L in all_lattices(6):
        assert is_distributive(L)[0] == (find_m3_or_n5(L) is None)


def test_all_lattices_counts():
    sizes = [L.size for L in all_lattices(6)]
    assert [sizes.count(k) for k in range(1, 7)] == [1, 1, 1, 2, 5, 15]


def test_distributive_counts():
    sizes = [L.size for L in distributive_lattices(8)]
    assert [sizes.count(k) for k in range(1, 9)] == [1, 1, 1, 2, 3, 5, 8, 15]


def test_generated_sublattice_examples():
    L = m3()
    p, q = L.index("p"), L.index("q")
    assert generated_sublattice(L, [p])[0] == (p,)
    elems, terms = generated_sublattice(L, [p, q])
    assert set(elems) == {p, q, L.bottom, L.top}
    assert terms[L.bottom] == ("meet", p, q)


def test_generated_sublattice_is_least():
    for L in all_lattices(5):
        for seeds in itertools.combinations(range(L.size), 2):
            elems, _ = generated_sublattice(L, seeds)
            S = set(elems)
            for a, b in itertools.product(S, repeat=2):
                assert L.meet[a, b] in S and L.join[a, b] in S
            for x in set(range(L.size)) - S:
                bigger, _ = generated_sublattice(L, list(S) + [x])
                assert len(bigger) > len(S)


def test_n5_chains_distributive():
    L, d = make_decorated("N5")
    elems, _ = generated_sublattice(L, [d.x[0], d.y[0], d.x[1], d.y[1]])
    from latcon.lattice import sublattice
    assert is_distributive(sublattice(L, elems))[0]


def test_decorations():
    L, d = make_decorated("M3")
    assert L.leq[L.meet[d.x[0], d.y[1]], d.x[1]]
    assert not L.leq[d.y[2], L.join[d.x[2], d.y[0]]]
    L, d = make_decorated("N5")
    assert not L.leq[d.y[2], L.join[d.x[2], d.y[0]]]
    assert (L.label(d.y[2]), L.label(d.y[0])) == ("a", "c")


def test_adjoin_bounds():
    assert find_isomorphism(adjoin_bounds(chain(1)), chain(3)) is not None
    assert find_isomorphism(adjoin_bounds(two()), chain(4)) is not None
    for L in all_lattices(5):
        B = adjoin_bounds(L)
        assert B.size == L.size + 2
        assert np.array_equal(B.leq[:L.size, :L.size], L.leq)
        B.check()


def test_check_hom_examples():
    L = n5()
    identity_hom(L)
    check_hom([L.top] * L.size, L, L)
    f = np.arange(L.size)
    f[L.index("c")] = L.index("a")
    check_hom(f, L, L)
    g = np.arange(L.size)
    g[L.index("c")], g[L.index("a")] = L.index("a"), L.index("c")
    with pytest.raises(NotAHom) as exc:
        check_hom(g, L, L)
    assert exc.value.law in ("meet", "join")


def test_composition_associative():
    L = n5()
    from latcon.lattice import all_homs
    homs = all_homs(L, L)[:12]
    for f, g, h in itertools.product(homs[:5], repeat=3):
        assert np.array_equal(compose(h, compose(g, f)).map, compose(compose(h, g), f).map)


def test_text_round_trip():
    for L in all_lattices(5) + [m3(), n5()]:
        R = read_lattice(format_lattice(L, "round trip"))
        assert np.array_equal(R.leq, L.leq)
        assert R.names == L.names


def test_dot_round_trip():
    for L in all_lattices(6):
        text = to_dot(L)
        assert text.count("->") == len(L.covers())
        assert text.count("[label=") == L.size
        assert find_isomorphism(parse_dot(text), L) is not None


def test_parse_errors():
    with pytest.raises(ParseError):
        read_lattice("cover 0 1\n")
    with pytest.raises(ParseError):
        read_lattice("lattice 2\nfoo 0 1\n")


def test_names_resolve():
    L = read_lattice("lattice 2\nname bot 0\nname top 1\ncover bot top\n")
    assert L.le("bot", "top")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=8))
def test_downset_lattices_distributive(rel):
    # a random poset on 6 points: keep pairs i < j only, so no cycles
    leq = np.eye(6, dtype=bool)
    for a, b in rel:
        if a < b:
            leq[a, b] = True
    from latcon.lattice import transitive_closure
    leq = transitive_closure(leq)
    L = downset_lattice(leq)
    assert L.size == count_downsets(leq)
    assert is_distributive(L)[0]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=1, max_size=4))
def test_sublattices_of_boolean_cube(seeds):
    # 2^4 as bit masks
    idx = np.arange(16)
    leq = (idx[:, None] & ~idx[None, :]) == 0
    L = FiniteLattice(leq, idx[:, None] & idx[None, :], idx[:, None] | idx[None, :],
                      bottom=0, top=15)
    elems, terms = generated_sublattice(L, seeds)
    S = set(elems)
    assert set(seeds) <= S
    for a, b in itertools.product(S, repeat=2):
        assert (a & b) in S and (a | b) in S
    for x, t in terms.items():
        if t[0] == "meet":
            assert t[1] & t[2] == x
        elif t[0] == "join":
            assert t[1] | t[2] == x
