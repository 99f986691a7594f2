import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latcon.congruence import Congruence, join_congruences, principal_congruence
from latcon.errors import ParseError
from latcon.free import ChainPresentation, VarietySpec, free_over_chains
from latcon.kuratowski import (SetMapping, all_free_triples, find_free_triple, is_free_triple,
                               parse_set_mapping, support_of)


def test_empty_mapping():
    assert find_free_triple(SetMapping(3)) == (0, 1, 2)


def test_complement_mapping_blocks_everything():
    m = SetMapping.from_function(5, lambda i, j: set(range(5)) - {i, j})
    assert find_free_triple(m) is None


def test_min_mapping():
    m = SetMapping.from_function(4, lambda i, j: {min(i, j)})
    t = find_free_triple(m)
    assert t == (0, 1, 2)
    assert is_free_triple(m, *t)
    i, j, k = t
    assert i not in m(j, k) and j not in m(i, k) and k not in m(i, j)


def test_small_ground_set():
    assert find_free_triple(SetMapping(2)) is None


def test_format_round_trip():
    m = SetMapping.from_function(4, lambda i, j: {min(i, j), 3} - {i, j})
    r = parse_set_mapping(m.format())
    assert all(r(i, j) == m(i, j) for i, j in itertools.combinations(range(4), 2))


@pytest.mark.parametrize("text", [
    "pair 0 1 : 2\n",
    "ground 3\npair 0 0 : 1\n",
    "ground 3\npair 0 1 : 5\n",
    "ground 3\npair 0 1 2\n",
    "ground x\n",
    "ground 3\nfoo\n",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_set_mapping(text)


mappings = st.integers(3, 6).flatmap(lambda n: st.builds(
    lambda vals: SetMapping(n, dict(zip(itertools.combinations(range(n), 2), vals))),
    st.lists(st.frozensets(st.integers(0, n - 1)), min_size=n * (n - 1) // 2,
             max_size=n * (n - 1) // 2)))


@settings(max_examples=150, deadline=None)
@given(mappings)
def test_search_matches_brute_force(m):
    brute = all_free_triples(m)
    t = find_free_triple(m)
    assert (t is None) == (not brute)
    if t is not None:
        assert t == min(tuple(sorted(b)) for b in brute)


@settings(max_examples=100, deadline=None)
@given(mappings, st.randoms(use_true_random=False))
def test_relabelling_invariance(m, rnd):
    perm = list(range(m.n))
    rnd.shuffle(perm)
    r = SetMapping(m.n, {(perm[i], perm[j]): {perm[x] for x in m(i, j)}
                         for i, j in itertools.combinations(range(m.n), 2)})
    moved = {tuple(perm[x] for x in t) for t in all_free_triples(m)}
    assert moved == set(all_free_triples(r))


@pytest.fixture(scope="module")
def B3():
    return free_over_chains(VarietySpec.named("two"), ChainPresentation.chains(3, bounded=True))


def test_support_examples(B3):
    L = B3.lattice
    assert support_of(Congruence.zero(L), B3) == ()
    t0 = principal_congruence(L, B3.element("s0"), B3.element("t0"))
    t1 = principal_congruence(L, B3.element("s1"), B3.element("t1"))
    assert support_of(t0, B3) == (0,)
    assert support_of(join_congruences(t0, t1), B3) == (0, 1)
    assert support_of(Congruence.one(L), B3) == ()


def test_support_monotone(B3):
    L = B3.lattice
    pairs = [("s0", "t0"), ("s1", "t1"), ("s2", "t2"), ("0", "s1"), ("t0", "1"), ("s0", "t2")]
    thetas = [principal_congruence(L, B3.element(a), B3.element(b)) for a, b in pairs]
    sup = [set(support_of(t, B3)) for t in thetas]
    for (t, st_), (u, su) in itertools.combinations(zip(thetas, sup), 2):
        assert set(support_of(join_congruences(t, u), B3)) <= st_ | su
