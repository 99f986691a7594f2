"""Property suites shared by the module tests and the acceptance run.

Each function raises AssertionError on the first violation and returns a
small dict of counts on success.
"""

import itertools

import numpy as np

from latcon.congruence import (con_map, enumerate_con, image_congruence, is_weak_distributive)
from latcon.free import (ChainPresentation, KernelModel, VarietySpec, free_over_chains,
                         inclusion_hom, retraction_hom)
from latcon.lattice import all_homs, all_lattices, compose, is_distributive
from latcon.semilattice import (FiniteJoinSemilattice, as_semilattice, check_URP_at,
                                check_WURP_at, lift_wurp, universal_family, urp_violations,
                                wurp_violations)

_CON = {}


def con_of(L):
    key = id(L)
    if key not in _CON:
        _CON[key] = (L, enumerate_con(L))
    return _CON[key][1]


def con_distributivity(max_size=6):
    n = 0
    for L in all_lattices(max_size):
        ok, w = is_distributive(con_of(L).lattice)
        assert ok, f"Con of a lattice of size {L.size} is not distributive: {w}"
        n += 1
    return {"lattices": n}


def con_functoriality(max_size=5, compose_size=4):
    """Con(f) preserves 0 and joins for every hom between lattices of size
    <= max_size; Con(g o f) = Con(g) o Con(f) for composable pairs among
    lattices of size <= compose_size; Con(id) = id."""
    lats = all_lattices(max_size)
    homs = {}
    for A, B in itertools.product(lats, repeat=2):
        homs[(id(A), id(B))] = all_homs(A, B)
    maps = 0
    tables = {}
    for A, B in itertools.product(lats, repeat=2):
        cA, cB = con_of(A), con_of(B)
        for f in homs[(id(A), id(B))]:
            t = con_map(f, cA, cB).table
            tables[(id(A), id(B), f.map.tobytes())] = t
            assert t[cA.zero] == cB.zero
            J = cA.lattice.join
            assert (t[J] == cB.lattice.join[t[:, None], t[None, :]]).all()
            maps += 1
    for A in lats:
        ident = np.arange(A.size)
        assert (tables[(id(A), id(A), ident.astype(np.intp).tobytes())]
                == np.arange(len(con_of(A)))).all()
    small = [L for L in lats if L.size <= compose_size]
    pairs = 0
    for A, B, C in itertools.product(small, repeat=3):
        for f in homs[(id(A), id(B))]:
            tf = tables[(id(A), id(B), f.map.tobytes())]
            for g in homs[(id(B), id(C))]:
                tg = tables[(id(B), id(C), g.map.tobytes())]
                gf = compose(g, f)
                tgf = con_map(gf, con_of(A), con_of(C)).table
                assert (tgf == tg[tf]).all()
                pairs += 1
    return {"homs": maps, "compositions": pairs}


def retraction_inclusion(variety, k):
    """Con(retraction) o Con(inclusion) is the identity on Con(B(Y)) for all
    proper Y contained in a k-element X. For Y = X both maps are checked to
    be the identity."""
    V = VarietySpec.named(variety)
    BX = free_over_chains(V, ChainPresentation.chains(k, bounded=True))
    checked = 0
    for r in range(k + 1):
        for Y in itertools.combinations(range(k), r):
            BY = free_over_chains(V, ChainPresentation(Y, bounded=True))
            inc, ret = inclusion_hom(BY, BX), retraction_hom(BX, BY)
            assert np.array_equal(compose(ret, inc).map, np.arange(BY.size))
            if r == k:
                # both maps are the identity here; Con(B(X)) may be huge
                assert np.array_equal(inc.map, np.arange(BX.size))
                continue
            for theta in con_of(BY.lattice):
                assert image_congruence(ret, image_congruence(inc, theta)) == theta
                checked += 1
    return {"congruences": checked}


# ---------------------------------------------------------------------------
# uniform refinement on arbitrary families


def _brute_wurp(S, fam, e):
    """Exhaustive search over all matrices (diagonal included)."""
    n = len(fam)
    cells = list(itertools.product(range(n), repeat=2))
    opts = []
    for i, j in cells:
        (ai, bi), (aj, bj) = fam[i], fam[j]
        opts.append([x for x in range(S.size) if S.leq[x, ai] and S.leq[x, bj]
                     and S.join[S.join[x, aj], bi] == e])
    for combo in itertools.product(*opts):
        c = dict(zip(cells, combo))
        if not wurp_violations(S, fam, c, e):
            return True
    return False


def _families(pairs, k):
    for r in range(1, k + 1):
        yield from itertools.product(pairs, repeat=r)


def _space(S, fam):
    n = 1
    for (ai, _), (_, bj) in itertools.product(fam, repeat=2):
        n *= len(S.below(S.meet[ai, bj]))
    return n


def universal_family_agreement(max_size=5, family_size=3, brute_limit=200_000):
    """The universal-family decision agrees with a direct check over all
    families of at most ``family_size`` indices (repeats allowed).

    If WURP/URP holds on the universal family, the lifted witness is
    verified for every such family. If it fails, some family with at most
    ``family_size`` indices has no witness by exhaustive search.
    """
    stats = {"points": 0, "families": 0, "brute": 0}
    sems = [as_semilattice(L) for L in all_lattices(max_size)]
    for S in sems:
        for e in range(S.size):
            stats["points"] += 1
            pairs = universal_family(S, e)
            w = check_WURP_at(S, e)
            u = check_URP_at(S, e)
            assert not u.holds or w.holds
            for fam in _families(pairs, family_size):
                stats["families"] += 1
                if w.holds:
                    c = lift_wurp(pairs, fam, w.witness.c)
                    c = {k: (S.zero if v is None else v) for k, v in c.items()}
                    assert not wurp_violations(S, list(fam), c, e)
                if u.holds:
                    pos = {p: i for i, p in enumerate(pairs)}
                    a_s = [u.witness.a_star[pos[p]] for p in fam]
                    b_s = [u.witness.b_star[pos[p]] for p in fam]
                    c = lift_wurp(pairs, fam, u.witness.c)
                    c = {k: (S.zero if v is None else v) for k, v in c.items()}
                    assert not urp_violations(S, list(fam), a_s, b_s, c, e)
            if not w.holds:
                found = False
                for fam in _families(pairs, family_size):
                    if _space(S, fam) > brute_limit:
                        continue
                    stats["brute"] += 1
                    if not _brute_wurp(S, list(fam), e):
                        found = True
                        break
                assert found, f"no small failing family at {e} (size {S.size})"
    return stats


# ---------------------------------------------------------------------------
# weak-distributive maps


def join_homs(S, T):
    """All zero- and join-preserving maps between finite join-semilattices."""
    out = []
    rest = [x for x in range(S.size) if x != S.zero]
    for vals in itertools.product(range(T.size), repeat=len(rest)):
        mu = np.empty(S.size, dtype=np.intp)
        mu[S.zero] = T.zero
        mu[rest] = vals
        if (mu[S.join] == T.join[mu[:, None], mu[None, :]]).all():
            out.append(mu)
    return out


def wd_transport(max_size=4):
    """If mu is weak-distributive and URP (WURP) holds at e, it holds at mu(e)."""
    sems = [as_semilattice(L) for L in all_lattices(max_size)]
    sems += [as_semilattice(con_of(L)) for L in all_lattices(4)]
    urp, wurp = {}, {}

    def prop(S, e):
        k = (id(S), e)
        if k not in urp:
            urp[k] = check_URP_at(S, e, certificate=False).holds
            wurp[k] = check_WURP_at(S, e, certificate=False).holds
        return urp[k], wurp[k]

    n_wd = n_maps = 0
    for S, T in itertools.product(sems, repeat=2):
        for mu in join_homs(S, T):
            n_maps += 1
            ok, _ = is_weak_distributive(mu, S, T)
            if not ok:
                continue
            n_wd += 1
            for e in range(S.size):
                u, w = prop(S, e)
                u2, w2 = prop(T, int(mu[e]))
                assert not u or u2, "URP not transported"
                assert not w or w2, "WURP not transported"
    return {"maps": n_maps, "weak_distributive": n_wd}


def semilattice_from_join(join, zero=0):
    return FiniteJoinSemilattice(join, zero).check()


def kernel_injectivity(variety, k=3):
    """Con(inclusion): Con(B(Y)) -> Con(B(X)) is injective for every proper
    Y contained in a k-element X, with Con(B(X)) read through the kernel
    model (B(X) itself may be too large to materialise). A retraction
    inverting Con(inclusion) forces injectivity."""
    V = VarietySpec.named(variety)
    K = KernelModel(V, ChainPresentation.chains(k, bounded=True))
    checked = 0
    for r in range(k):
        for Y in itertools.combinations(range(k), r):
            BY = free_over_chains(V, ChainPresentation(Y, bounded=True))
            homs = K.restricted_homs(BY)
            con = con_of(BY.lattice)
            masks = {K.embed(BY, t, homs) for t in con}
            assert len(masks) == len(con), f"Con(inclusion) not injective for Y={Y}"
            assert K.is_zero(K.embed(BY, con[con.zero], homs))
            checked += len(con)
    return {"congruences": checked, "kernels": K.m}
