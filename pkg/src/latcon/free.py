"""Free products of 2-element chains in the variety generated by a finite
lattice ``M``.

``E_V(X)`` is built as the sublattice of ``M^A`` generated by the evaluation
vectors of the generators, where ``A`` runs over the relation-respecting
assignments ``s_i -> u <= v <- t_i``. This is faithful for ``M`` in
``{2, M3, N5}``: lattice varieties are congruence-distributive, so the
subdirectly irreducible members of ``HSP(M)`` lie in ``HS(M)``, and for these
three lattices each of them embeds in ``M``.

For presentations whose free lattice is too large to materialise, see
:func:`count_free_elements` (Baker-Pixley counting) and :class:`KernelModel`
(congruences via meet-irreducible kernels).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .congruence import enumerate_con
from .errors import NotASubset, RelationViolated, ResourceCap
from .lattice import (FiniteLattice, adjoin_bounds, all_homs, check_hom,
                      find_isomorphism,
                      generated_sublattice, m3, n5, sublattice, two)

DEFAULT_MAX_ELEMENTS = 1_000_000
DEFAULT_MAX_COORDINATES = 100_000
DEFAULT_STATE_BUDGET = 5_000_000


@dataclass(frozen=True)
class VarietySpec:
    """The variety HSP(M) of a finite lattice ``M``."""

    M: FiniteLattice
    name: str = "M"

    def __post_init__(self):
        if self.M.size < 2:
            raise ValueError("the generating lattice needs at least two elements")

    @classmethod
    def named(cls, name):
        name = name.lower()
        builders = {"m3": m3, "n5": n5, "two": two, "2": two}
        if name not in builders:
            raise ValueError(f"unknown variety {name!r} (expected m3, n5 or two)")
        return cls(builders[name](), "two" if name == "2" else name)


@dataclass(frozen=True)
class ChainPresentation:
    """Generators ``s_l <= t_l`` for each chain label ``l``."""

    labels: tuple
    bounded: bool = False

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("chain labels must be distinct")

    @classmethod
    def chains(cls, k, bounded=False):
        return cls(tuple(range(k)), bounded)

    @property
    def generator_names(self):
        return [f"{c}{l}" for l in self.labels for c in ("s", "t")]

    def restrict(self, labels):
        return ChainPresentation(tuple(l for l in self.labels if l in set(labels)), self.bounded)


def order_pairs(M):
    return [(u, v) for u in range(M.size) for v in range(M.size) if M.leq[u, v]]


def relation_assignments(P, M, max_coordinates=DEFAULT_MAX_COORDINATES):
    """All assignments of generators into ``M`` with ``s_l <= t_l``.

    Returns an ``(A, 2k)`` array; row order is lexicographic over the chains.
    """
    pairs = order_pairs(M)
    count = len(pairs) ** len(P.labels)
    if count > max_coordinates:
        raise ResourceCap(f"{count} assignments exceed the coordinate cap {max_coordinates}",
                          resource="coordinates", limit=max_coordinates, partial=count)
    rows = [[x for p in combo for x in p] for combo in itertools.product(pairs, repeat=len(P.labels))]
    return np.array(rows, dtype=np.uint8).reshape(count, 2 * len(P.labels))


def _generated(M, values, bounded):
    s = {int(v) for v in values}
    if bounded:
        s |= {M.bottom, M.top}
    return frozenset(generated_sublattice(M, s)[0]) if s else frozenset()


def reduce_columns(M, assignments):
    """Drop assignments that are an endomorphism of ``M`` applied to a kept one.

    Such a coordinate is a function of the kept coordinate on the whole free
    lattice, so dropping it does not change the generated sublattice up to
    isomorphism. Returns ``(kept_indices, provenance)`` where provenance maps
    each dropped index to ``(kept_index, endomorphism)``.
    """
    endos = [h.map for h in all_homs(M, M)]
    size = [len(_generated(M, row, False)) for row in assignments]
    order = sorted(range(len(assignments)), key=lambda c: (-size[c], c))
    owner = {}
    kept = []
    provenance = {}
    for c in order:
        key = assignments[c].tobytes()
        if key in owner:
            provenance[c] = owner[key]
            continue
        kept.append(c)
        for f in endos:
            owner.setdefault(f[assignments[c]].astype(np.uint8).tobytes(), (c, tuple(int(x) for x in f)))
    kept.sort()
    return kept, provenance


@dataclass
class FreeLattice:
    """A materialised free product of chains.

    ``vectors[x]`` is the coordinate vector of element ``x`` of ``E`` (the
    adjoined bounds of a bounded presentation have no vector). ``terms[x]``
    is ``("gen", g)``, ``("meet", y, z)``, ``("join", y, z)``, ``("bottom",)``
    or ``("top",)`` with ``y, z < x``-discovered operands.
    """

    lattice: FiniteLattice
    variety: VarietySpec
    presentation: ChainPresentation
    coordinates: np.ndarray
    vectors: np.ndarray
    terms: list
    generators: list
    provenance: dict = field(default_factory=dict)
    raw_coordinates: int = 0

    @property
    def size(self):
        return self.lattice.size

    def element(self, name):
        return self.lattice.index(name)

    def generator_index(self, name):
        return self.presentation.generator_names.index(name)


def _closure(M, gens, max_elements):
    """Deterministic breadth-first closure of generator vectors under
    coordinatewise meet and join. Returns (vectors, terms)."""
    k = gens.shape[1]
    nm = M.size
    mf = M.meet.astype(np.uint8).ravel()
    jf = M.join.astype(np.uint8).ravel()
    dt = np.dtype((np.void, max(k, 1)))
    seen = {}
    vecs = []
    terms = []
    for g, row in enumerate(gens):
        key = row.tobytes()
        if key not in seen:
            seen[key] = len(vecs)
            vecs.append(row.copy())
            terms.append(("gen", g))
    store = np.array(vecs, dtype=np.uint8).reshape(len(vecs), k)
    lo = 0
    while lo < len(vecs):
        hi = len(vecs)
        A = store[:hi]
        for s in range(lo, hi, 32):
            e = min(hi, s + 32)
            B = A[s:e].astype(np.intp) * nm
            # pairs (i, j) with j <= i, ordered by i, then j, meet before join
            idx = B[:, None, :] + A[None, :, :]
            res = np.stack([mf[idx], jf[idx]], axis=2)  # (i, j, op, k)
            ii, jj = np.meshgrid(np.arange(s, e), np.arange(hi), indexing="ij")
            mask = jj <= ii
            flat = res[mask].reshape(-1, k)
            flat_i = np.repeat(ii[mask], 2)
            flat_j = np.repeat(jj[mask], 2)
            flat_op = np.tile([0, 1], int(mask.sum()))
            keys = np.ascontiguousarray(flat).view(dt).ravel()
            _, first = np.unique(keys, return_index=True)
            first.sort()
            added = []
            for t in first.tolist():
                key = keys[t].tobytes()
                if key in seen:
                    continue
                seen[key] = len(vecs)
                vecs.append(flat[t])
                terms.append(("meet" if flat_op[t] == 0 else "join",
                              int(flat_j[t]), int(flat_i[t])))
                added.append(flat[t])
                if len(vecs) > max_elements:
                    raise ResourceCap(
                        f"closure exceeded {max_elements} elements",
                        resource="closure elements", limit=max_elements, partial=len(vecs))
            if added:
                store = np.concatenate([store, np.array(added, dtype=np.uint8)])
                A = store[:hi]
        lo = hi
    return store, terms


def _tables(M, vectors):
    """Order, meet and join tables of a coordinatewise sublattice of M^K."""
    n, k = vectors.shape
    leq = np.ones((n, n), dtype=bool)
    for c in range(k):
        col = vectors[:, c]
        leq &= M.leq[col[:, None], col[None, :]]
    dt = np.dtype((np.void, max(k, 1)))
    keys = np.ascontiguousarray(vectors).view(dt).ravel()
    order = np.argsort(keys)
    sorted_keys = keys[order]
    nm = M.size
    mf = M.meet.astype(np.uint8).ravel()
    jf = M.join.astype(np.uint8).ravel()
    meet = np.empty((n, n), dtype=np.intp)
    join = np.empty((n, n), dtype=np.intp)
    V = vectors.astype(np.intp)
    for s in range(0, n, 64):
        e = min(n, s + 64)
        idx = V[s:e, None, :] * nm + V[None, :, :]
        for tab, out in ((mf, meet), (jf, join)):
            r = np.ascontiguousarray(tab[idx]).view(dt).reshape(e - s, n)
            pos = np.searchsorted(sorted_keys, r.ravel())
            out[s:e] = order[pos].reshape(e - s, n)
    return leq, meet, join


def free_over_chains(V, P, max_elements=DEFAULT_MAX_ELEMENTS,
                     max_coordinates=DEFAULT_MAX_COORDINATES):
    """Materialise ``E_V(X)`` (or ``B_V(X)`` if ``P.bounded``)."""
    M = V.M
    A = relation_assignments(P, M, max_coordinates)
    kept, prov = reduce_columns(M, A)
    if len(kept) > max_coordinates:
        raise ResourceCap(f"{len(kept)} coordinates after reduction",
                          resource="coordinates", limit=max_coordinates, partial=len(kept))
    coords = A[kept]
    gens = np.ascontiguousarray(coords.T)  # one row per generator
    if len(P.labels) == 0:
        gens = np.zeros((0, 0), dtype=np.uint8)
    vectors, terms = _closure(M, gens, max_elements)
    names = {}
    gen_elems = []
    for g, name in enumerate(P.generator_names):
        x = int(np.flatnonzero((vectors == gens[g]).all(axis=1))[0])
        names[name] = x
        gen_elems.append(x)
    if len(vectors):
        leq, meet, join = _tables(M, vectors)
        L = FiniteLattice(leq, meet, join, names=names)
        bot = np.flatnonzero(leq.all(axis=1))
        top = np.flatnonzero(leq.all(axis=0))
        L.bottom = int(bot[0]) if len(bot) else None
        L.top = int(top[0]) if len(top) else None
    else:
        L = None
    if P.bounded:
        if L is None:
            L = FiniteLattice([[True, True], [False, True]], [[0, 0], [0, 1]],
                              [[0, 1], [1, 1]], names={"0": 0, "1": 1}, bottom=0, top=1)
            terms = [("bottom",), ("top",)]
        else:
            L = adjoin_bounds(L)
            terms = terms + [("bottom",), ("top",)]
    return FreeLattice(L, V, P, coords, vectors, terms, gen_elems, prov, raw_coordinates=len(A))


# ---------------------------------------------------------------------------
# homomorphisms out of a free lattice


def evaluate_terms(F, target, images):
    """Evaluate every stored term of ``F`` in ``target``.

    ``images`` maps generator names (or generator positions) to target
    elements.
    """
    names = F.presentation.generator_names
    if isinstance(images, dict):
        img = [target.index(images[n]) for n in names]
    else:
        img = [target.index(x) for x in images]
    out = np.empty(F.size, dtype=np.intp)
    for x, t in enumerate(F.terms):
        op = t[0]
        if op == "gen":
            out[x] = img[t[1]]
        elif op == "meet":
            out[x] = target.meet[out[t[1]], out[t[2]]]
        elif op == "join":
            out[x] = target.join[out[t[1]], out[t[2]]]
        elif op == "bottom":
            out[x] = target.bottom
        else:
            out[x] = target.top
    return out


def eval_hom(F, target, images):
    """The homomorphism ``F -> target`` determined by generator images.

    Raises RelationViolated if some ``s_l`` is not below ``t_l`` in the
    target and NotAHom if term evaluation does not give a homomorphism.
    """
    names = F.presentation.generator_names
    if isinstance(images, dict):
        img = {n: target.index(images[n]) for n in names}
    else:
        img = {n: target.index(x) for n, x in zip(names, images)}
    for l in F.presentation.labels:
        s, t = img[f"s{l}"], img[f"t{l}"]
        if not target.leq[s, t]:
            raise RelationViolated(f"image of s{l} is not below image of t{l}",
                                   witness=(f"s{l}", f"t{l}"))
    if F.presentation.bounded and (target.bottom is None or target.top is None):
        raise ValueError("a bounded free lattice needs a bounded target")
    mapping = evaluate_terms(F, target, img)
    return check_hom(mapping, F.lattice, target, bounded=F.presentation.bounded)


def inclusion_hom(BY, BX):
    """``B(Y) -> B(X)`` sending each generator to its namesake."""
    if not set(BY.presentation.labels) <= set(BX.presentation.labels):
        raise NotASubset("chain labels of the source are not a subset of the target's")
    images = {n: BX.element(n) for n in BY.presentation.generator_names}
    return eval_hom(BY, BX.lattice, images)


def retraction_hom(BX, BY):
    """``B(X) -> B(Y)`` fixing generators in ``Y`` and sending the rest to 0."""
    if not set(BY.presentation.labels) <= set(BX.presentation.labels):
        raise NotASubset("chain labels of the target are not a subset of the source's")
    keep = set(BY.presentation.labels)
    images = {}
    for l in BX.presentation.labels:
        for c in ("s", "t"):
            images[f"{c}{l}"] = BY.element(f"{c}{l}") if l in keep else BY.lattice.bottom
    return eval_hom(BX, BY.lattice, images)


# ---------------------------------------------------------------------------
# counting without materialising


def projection_relations(M, coords):
    """For every pair of coordinates the sublattice of ``M x M`` generated by
    the projected generators, as 5-bit masks ``mask[k1, u, k2]``: the values
    allowed at ``k2`` when ``k1`` takes ``u``."""
    K = coords.shape[0]
    nm = M.size
    if nm * nm > 62:
        raise ValueError("generating lattice too large for bitmask relations")
    gens = coords.T.astype(np.int64)
    S = np.zeros((K, K), dtype=np.int64)
    for g in gens:
        S |= np.int64(1) << (g[:, None] * nm + g[None, :])
    pairs = [(x, y) for x in range(nm * nm) for y in range(x + 1, nm * nm)]
    prod_meet = {}
    prod_join = {}
    for x, y in pairs:
        a1, b1 = divmod(x, nm)
        a2, b2 = divmod(y, nm)
        prod_meet[(x, y)] = int(M.meet[a1, a2]) * nm + int(M.meet[b1, b2])
        prod_join[(x, y)] = int(M.join[a1, a2]) * nm + int(M.join[b1, b2])
    while True:
        old = S.copy()
        bits = [(S >> x) & 1 for x in range(nm * nm)]
        for x, y in pairs:
            m = bits[x] & bits[y]
            if not m.any():
                continue
            S |= m << prod_meet[(x, y)]
            S |= m << prod_join[(x, y)]
        if (S == old).all():
            break
    mask = np.zeros((K, nm, K), dtype=np.uint8)
    for u in range(nm):
        for v in range(nm):
            mask[:, u, :] |= (((S >> (u * nm + v)) & 1) << v).astype(np.uint8)
    dom = np.array([sum(1 << v for v in range(nm) if (S[k, k] >> (v * nm + v)) & 1)
                    for k in range(K)], dtype=np.uint8)
    return mask, dom


def count_projection(M, coords, state_budget=DEFAULT_STATE_BUDGET):
    """Number of elements of the sublattice of ``M^K`` generated by the
    columns of ``coords`` (one row per coordinate).

    Lattices have a majority term, so by the Baker-Pixley theorem a sublattice
    of a finite power is the set of tuples whose every 2-coordinate projection
    lies in the corresponding projection of the sublattice. The count is a
    memoised backtracking over coordinates, keyed by the remaining domains.
    """
    mask, dom0 = projection_relations(M, coords)
    K = coords.shape[0]
    nm = M.size
    bits = [[v for v in range(nm) if m >> v & 1] for m in range(1 << nm)]
    memo = {}

    def count(j, dom):
        if j == K:
            return 1
        key = (j, dom[j:].tobytes())
        r = memo.get(key)
        if r is not None:
            return r
        if len(memo) >= state_budget:
            raise ResourceCap(f"counting exceeded {state_budget} states",
                              resource="count states", limit=state_budget, partial=len(memo))
        tot = 0
        for v in bits[dom[j]]:
            nd = dom & mask[j, v]
            if (nd[j + 1:] == 0).any():
                continue
            tot += count(j + 1, nd)
        memo[key] = tot
        return tot

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, K + 1000))
    try:
        return count(0, dom0)
    finally:
        sys.setrecursionlimit(old)


def count_free_elements(V, P, state_budget=DEFAULT_STATE_BUDGET,
                        max_coordinates=DEFAULT_MAX_COORDINATES):
    """``|E_V(X)|`` (plus 2 when bounded) without materialising the lattice."""
    A = relation_assignments(P, V.M, max_coordinates)
    kept, _ = reduce_columns(V.M, A)
    n = count_projection(V.M, A[kept], state_budget)
    return n + 2 if P.bounded else n


def free_element_bounds(V, P, state_budget=DEFAULT_STATE_BUDGET,
                        max_coordinates=DEFAULT_MAX_COORDINATES):
    """Exact size when countable within budget, else certified bounds.

    Returns ``dict(exact=..., lower=..., upper=..., coordinates=...)``. The
    lower bound is the size of the projection onto the longest prefix of
    coordinates that can be counted; the upper bound is ``|M|^K``.
    """
    A = relation_assignments(P, V.M, max_coordinates)
    kept, _ = reduce_columns(V.M, A)
    coords = A[kept]
    extra = 2 if P.bounded else 0
    K = len(kept)
    out = {"coordinates": K, "upper": V.M.size ** K + extra}
    try:
        n = count_projection(V.M, coords, state_budget)
        out.update(exact=n + extra, lower=n + extra, upper=n + extra)
        return out
    except ResourceCap:
        pass
    lo, hi, best = 1, K - 1, 0
    while lo <= hi:
        mid = (lo + hi) // 2
        try:
            best = max(best, count_projection(V.M, coords[:mid], state_budget))
            lo = mid + 1
        except ResourceCap:
            hi = mid - 1
    out.update(exact=None, lower=best + extra)
    return out


# ---------------------------------------------------------------------------
# congruences of bounded free lattices via meet-irreducible kernels


@dataclass(frozen=True)
class Kernel:
    """The kernel of the bounded homomorphism ``B(X) -> M`` given by an
    assignment, whose image is a subdirectly irreducible sublattice."""

    assignment: tuple
    image: frozenset

    @property
    def image_size(self):
        return len(self.image)


class KernelModel:
    """Congruence lattice of ``B_V(X)`` through its meet-irreducibles.

    For a finite lattice ``L`` in ``HSP(M)`` every congruence is the meet of
    the meet-irreducible congruences above it, these are exactly the kernels
    of surjections onto subdirectly irreducible lattices, and (for ``M`` in
    ``{2, M3, N5}``) those are the sublattices of ``M`` that are subdirectly
    irreducible. Every bounded homomorphism out of ``B(X)`` comes from a
    relation-respecting assignment of the generators, so the kernels can be
    listed without building ``B(X)``.

    A congruence is represented by the bitmask of kernels containing it.
    Con(L) is distributive, so joins are intersections and meets unions of
    these masks.
    """

    def __init__(self, V, P, max_coordinates=DEFAULT_MAX_COORDINATES):
        if not P.bounded:
            raise ValueError("the kernel model is for bounded presentations")
        self.V = V
        self.P = P
        M = V.M
        self.M = M
        A = relation_assignments(P, M, max_coordinates)
        images = {}
        for row in A:
            key = frozenset(int(v) for v in row)
            if key not in images:
                images[key] = _generated(M, row, True)
        si = {}
        for img in set(images.values()):
            si[img] = _is_subdirectly_irreducible(sublattice(M, sorted(img)))
        # isomorphism classes of SI images with maps to a representative
        reps = []
        to_rep = {}
        for img in sorted((i for i in si if si[i]), key=lambda s: (len(s), sorted(s))):
            S = sublattice(M, sorted(img))
            for r, R in reps:
                if R.size == S.size and find_isomorphism(S, R) is not None:
                    to_rep[img] = (r, _lattice_isos(M, img, r))
                    break
            else:
                reps.append((img, S))
                to_rep[img] = (img, _lattice_isos(M, img, img))
        self.kernels = []
        self._kernel_key = {}
        for row in A:
            img = images[frozenset(int(v) for v in row)]
            if not si[img]:
                continue
            rep, isos = to_rep[img]
            key = (rep, min(tuple(int(f[v]) for v in row) for f in isos))
            if key in self._kernel_key:
                continue
            self._kernel_key[key] = len(self.kernels)
            self.kernels.append(Kernel(tuple(int(v) for v in row), img))
        self.m = len(self.kernels)
        self.full = (1 << self.m) - 1
        self.zero = self.full
        self.one = 0
        self._assign = np.array([k.assignment for k in self.kernels], dtype=np.intp).reshape(
            self.m, 2 * len(P.labels))
        self._upper = self._kernel_order()

    # representation ---------------------------------------------------

    def _value(self, term):
        """Values of an element of B(X) under every kernel's homomorphism.

        ``term`` is a generator name, ``"0"``/``"1"`` or a nested
        ``("meet" | "join", t1, t2)``.
        """
        M = self.M
        if isinstance(term, str):
            if term == "0":
                return np.full(self.m, M.bottom, dtype=np.intp)
            if term == "1":
                return np.full(self.m, M.top, dtype=np.intp)
            return self._assign[:, self.P.generator_names.index(term)]
        op, x, y = term
        tab = M.meet if op == "meet" else M.join
        return tab[self._value(x), self._value(y)]

    def _mask(self, bools):
        out = 0
        for i in np.flatnonzero(bools).tolist():
            out |= 1 << i
        return out

    def theta(self, a, b):
        """Theta(a, b) for element terms ``a`` and ``b``."""
        return self._mask(self._value(a) == self._value(b))

    def theta_plus(self, a, b):
        return self.theta(("meet", a, b), a)

    def join(self, *ts):
        out = self.full
        for t in ts:
            out &= t
        return out

    def meet(self, *ts):
        out = 0
        for t in ts:
            out |= t
        return out

    def leq(self, t, s):
        """``t <= s`` as congruences."""
        return (s & ~t) == 0

    def is_one(self, t):
        return t == 0

    def is_zero(self, t):
        return t == self.full

    # images of smaller free lattices ------------------------------------

    def restricted_homs(self, BY):
        """For every kernel, the homomorphism ``B(Y) -> M`` obtained by
        restricting its assignment to the chains of ``Y``; as an array of
        shape ``(m, |B(Y)|)``."""
        names = self.P.generator_names
        rows = []
        for k in self.kernels:
            images = {n: k.assignment[names.index(n)] for n in BY.presentation.generator_names}
            rows.append(evaluate_terms(BY, self.M, images))
        return np.array(rows, dtype=np.intp).reshape(self.m, BY.size)

    def embed(self, BY, phi, homs=None):
        """Image of a congruence of ``B(Y)`` under ``Con(inclusion)``."""
        homs = self.restricted_homs(BY) if homs is None else homs
        lab = phi.labels
        return self._mask((homs[:, lab] == homs).all(axis=1))

    # kernel order and counting -----------------------------------------

    def _kernel_order(self):
        """``upper[i]``: bitmask of kernels strictly containing kernel ``i``."""
        M = self.M
        upper = [0] * self.m
        by_size = {}
        for i, k in enumerate(self.kernels):
            by_size.setdefault(k.image_size, []).append(i)
        for i, k in enumerate(self.kernels):
            S = sublattice(M, sorted(k.image))
            elems = sorted(k.image)
            pos = {e: t for t, e in enumerate(elems)}
            for size, idxs in by_size.items():
                if size >= k.image_size:
                    continue
                T = sublattice(M, sorted(self.kernels[idxs[0]].image))
                for h in all_homs(S, T, bounded=True):
                    if not h.is_surjective():
                        continue
                    tel = sorted(self.kernels[idxs[0]].image)
                    row = tuple(tel[h.map[pos[v]]] for v in k.assignment)
                    for j in idxs:
                        if self._same_kernel(row, self.kernels[j]):
                            upper[i] |= 1 << j
        return upper

    def _same_kernel(self, row, kernel):
        img = _generated(self.M, row, True)
        if len(img) != kernel.image_size:
            return False
        pairs = {(a, b) for a, b in zip(row, kernel.assignment)}
        pairs |= {(self.M.bottom, self.M.bottom), (self.M.top, self.M.top)}
        graph = _generated_pairs(self.M, pairs)
        firsts = {}
        for a, b in graph:
            if firsts.setdefault(a, b) != b:
                return False
        return len(set(firsts.values())) == len(firsts)

    def is_boolean(self):
        return not any(self._upper)

    def count_congruences(self):
        """Number of congruences = number of up-sets of the kernel poset."""
        if self.is_boolean():
            return 1 << self.m
        tops = [i for i in range(self.m) if self._upper[i] == 0]
        lows = [i for i in range(self.m) if self._upper[i] != 0]
        if any(self._upper[j] for i in lows for j in range(self.m) if self._upper[i] >> j & 1):
            raise NotImplementedError("kernel poset of height > 2")
        if len(tops) > 30:
            raise ResourceCap("too many maximal kernels to count up-sets",
                              resource="maximal kernels", limit=30, partial=len(tops))
        tpos = {t: b for b, t in enumerate(tops)}
        T = len(tops)
        g = np.zeros(1 << T, dtype=np.int32)
        for i in lows:
            mask = 0
            for t in tops:
                if self._upper[i] >> t & 1:
                    mask |= 1 << tpos[t]
            g[mask] += 1
        # zeta transform: f[S] = number of low kernels whose uppers lie in S
        for b in range(T):
            step = 1 << b
            view = g.reshape(-1, 2 * step)
            view[:, step:] += view[:, :step]
        hist = np.bincount(g)
        return sum(int(c) << e for e, c in enumerate(hist.tolist()) if c)

    def summary(self):
        sizes = {}
        for k in self.kernels:
            sizes[k.image_size] = sizes.get(k.image_size, 0) + 1
        return {"kernels": self.m, "by_image_size": dict(sorted(sizes.items())),
                "boolean": self.is_boolean()}


def _generated_pairs(M, pairs):
    """Sublattice of M x M generated by ``pairs``."""
    s = set(pairs)
    frontier = list(s)
    while frontier:
        nxt = []
        cur = list(s)
        for a in frontier:
            for b in cur:
                for c in ((int(M.meet[a[0], b[0]]), int(M.meet[a[1], b[1]])),
                          (int(M.join[a[0], b[0]]), int(M.join[a[1], b[1]]))):
                    if c not in s:
                        s.add(c)
                        nxt.append(c)
        frontier = nxt
    return s


def _is_subdirectly_irreducible(S):
    """A lattice with at least two elements whose nonzero congruences all
    contain a common nonzero one."""
    if S.size < 2:
        return False
    con = enumerate_con(S)
    nonzero = [i for i in range(len(con)) if i != con.zero]
    if not nonzero:
        return False
    mono = nonzero[0]
    for i in nonzero[1:]:
        mono = con.meet(mono, i)
    return mono != con.zero


def _lattice_isos(M, src, dst):
    """All isomorphisms between two sublattices of ``M`` as maps on ``M``
    (identity outside ``src``)."""
    A = sublattice(M, sorted(src))
    B = sublattice(M, sorted(dst))
    se, de = sorted(src), sorted(dst)
    out = []
    for h in all_homs(A, B, bounded=True):
        if h.is_injective() and h.is_surjective():
            f = np.arange(M.size)
            for t, e in enumerate(se):
                f[e] = de[h.map[t]]
            out.append(f)
    return out
