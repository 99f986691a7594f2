"""Congruences of finite lattices.

A congruence is stored as its block labelling: ``labels[x]`` is the least
element of the block of ``x``. Two congruences of the same host are equal iff
their labellings are equal.
"""

from __future__ import annotations

import functools

import numpy as np

from .errors import HostMismatch, NotAHom, ResourceCap
from .lattice import FiniteLattice

DEFAULT_CON_CAP = 100_000


def _canonical(labels):
    """Relabel so every element points at the least member of its block."""
    labels = np.asarray(labels)
    first = {}
    out = np.empty(len(labels), dtype=np.intp)
    for x, r in enumerate(labels.tolist()):
        out[x] = first.setdefault(r, x)
    return out


class Congruence:
    def __init__(self, host, labels):
        self.host = host
        lab = np.asarray(labels, dtype=np.intp)
        lab.setflags(write=False)
        self.labels = lab
        self._key = lab.tobytes()

    @classmethod
    def from_blocks(cls, host, blocks):
        lab = np.arange(host.size)
        for b in blocks:
            b = sorted(host.index(x) for x in b)
            lab[b] = b[0]
        return cls(host, _canonical(lab))

    @classmethod
    def zero(cls, host):
        return cls(host, np.arange(host.size))

    @classmethod
    def one(cls, host):
        return cls(host, np.zeros(host.size, dtype=np.intp))

    def __eq__(self, other):
        return isinstance(other, Congruence) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Congruence({self})"

    def __str__(self):
        return "{" + "|".join(",".join(map(str, b)) for b in self.blocks) + "}"

    @property
    def blocks(self):
        out = {}
        for x, r in enumerate(self.labels.tolist()):
            out.setdefault(r, []).append(x)
        return [out[r] for r in sorted(out)]

    def related(self, a, b):
        return self.labels[a] == self.labels[b]

    def is_zero(self):
        return bool((self.labels == np.arange(self.host.size)).all())

    def is_one(self):
        return bool((self.labels == 0).all()) if self.host.size else True

    def __le__(self, other):
        """Refinement: every block of ``self`` lies inside a block of ``other``."""
        _same_host(self, other)
        return bool((other.labels[self.labels] == other.labels).all())

    def __or__(self, other):
        return join_congruences(self, other)

    def __and__(self, other):
        return meet_congruences(self, other)

    def is_compatible(self):
        return compatibility_violation(self.host, self.labels) is None


def _same_host(a, b):
    if a.host is not b.host and a.host.size != b.host.size:
        raise HostMismatch("congruences live on different lattices")
    if a.host is not b.host and not np.array_equal(a.host.meet, b.host.meet):
        raise HostMismatch("congruences live on different lattices")


def compatibility_violation(L, labels):
    """First ``(x, c, op)`` with ``x ~ rep(x)`` but ``op(x, c) !~ op(rep(x), c)``."""
    lab = np.asarray(labels)
    for op, tab in (("meet", L.meet), ("join", L.join)):
        img = lab[tab]  # class of op(x, c)
        bad = img != img[lab]
        if bad.any():
            x, c = np.argwhere(bad)[0]
            return int(x), int(c), op
    return None


def _merge(labels, a, b):
    """Union the classes of the pairs ``a[k] ~ b[k]``; each class keeps its
    least element as representative."""
    parent = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while x != root:
            parent[x], x = root, parent[x]
        return root

    for x, y in zip(labels[a].tolist(), labels[b].tolist()):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    if parent:
        roots = np.arange(labels.size)
        for x in parent:
            roots[x] = find(x)
        labels[:] = roots[labels]
    return bool(parent)


def _close(L, labels, pending):
    """Least congruence containing the equivalence ``labels`` and the pairs in
    ``pending``. ``labels`` is modified in place (a representative labelling).

    An equivalence is a congruence iff every pair ``(x, rep(x))`` stays related
    under every translation ``meet(-, c)`` and ``join(-, c)``; unary
    polynomials of a lattice are composites of translations. Each round merges
    all violating pairs at once until none is left.
    """
    pending = np.asarray(list(pending), dtype=np.intp).reshape(-1, 2)
    _merge(labels, pending[:, 0], pending[:, 1])
    while True:
        changed = False
        for tab in (L.meet, L.join):
            img = labels[tab]
            rep = img[labels]
            bad = img != rep
            if bad.any():
                changed |= _merge(labels, img[bad], rep[bad])
        if not changed:
            return labels


# principal congruences are cached per lattice, up to this many stored labels
PRINCIPAL_CACHE_ITEMS = 20_000_000


def _principal_labels(L, a, b):
    if a > b:
        a, b = b, a
    cache = L.__dict__.setdefault("_principal_cache", {})
    lab = cache.get((a, b))
    if lab is None:
        lab = _canonical(_close(L, np.arange(L.size), [(a, b)]))
        lab.setflags(write=False)
        if (len(cache) + 1) * L.size > PRINCIPAL_CACHE_ITEMS:
            cache.clear()
        cache[(a, b)] = lab
    return lab


def principal_congruence(L, a, b):
    """Theta(a, b): the least congruence of ``L`` identifying ``a`` and ``b``."""
    return Congruence(L, _principal_labels(L, L.index(a), L.index(b)))


def congruence_generated(L, pairs):
    """Least congruence containing ``pairs``: the join of their principal
    congruences, which in Con(L) is the join of the equivalences."""
    labels = np.arange(L.size)
    for a, b in pairs:
        a, b = L.index(a), L.index(b)
        if labels[a] == labels[b]:
            continue
        p = _principal_labels(L, a, b)
        moved = np.flatnonzero(p != np.arange(L.size))
        _merge(labels, moved, p[moved])
    return Congruence(L, _canonical(labels))


def theta_plus(L, a, b):
    """Theta+(a, b) = Theta(a ^ b, a), the least congruence making a <= b."""
    a, b = L.index(a), L.index(b)
    return principal_congruence(L, int(L.meet[a, b]), a)


def join_congruences(t, s):
    _same_host(t, s)
    L = t.host
    labels = t.labels.copy()
    # merge each element with its s-representative, then re-close
    pairs = [(x, r) for x, r in enumerate(s.labels.tolist()) if x != r]
    lab = _close(L, labels, pairs)
    out = Congruence(L, _canonical(lab))
    bad = compatibility_violation(L, out.labels)
    if bad is not None:
        raise RuntimeError(f"join of congruences is not compatible at {bad}")
    return out


def meet_congruences(t, s):
    _same_host(t, s)
    key = t.labels * t.host.size + s.labels
    return Congruence(t.host, _canonical(key))


# ---------------------------------------------------------------------------
# the congruence lattice


class ConLattice:
    """All congruences of a finite lattice.

    ``elements`` are listed in discovery order with 0 first. ``lattice`` is the
    refinement order as a :class:`FiniteLattice` whose meet/join tables are
    computed from the order alone (built on first use).
    """

    def __init__(self, host, elements, cover_thetas):
        self.host = host
        self.elements = list(elements)
        self.index = {c: i for i, c in enumerate(self.elements)}
        self.cover_thetas = cover_thetas
        self._principal = {}
        self.zero = self.index[Congruence.zero(host)]
        self.one = self.index[Congruence.one(host)]

    @functools.cached_property
    def lattice(self):
        n = len(self.elements)
        lab = np.array([c.labels for c in self.elements])
        # leq[i, j]: elements[i] refines elements[j]
        leq = np.empty((n, n), dtype=bool)
        for j in range(n):
            lj = lab[j]
            leq[:, j] = (lj[lab] == lj[None, :]).all(axis=1)
        return FiniteLattice.from_leq(leq)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def find(self, theta):
        return self.index[theta]

    def principal(self, a, b):
        """Index of Theta(a, b)."""
        a, b = self.host.index(a), self.host.index(b)
        key = (min(a, b), max(a, b))
        if key not in self._principal:
            self._principal[key] = self.index[principal_congruence(self.host, *key)]
        return self._principal[key]

    def join(self, i, j):
        return int(self.lattice.join[i, j])

    def meet(self, i, j):
        return int(self.lattice.meet[i, j])

    def leq(self, i, j):
        return bool(self.lattice.leq[i, j])

    def join_irreducibles(self):
        """Indices of the distinct cover-principal congruences."""
        return sorted(set(self.cover_thetas.values()))


def enumerate_con(L, cap=DEFAULT_CON_CAP, seeds="covers"):
    """All congruences of ``L`` as the join-closure of cover-principal
    congruences (``seeds="covers"``) or of all principal congruences
    (``seeds="pairs"``)."""
    if seeds == "covers":
        pairs = L.covers()
    elif seeds == "pairs":
        pairs = [(a, b) for a in range(L.size) for b in range(a + 1, L.size)]
    else:
        raise ValueError(seeds)
    gens = {}
    for a, b in pairs:
        gens[(a, b)] = principal_congruence(L, a, b)
    basis = list(dict.fromkeys(gens.values()))
    zero = Congruence.zero(L)
    found = {zero: 0}
    order = [zero]
    frontier = [zero]
    while frontier:
        nxt = []
        for t in frontier:
            for g in basis:
                u = join_congruences(t, g)
                if u not in found:
                    found[u] = len(order)
                    order.append(u)
                    nxt.append(u)
                    if len(order) > cap:
                        raise ResourceCap(
                            f"more than {cap} congruences", resource="congruences",
                            limit=cap, partial=len(order))
        frontier = nxt
    con = ConLattice(L, order, {})
    cov = set(L.covers())
    con.cover_thetas = {p: con.index[c] for p, c in gens.items() if p in cov}
    for (a, b), c in gens.items():
        con._principal[(a, b)] = con.index[c]
    return con


def con_to_lattice(con):
    """The congruence lattice as a plain FiniteLattice (indices as in ``con``)."""
    return con.lattice


# ---------------------------------------------------------------------------
# the congruence functor


def image_congruence(f, theta):
    """Least congruence of ``f.target`` containing ``f x f`` of ``theta``."""
    pairs = []
    fm = f.map
    for x, r in enumerate(theta.labels.tolist()):
        if x != r and fm[x] != fm[r]:
            pairs.append((int(fm[x]), int(fm[r])))
    return congruence_generated(f.target, pairs)


class ConMap:
    """``Con(f)`` as a map between enumerated congruence lattices."""

    def __init__(self, f, con_source, con_target):
        self.hom = f
        self.source = con_source
        self.target = con_target
        self.table = np.array(
            [con_target.index[image_congruence(f, t)] for t in con_source.elements],
            dtype=np.intp)

    def __call__(self, i):
        return int(self.table[i])

    def apply(self, theta):
        return self.target.elements[self.table[self.source.index[theta]]]


def con_map(f, con_source=None, con_target=None):
    con_source = con_source or enumerate_con(f.source)
    con_target = con_target or enumerate_con(f.target)
    return ConMap(f, con_source, con_target)


# ---------------------------------------------------------------------------
# weak distributivity and congruence splitting


def is_weak_distributive(mu, S, T):
    """Decide weak-distributivity of a join/zero-preserving ``mu: S -> T``.

    ``S`` and ``T`` are finite join-semilattices with zero (anything with
    ``size``, ``join`` table, ``zero`` and ``leq``). Returns ``(True, None)``
    or ``(False, (e, b0, b1))``.
    """
    from .semilattice import as_semilattice

    S, T = as_semilattice(S), as_semilattice(T)
    mu = np.asarray(mu, dtype=np.intp)
    if mu[S.zero] != T.zero:
        raise NotAHom("map does not preserve zero", witness=(S.zero,), law="zero")
    bad = mu[S.join] != T.join[mu[:, None], mu[None, :]]
    if bad.any():
        a, b = np.argwhere(bad)[0]
        raise NotAHom(f"map does not preserve join at ({a}, {b})",
                      witness=(int(a), int(b)), law="join")
    for e in range(S.size):
        below_e = np.flatnonzero(S.leq[:, e])
        for b0 in range(T.size):
            for b1 in range(T.size):
                if T.join[b0, b1] != mu[e]:
                    continue
                A0 = below_e[T.leq[mu[below_e], b0]]
                A1 = below_e[T.leq[mu[below_e], b1]]
                if not (S.join[np.ix_(A0, A1)] == e).any():
                    return False, (e, b0, b1)
    return True, None


def is_congruence_splitting(L, con=None):
    """Decide congruence splitting; ``(True, None)`` or
    ``(False, (a, b, i0, i1))`` with congruence indices into ``con``."""
    con = con or enumerate_con(L)
    CL = con.lattice
    leq = L.leq
    for a in range(L.size):
        for b in range(L.size):
            if not leq[a, b]:
                continue
            t = con.principal(a, b)
            inside = [x for x in range(L.size) if leq[a, x] and leq[x, b]]
            theta_ax = {x: con.principal(a, x) for x in inside}
            for i0 in range(len(con)):
                if not CL.leq[i0, t]:
                    continue
                for i1 in range(len(con)):
                    if CL.join[i0, i1] != t:
                        continue
                    ok = False
                    for x0 in inside:
                        if not CL.leq[theta_ax[x0], i0]:
                            continue
                        for x1 in inside:
                            if L.join[x0, x1] == b and CL.leq[theta_ax[x1], i1]:
                                ok = True
                                break
                        if ok:
                            break
                    if not ok:
                        return False, (a, b, i0, i1)
    return True, None
