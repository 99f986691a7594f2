"""Finite lattices given by explicit order, meet and join tables.

Elements are the integers ``0..size-1``; labels in ``names`` are metadata.
All arrays are made read-only after construction so lattices can be shared
freely.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NotAHom, NotALattice, NotAPartialOrder, ParseError


def _frozen(a, dtype=None):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


class FiniteLattice:
    """A finite lattice.

    Parameters
    ----------
    leq : (n, n) bool array, ``leq[a, b]`` iff ``a <= b``.
    meet, join : (n, n) int arrays.
    names : optional mapping label -> index.
    bottom, top : optional distinguished indices.

    The constructor trusts its input; use :func:`validate_lattice` or
    :meth:`from_leq` for unchecked data, or call :meth:`check`.
    """

    def __init__(self, leq, meet, join, names=None, bottom=None, top=None):
        self.leq = _frozen(leq, bool)
        self.meet = _frozen(meet, np.intp)
        self.join = _frozen(join, np.intp)
        self.size = int(self.leq.shape[0])
        self.names = dict(names or {})
        self.bottom = bottom
        self.top = top

    # construction -------------------------------------------------------

    @classmethod
    def from_leq(cls, leq, names=None):
        """Build from a (reflexive, transitive) order matrix, computing bounds,
        meets and joins. Raises NotAPartialOrder / NotALattice."""
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        if n == 0:
            raise NotALattice("empty order")
        if not leq.diagonal().all():
            raise NotAPartialOrder("relation is not reflexive")
        anti = leq & leq.T
        np.fill_diagonal(anti, False)
        if anti.any():
            a, b = (int(x) for x in np.argwhere(anti)[0])
            raise NotAPartialOrder(
                f"antisymmetry fails: {a} <= {b} and {b} <= {a}", witness=(a, b)
            )
        meet = _bound_table(leq.T, "meet")
        join = _bound_table(leq, "join")
        bot = np.flatnonzero(leq.all(axis=1))
        top = np.flatnonzero(leq.all(axis=0))
        return cls(leq, meet, join, names=names, bottom=int(bot[0]), top=int(top[0]))

    # basic queries ------------------------------------------------------

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"FiniteLattice(size={self.size})"

    def index(self, x):
        """Resolve a label or an index to an index."""
        if isinstance(x, str):
            if x in self.names:
                return self.names[x]
            if x.isdigit():
                return int(x)
            raise KeyError(x)
        return int(x)

    def label(self, i):
        for k, v in self.names.items():
            if v == i:
                return k
        return str(i)

    def le(self, a, b):
        return bool(self.leq[self.index(a), self.index(b)])

    def m(self, a, b):
        return int(self.meet[self.index(a), self.index(b)])

    def j(self, a, b):
        return int(self.join[self.index(a), self.index(b)])

    def meet_all(self, elems):
        elems = [self.index(e) for e in elems]
        out = elems[0] if elems else self.top
        for e in elems[1:]:
            out = int(self.meet[out, e])
        return out

    def join_all(self, elems):
        elems = [self.index(e) for e in elems]
        out = elems[0] if elems else self.bottom
        for e in elems[1:]:
            out = int(self.join[out, e])
        return out

    def covers(self):
        """Covering pairs ``(a, b)`` with ``a < b`` and nothing strictly between."""
        strict = self.leq.copy()
        np.fill_diagonal(strict, False)
        # a < c < b for some c
        between = (strict.astype(np.uint8) @ strict.astype(np.uint8)) > 0
        cov = strict & ~between
        return [(int(a), int(b)) for a, b in np.argwhere(cov)]

    def heights(self):
        """Length of the longest chain from the bottom to each element."""
        h = np.zeros(self.size, dtype=int)
        order = np.argsort(self.leq.sum(axis=0), kind="stable")
        cov = self.covers()
        below = {b: [] for b in range(self.size)}
        for a, b in cov:
            below[b].append(a)
        for b in order:
            if below[b]:
                h[b] = 1 + max(h[a] for a in below[b])
        return h

    def interval(self, a, b):
        return [int(x) for x in np.flatnonzero(self.leq[a] & self.leq[:, b])]

    def renamed(self, names):
        return FiniteLattice(self.leq, self.meet, self.join, names=names,
                             bottom=self.bottom, top=self.top)

    # verification -------------------------------------------------------

    def check(self):
        """Exhaustively verify the order and that the tables are glb/lub."""
        leq, meet, join, n = self.leq, self.meet, self.join, self.size
        if not leq.diagonal().all():
            raise NotAPartialOrder("relation is not reflexive")
        anti = leq & leq.T
        np.fill_diagonal(anti, False)
        if anti.any():
            a, b = (int(x) for x in np.argwhere(anti)[0])
            raise NotAPartialOrder("antisymmetry fails", witness=(a, b))
        for a in range(n):
            # transitivity: a <= b <= c  =>  a <= c
            reach = leq[leq[a]].any(axis=0)
            if (reach & ~leq[a]).any():
                raise NotAPartialOrder(f"transitivity fails at {a}", witness=(a,))
        idx = np.arange(n)
        for a in range(n):
            m, j = meet[a], join[a]
            if not (leq[m, a].all() and leq[m, idx].all()):
                raise NotALattice(f"meet row {a} is not a lower bound", witness=(a,))
            if not (leq[a, j].all() and leq[idx, j].all()):
                raise NotALattice(f"join row {a} is not an upper bound", witness=(a,))
            lower = leq[:, a][:, None] & leq  # [c, b]: c <= a and c <= b
            if (lower & ~leq[:, m]).any():
                c, b = np.argwhere(lower & ~leq[:, m])[0]
                raise NotALattice(f"meet({a},{b}) is not greatest", witness=(a, int(b)))
            upper = leq[a][:, None] & leq.T  # [c, b]: a <= c and b <= c
            if (upper & ~leq[j].T).any():
                c, b = np.argwhere(upper & ~leq[j].T)[0]
                raise NotALattice(f"join({a},{b}) is not least", witness=(a, int(b)))
        if self.bottom is not None and not leq[self.bottom].all():
            raise NotALattice("declared bottom is not the minimum")
        if self.top is not None and not leq[:, self.top].all():
            raise NotALattice("declared top is not the maximum")
        return self

    def check_axioms(self):
        """Algebraic lattice laws on all pairs and triples.

        Returns a list of violated law names (empty when all hold).
        """
        meet, join = self.meet, self.join
        bad = []
        if not (meet == meet.T).all():
            bad.append("meet commutative")
        if not (join == join.T).all():
            bad.append("join commutative")
        d = np.arange(self.size)
        if not (meet[d, d] == d).all():
            bad.append("meet idempotent")
        if not (join[d, d] == d).all():
            bad.append("join idempotent")
        if not (meet[d[:, None], join] == d[:, None]).all():
            bad.append("absorption a^(avb)=a")
        if not (join[d[:, None], meet] == d[:, None]).all():
            bad.append("absorption av(a^b)=a")
        for a in range(self.size):
            # (a^b)^c == a^(b^c) for all b, c
            if not (meet[meet[a][:, None], d[None, :]] == meet[a][meet]).all():
                bad.append("meet associative")
                break
            if not (join[join[a][:, None], d[None, :]] == join[a][join]).all():
                bad.append("join associative")
                break
        return bad


def _bound_table(below, op):
    """Greatest lower bounds (or least upper bounds) from an order.

    For meets pass ``below = leq.T`` (``below[a, c]`` iff ``c <= a``); for
    joins pass ``leq`` itself. The unique candidate with the
    largest principal ideal (filter) is the glb (lub) if one exists.
    """
    n = below.shape[0]
    # columns sorted by size of principal ideal (filter), largest first, so
    # the first common bound in each row is the only possible answer
    score = below.sum(axis=1)
    perm = np.argsort(-score, kind="stable")
    bp = below[:, perm]
    table = np.empty((n, n), dtype=np.intp)
    rows = np.arange(n)
    packed = np.packbits(bp, axis=1)
    # position of the highest set bit of each byte, for first-bit lookup
    lead = np.array([8 if v == 0 else 7 - int(v).bit_length() + 1 for v in range(256)])
    for a in range(n):
        cand = packed[a][None, :] & packed  # [b, k]: perm[k] bounds a and b
        nz = cand != 0
        byte = nz.argmax(axis=1)
        found = nz[rows, byte]
        if not found.all():
            b = int(np.flatnonzero(~found)[0])
            lo, hi = min(a, b), max(a, b)
            raise NotALattice(f"elements {lo} and {hi} have no {op}", witness=(lo, hi))
        first = byte * 8 + lead[cand[rows, byte]]
        best = perm[first]
        # every other common bound must lie on the correct side of best
        bad = (cand & ~packed[best]).any(axis=1)
        if bad.any():
            b = int(np.flatnonzero(bad)[0])
            lo, hi = min(a, b), max(a, b)
            raise NotALattice(f"elements {lo} and {hi} have no {op}", witness=(lo, hi))
        table[a] = best
    return table


def transitive_closure(rel):
    """Reflexive-transitive closure of a boolean relation matrix."""
    r = np.asarray(rel, dtype=bool).copy()
    np.fill_diagonal(r, True)
    n = r.shape[0]
    for k in range(n):
        r |= r[:, [k]] & r[[k], :]
    return r


def validate_lattice(size, covers=(), leq=(), names=None):
    """Build and verify a lattice from a cover list and/or ``leq`` pairs."""
    size = int(size)
    if size <= 0:
        raise NotALattice("a lattice needs at least one element")
    rel = np.zeros((size, size), dtype=bool)
    for a, b in itertools.chain(covers, leq):
        a, b = int(a), int(b)
        if not (0 <= a < size and 0 <= b < size):
            raise ParseError(f"index out of range in pair ({a}, {b})")
        rel[a, b] = True
    closed = transitive_closure(rel)
    L = FiniteLattice.from_leq(closed, names=names)
    return L.check()


# ---------------------------------------------------------------------------
# standard small lattices


def chain(n):
    return validate_lattice(n, covers=[(i, i + 1) for i in range(n - 1)])


def m3():
    """The diamond: 0, atoms p=1, q=2, r=3, top 4."""
    return validate_lattice(
        5,
        covers=[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
        names={"0": 0, "p": 1, "q": 2, "r": 3, "1": 4},
    )


def n5():
    """The pentagon: 0 < c < a < 1 and 0 < b < 1."""
    return validate_lattice(
        5,
        covers=[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)],
        names={"0": 0, "c": 1, "a": 2, "b": 3, "1": 4},
    )


def two():
    return validate_lattice(2, covers=[(0, 1)], names={"0": 0, "1": 1})


STANDARD = {"m3": m3, "n5": n5, "two": two}


@dataclass(frozen=True)
class Decoration:
    """Three 2-element chains ``x[i] <= y[i]`` inside a host lattice."""

    host: FiniteLattice
    x: tuple
    y: tuple

    def __post_init__(self):
        for i in range(3):
            if not self.host.leq[self.x[i], self.y[i]]:
                raise ValueError(f"x{i} is not below y{i}")


def make_decorated(which):
    """The decorated diamond (``"M3"``) or pentagon (``"N5"``)."""
    which = which.upper()
    if which == "M3":
        L = m3()
        n = L.names
        x = (n["0"], n["q"], n["0"])
        y = (n["p"], n["1"], n["r"])
    elif which == "N5":
        L = n5()
        n = L.names
        x = (n["0"], n["b"], n["0"])
        y = (n["c"], n["1"], n["a"])
    else:
        raise ValueError(f"unknown decoration {which!r}")
    return L, Decoration(L, x, y)


# ---------------------------------------------------------------------------
# sublattices and distributivity


def generated_sublattice(L, seeds):
    """Closure of ``seeds`` under meet and join.

    Returns ``(elements, terms)``: a sorted tuple of indices and a dict sending
    each element to a term ``("gen", s)``, ``("meet", x, y)`` or
    ``("join", x, y)`` whose operands are earlier closure elements. Terms are
    assigned in breadth-first order, smallest operands first.
    """
    seeds = sorted({L.index(s) for s in seeds})
    if not seeds:
        raise ValueError("seed set must be nonempty")
    for s in seeds:
        if not 0 <= s < L.size:
            raise IndexError(s)
    order = list(seeds)
    terms = {s: ("gen", s) for s in seeds}
    lo = 0
    while lo < len(order):
        hi = len(order)
        found = []
        for i in range(lo, hi):
            x = order[i]
            for k in range(i + 1):
                y = order[k]
                a, b = (y, x) if y <= x else (x, y)
                for op, tab in (("meet", L.meet), ("join", L.join)):
                    z = int(tab[a, b])
                    if z not in terms:
                        found.append((a, b, op, z))
                        terms[z] = None
        found.sort(key=lambda t: (t[0], t[1], t[2]))
        for a, b, op, z in found:
            if terms[z] is None:
                terms[z] = (op, a, b)
                order.append(z)
        lo = hi
    return tuple(sorted(order)), terms


def sublattice(L, elements, names=None):
    """The lattice induced on a meet/join-closed subset, reindexed ``0..k-1``
    in the order given."""
    elements = list(elements)
    pos = {e: i for i, e in enumerate(elements)}
    idx = np.array(elements)
    meet = np.vectorize(pos.__getitem__, otypes=[np.intp])(L.meet[np.ix_(idx, idx)])
    join = np.vectorize(pos.__getitem__, otypes=[np.intp])(L.join[np.ix_(idx, idx)])
    leq = L.leq[np.ix_(idx, idx)]
    bot = int(np.flatnonzero(leq.all(axis=1))[0])
    top = int(np.flatnonzero(leq.all(axis=0))[0])
    return FiniteLattice(leq, meet, join, names=names, bottom=bot, top=top)


def is_distributive(L):
    """``(True, None)`` or ``(False, (a, b, c))`` with the lexicographically
    least triple where ``a ^ (b v c) != (a ^ b) v (a ^ c)``."""
    meet, join = L.meet, L.join
    for a in range(L.size):
        lhs = meet[a][join]
        rhs = join[meet[a][:, None], meet[a][None, :]]
        bad = lhs != rhs
        if bad.any():
            b, c = np.argwhere(bad)[0]
            return False, (a, int(b), int(c))
    return True, None


def find_m3_or_n5(L):
    """Search for a 5-element sublattice isomorphic to M3 or N5.

    Returns ``("M3" | "N5", (o, x, y, z, i))`` or ``None``. Independent of
    :func:`is_distributive`.
    """
    leq, meet, join = L.leq, L.meet, L.join
    n = L.size
    for o, i in itertools.product(range(n), repeat=2):
        if o == i or not leq[o, i]:
            continue
        mid = [x for x in range(n) if x not in (o, i) and leq[o, x] and leq[x, i]]
        for x, y, z in itertools.permutations(mid, 3):
            trio = (x, y, z)
            # diamond: pairwise meets o and joins i
            if x < y < z and all(meet[u, v] == o and join[u, v] == i
                                 for u, v in itertools.combinations(trio, 2)):
                return "M3", (o, x, y, z, i)
            # pentagon: x < y, z incomparable to both, x v z = i, y ^ z = o
            if (leq[x, y] and x != y and not leq[z, y] and not leq[y, z]
                    and not leq[z, x] and not leq[x, z]
                    and join[x, z] == i and join[y, z] == i
                    and meet[x, z] == o and meet[y, z] == o):
                return "N5", (o, x, y, z, i)
    return None


def adjoin_bounds(L, bottom_name="0", top_name="1"):
    """Add a new strict bottom (index ``n``) and strict top (index ``n + 1``)."""
    n = L.size
    leq = np.zeros((n + 2, n + 2), dtype=bool)
    leq[:n, :n] = L.leq
    leq[n, :] = True
    leq[:, n + 1] = True
    meet = np.empty((n + 2, n + 2), dtype=np.intp)
    join = np.empty((n + 2, n + 2), dtype=np.intp)
    meet[:n, :n] = L.meet
    join[:n, :n] = L.join
    idx = np.arange(n + 2)
    meet[n, :] = n
    meet[:, n] = n
    meet[n + 1, :] = idx
    meet[:, n + 1] = idx
    join[n + 1, :] = n + 1
    join[:, n + 1] = n + 1
    join[n, :] = idx
    join[:, n] = idx
    meet[n, n + 1] = meet[n + 1, n] = n
    join[n, n + 1] = join[n + 1, n] = n + 1
    names = {k: v for k, v in L.names.items() if k not in (bottom_name, top_name)}
    names[bottom_name] = n
    names[top_name] = n + 1
    return FiniteLattice(leq, meet, join, names=names, bottom=n, top=n + 1)


# ---------------------------------------------------------------------------
# homomorphisms


class LatticeHom:
    """A verified lattice homomorphism ``source -> target``."""

    def __init__(self, source, target, mapping, bounded=False):
        self.source = source
        self.target = target
        self.map = _frozen(mapping, np.intp)
        self.bounded = bounded

    def __call__(self, x):
        return int(self.map[self.source.index(x)])

    def __repr__(self):
        return f"LatticeHom({self.source.size} -> {self.target.size})"

    def __eq__(self, other):
        return (isinstance(other, LatticeHom) and self.source is other.source
                and self.target is other.target
                and np.array_equal(self.map, other.map))

    def __hash__(self):
        return hash(self.map.tobytes())

    def then(self, g):
        """``g o self``."""
        return compose(g, self)

    def is_surjective(self):
        return len(np.unique(self.map)) == self.target.size

    def is_injective(self):
        return len(np.unique(self.map)) == self.source.size


def hom_violation(mapping, source, target, bounded=False):
    """First failing ``((a, b), law)`` for a candidate map, or ``None``."""
    f = np.asarray(mapping, dtype=np.intp)
    if f.shape != (source.size,):
        return (None, "totality")
    if ((f < 0) | (f >= target.size)).any():
        return (None, "range")
    bad = f[source.meet] != target.meet[f[:, None], f[None, :]]
    if bad.any():
        a, b = np.argwhere(bad)[0]
        return ((int(a), int(b)), "meet")
    bad = f[source.join] != target.join[f[:, None], f[None, :]]
    if bad.any():
        a, b = np.argwhere(bad)[0]
        return ((int(a), int(b)), "join")
    if bounded:
        if f[source.bottom] != target.bottom:
            return ((source.bottom,), "bottom")
        if f[source.top] != target.top:
            return ((source.top,), "top")
    return None


def check_hom(mapping, source, target, bounded=False):
    """Verify ``mapping`` (sequence or dict on indices) as a lattice hom."""
    if isinstance(mapping, dict):
        mapping = [mapping[i] for i in range(source.size)]
    v = hom_violation(mapping, source, target, bounded)
    if v is not None:
        witness, law = v
        raise NotAHom(f"map does not preserve {law} at {witness}", witness=witness, law=law)
    return LatticeHom(source, target, mapping, bounded=bounded)


def compose(g, f):
    """``g o f`` for verified homs."""
    if f.target is not g.source and f.target.size != g.source.size:
        raise ValueError("homs are not composable")
    return LatticeHom(f.source, g.target, g.map[f.map], bounded=f.bounded and g.bounded)


def identity_hom(L):
    return LatticeHom(L, L, np.arange(L.size), bounded=True)


def all_homs(source, target, bounded=False):
    """Every lattice homomorphism ``source -> target`` (brute force)."""
    out = []
    for f in itertools.product(range(target.size), repeat=source.size):
        if hom_violation(f, source, target, bounded) is None:
            out.append(LatticeHom(source, target, f, bounded=bounded))
    return out


# ---------------------------------------------------------------------------
# isomorphism


def _invariants(L):
    h = L.heights()
    up = L.leq.sum(axis=1)
    down = L.leq.sum(axis=0)
    ncov_up = np.zeros(L.size, int)
    ncov_down = np.zeros(L.size, int)
    for a, b in L.covers():
        ncov_up[a] += 1
        ncov_down[b] += 1
    return [(int(h[i]), int(up[i]), int(down[i]), int(ncov_up[i]), int(ncov_down[i]))
            for i in range(L.size)]


def canonical_form(L):
    """A hashable canonical form of the order: equal iff isomorphic.

    Brute force over permutations within invariant classes; meant for the
    small lattices produced by the enumerators.
    """
    inv = _invariants(L)
    classes = {}
    for i, key in enumerate(inv):
        classes.setdefault(key, []).append(i)
    keys = sorted(classes)
    best = None
    for perms in itertools.product(*(itertools.permutations(classes[k]) for k in keys)):
        order = [i for p in perms for i in p]
        code = L.leq[np.ix_(order, order)].tobytes()
        if best is None or code < best:
            best = code
    return (L.size, tuple(keys), tuple(len(classes[k]) for k in keys), best)


def find_isomorphism(A, B):
    """An order isomorphism ``A -> B`` as an index array, or ``None``."""
    if A.size != B.size:
        return None
    ia, ib = _invariants(A), _invariants(B)
    if sorted(ia) != sorted(ib):
        return None
    cand = [[j for j in range(B.size) if ib[j] == ia[i]] for i in range(A.size)]
    f = [-1] * A.size
    used = set()

    def extend(i):
        if i == A.size:
            return True
        for j in cand[i]:
            if j in used:
                continue
            if all(A.leq[i, k] == B.leq[j, f[k]] and A.leq[k, i] == B.leq[f[k], j]
                   for k in range(i)):
                f[i] = j
                used.add(j)
                if extend(i + 1):
                    return True
                used.discard(j)
        return False

    return np.array(f) if extend(0) else None


# ---------------------------------------------------------------------------
# enumeration of small lattices


def _grow_posets(k, downset_limit=None):
    """All posets on ``0..k-1`` (as leq matrices) up to isomorphism, built by
    adding maximal elements along a linear extension."""
    level = {canonical_poset(np.ones((0, 0), bool)): np.ones((0, 0), bool)}
    for m in range(k):
        nxt = {}
        for P in level.values():
            for D in downsets(P):
                Q = np.zeros((m + 1, m + 1), dtype=bool)
                Q[:m, :m] = P
                Q[m, m] = True
                for d in D:
                    Q[d, m] = True
                if downset_limit is not None and count_downsets(Q) > downset_limit:
                    continue
                nxt.setdefault(canonical_poset(Q), Q)
        level = nxt
    return list(level.values())


def canonical_poset(P):
    n = P.shape[0]
    if n == 0:
        return (0, b"")
    up = P.sum(axis=1)
    down = P.sum(axis=0)
    key = sorted(range(n), key=lambda i: (up[i], down[i]))
    groups = [list(g) for _, g in itertools.groupby(key, key=lambda i: (up[i], down[i]))]
    best = None
    for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
        order = [i for p in perms for i in p]
        code = P[np.ix_(order, order)].tobytes()
        if best is None or code < best:
            best = code
    return (n, best)


def downsets(P):
    """All down-sets of a finite poset, as sorted tuples."""
    n = P.shape[0]
    # process in a linear extension so every lower element is decided first
    order = sorted(range(n), key=lambda i: P[:, i].sum())
    perm = np.array(order, dtype=int)
    Q = P[np.ix_(perm, perm)] if n else P
    res = []

    def rec2(i, chosen):
        if i == n:
            res.append(tuple(sorted(int(perm[c]) for c in chosen)))
            return
        rec2(i + 1, chosen)
        if all(c in chosen for c in range(i) if Q[c, i]):
            rec2(i + 1, chosen | {i})

    rec2(0, frozenset())
    return res


def count_downsets(P):
    return len(downsets(P))


def downset_lattice(P):
    """The distributive lattice of down-sets of a poset, ordered by inclusion."""
    ds = sorted(downsets(P), key=lambda d: (len(d), d))
    sets = [frozenset(d) for d in ds]
    n = len(sets)
    leq = np.array([[a <= b for b in sets] for a in sets], dtype=bool)
    pos = {s: i for i, s in enumerate(sets)}
    meet = np.array([[pos[a & b] for b in sets] for a in sets], dtype=np.intp)
    join = np.array([[pos[a | b] for b in sets] for a in sets], dtype=np.intp)
    return FiniteLattice(leq, meet, join, bottom=0, top=n - 1)


def distributive_lattices(max_size):
    """All distributive lattices with at most ``max_size`` elements, one per
    isomorphism type, via down-set lattices of posets."""
    out = []
    k = 0
    while True:
        posets = _grow_posets(k, downset_limit=max_size)
        if not posets:
            break
        out.extend(downset_lattice(P) for P in posets)
        k += 1
        if k + 1 > max_size:
            break
    return sorted(out, key=lambda L: L.size)


def all_lattices(max_size):
    """All lattices with at most ``max_size`` elements up to isomorphism
    (bounded posets on at most ``max_size - 2`` middle elements)."""
    out = [chain(1)]
    if max_size >= 2:
        out.append(chain(2))
    seen = set()
    for k in range(0, max_size - 1):
        for P in _grow_posets(k):
            n = k + 2
            leq = np.zeros((n, n), dtype=bool)
            leq[0, :] = True
            leq[:, n - 1] = True
            leq[1:n - 1, 1:n - 1] = P
            try:
                L = FiniteLattice.from_leq(leq)
            except NotALattice:
                continue
            key = canonical_form(L)
            if key in seen:
                continue
            seen.add(key)
            if n > 2:
                out.append(L)
    return sorted(out, key=lambda L: L.size)


# ---------------------------------------------------------------------------
# text format and DOT


def parse_lattice(text):
    """Parse the line-oriented lattice format.

    ``lattice <n>`` then any of ``cover a b``, ``leq a b``, ``name label i``;
    ``#`` starts a comment. Labels may be used in place of indices once named.
    """
    size = None
    covers, leqs, names = [], [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        try:
            if kw == "lattice":
                size = int(parts[1])
            elif kw in ("cover", "leq"):
                a, b = (names[p] if p in names else int(p) for p in parts[1:3])
                (covers if kw == "cover" else leqs).append((a, b))
            elif kw == "name":
                names[parts[1]] = int(parts[2])
            else:
                raise ParseError(f"line {lineno}: unknown keyword {kw!r}")
        except (IndexError, ValueError, KeyError) as exc:
            raise ParseError(f"line {lineno}: cannot parse {raw!r}") from exc
    if size is None:
        raise ParseError("missing 'lattice <size>' header")
    return size, covers, leqs, names


def read_lattice(text):
    size, covers, leqs, names = parse_lattice(text)
    return validate_lattice(size, covers=covers, leq=leqs, names=names)


def load_lattice(path):
    return read_lattice(Path(path).read_text())


def format_lattice(L, comment=None):
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"lattice {L.size}")
    for label, i in sorted(L.names.items(), key=lambda kv: (kv[1], kv[0])):
        lines.append(f"name {label} {i}")
    # labels shadow indices when read back, so named elements are written by label
    label = {i: name for name, i in L.names.items()}
    for a, b in L.covers():
        lines.append(f"cover {label.get(a, a)} {label.get(b, b)}")
    return "\n".join(lines) + "\n"


def to_dot(L, title="L"):
    """Hasse diagram in DOT: one node per element, one edge per cover, nodes
    ranked by height."""
    h = L.heights()
    lines = [f'digraph "{title}" {{', "  rankdir=BT;", "  node [shape=circle];"]
    for i in range(L.size):
        lines.append(f'  n{i} [label="{L.label(i)}"];')
    for level in sorted(set(h.tolist())):
        members = " ".join(f"n{i};" for i in range(L.size) if h[i] == level)
        lines.append(f"  {{ rank=same; {members} }}")
    for a, b in L.covers():
        lines.append(f"  n{a} -> n{b} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_dot(text):
    """Read back the cover relation written by :func:`to_dot`."""
    import re

    nodes = {}
    for m in re.finditer(r'n(\d+) \[label="([^"]*)"\]', text):
        nodes[int(m.group(1))] = m.group(2)
    edges = [(int(a), int(b)) for a, b in re.findall(r"n(\d+) -> n(\d+)", text)]
    names = {lab: i for i, lab in nodes.items() if lab != str(i)}
    return validate_lattice(len(nodes), covers=edges, names=names)
