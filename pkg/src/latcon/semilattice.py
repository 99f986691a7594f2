"""Finite join-semilattices with zero and uniform refinement properties.

The URP/WURP at ``e`` quantify over all families ``(a_i, b_i)`` with
``a_i v b_i = e``. For a finite semilattice it is enough to decide them on
the universal family ``P_e`` listing every such pair once: any family maps
into ``P_e`` by sending an index to its pair, and entries between two indices
carrying the same pair can be taken to be zero (see :func:`lift_wurp`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import NotALattice, ResourceCap

DEFAULT_NODE_BUDGET = 10_000_000


class FiniteJoinSemilattice:
    def __init__(self, join, zero, labels=None):
        self.join = np.asarray(join, dtype=np.intp)
        self.size = self.join.shape[0]
        self.zero = int(zero)
        idx = np.arange(self.size)
        self.leq = self.join == idx[None, :]
        self.labels = labels
        self._meet = None

    @classmethod
    def from_lattice(cls, L):
        """Join reduct of a lattice (zero = bottom)."""
        labels = [L.label(i) for i in range(L.size)]
        return cls(L.join, L.bottom, labels=labels)

    def check(self):
        j, n = self.join, self.size
        idx = np.arange(n)
        if not (j == j.T).all():
            raise NotALattice("join is not commutative")
        if not (j[idx, idx] == idx).all():
            raise NotALattice("join is not idempotent")
        if not (j[self.zero] == idx).all():
            raise NotALattice("zero is not neutral")
        for a in range(n):
            if not (j[j[a][:, None], idx[None, :]] == j[a][j]).all():
                raise NotALattice(f"join is not associative at {a}")
        return self

    @property
    def meet(self):
        """Meets exist because a finite join-semilattice with zero is a
        lattice: ``a ^ b`` is the join of all common lower bounds."""
        if self._meet is None:
            n = self.size
            m = np.empty((n, n), dtype=np.intp)
            for a in range(n):
                for b in range(n):
                    acc = self.zero
                    for c in np.flatnonzero(self.leq[:, a] & self.leq[:, b]):
                        acc = self.join[acc, c]
                    m[a, b] = acc
            self._meet = m
        return self._meet

    def below(self, x):
        return np.flatnonzero(self.leq[:, x])

    def label(self, i):
        return self.labels[i] if self.labels else str(i)

    def height(self):
        """Number of elements below each element (a linear-extension key)."""
        return self.leq.sum(axis=0)


def as_semilattice(S):
    """Accept a FiniteJoinSemilattice, a FiniteLattice or a ConLattice."""
    from .congruence import ConLattice
    from .lattice import FiniteLattice

    if isinstance(S, FiniteJoinSemilattice):
        return S
    if isinstance(S, ConLattice):
        return FiniteJoinSemilattice(S.lattice.join, S.zero,
                                     labels=[str(c) for c in S.elements])
    if isinstance(S, FiniteLattice):
        return FiniteJoinSemilattice.from_lattice(S)
    raise TypeError(f"cannot view {type(S).__name__} as a join-semilattice")


def is_distributive_semilattice(S):
    """``(True, None)`` or ``(False, (c, a, b))`` where ``c <= a v b`` has no
    decomposition ``c = a' v b'`` with ``a' <= a`` and ``b' <= b``."""
    S = as_semilattice(S)
    for a in range(S.size):
        A = S.below(a)
        for b in range(S.size):
            B = S.below(b)
            reach = np.zeros(S.size, dtype=bool)
            reach[np.unique(S.join[np.ix_(A, B)])] = True
            need = S.leq[:, S.join[a, b]]
            missing = need & ~reach
            if missing.any():
                return False, (int(np.flatnonzero(missing)[0]), a, b)
    return True, None


def universal_family(S, e):
    """All ordered pairs ``(a, b)`` with ``a v b = e``, lexicographically."""
    S = as_semilattice(S)
    return [(a, b) for a in range(S.size) for b in range(S.size) if S.join[a, b] == e]


# ---------------------------------------------------------------------------
# results


@dataclass
class WitnessMatrix:
    """Entries ``c[(i, j)]`` for the pair list ``pairs``."""

    pairs: list
    c: dict
    a_star: list | None = None
    b_star: list | None = None

    def entry(self, i, j):
        return self.c[(i, j)]

    def format(self, S=None):
        lab = (lambda x: S.label(x)) if S is not None else str
        head = ["i\\j"] + [str(j) for j in range(len(self.pairs))]
        rows = ["  ".join(head)]
        for i in range(len(self.pairs)):
            rows.append("  ".join([str(i)] + [lab(self.c[(i, j)]) for j in range(len(self.pairs))]))
        legend = [f"{i}: a={lab(a)} b={lab(b)}" for i, (a, b) in enumerate(self.pairs)]
        if self.a_star is not None:
            legend = [f"{i}: a={lab(a)} b={lab(b)} a*={lab(self.a_star[i])} b*={lab(self.b_star[i])}"
                      for i, (a, b) in enumerate(self.pairs)]
        return "\n".join(legend + rows)


@dataclass
class RefinementResult:
    holds: bool
    e: int
    pairs: list
    witness: WitnessMatrix | None = None
    certificate: list = field(default_factory=list)
    nodes: int = 0

    def __bool__(self):
        return self.holds


# ---------------------------------------------------------------------------
# witness verification (independent of the search)


def wurp_violations(S, pairs, c, e):
    """All violated WURP conditions for a candidate matrix ``c``."""
    S = as_semilattice(S)
    out = []
    n = len(pairs)
    for i, j in itertools.product(range(n), repeat=2):
        (ai, bi), (aj, bj) = pairs[i], pairs[j]
        x = c[(i, j)]
        if not (S.leq[x, ai] and S.leq[x, bj]):
            out.append(("i'", i, j))
        if S.join[S.join[x, aj], bi] != e:
            out.append(("ii'", i, j))
    for i, j, k in itertools.product(range(n), repeat=3):
        if not S.leq[c[(i, k)], S.join[c[(i, j)], c[(j, k)]]]:
            out.append(("iii'", i, j, k))
    return out


def urp_violations(S, pairs, a_star, b_star, c, e):
    S = as_semilattice(S)
    out = []
    n = len(pairs)
    for i in range(n):
        ai, bi = pairs[i]
        if not (S.leq[a_star[i], ai] and S.leq[b_star[i], bi]
                and S.join[a_star[i], b_star[i]] == e):
            out.append(("i", i))
    for i, j in itertools.product(range(n), repeat=2):
        x = c[(i, j)]
        if not (S.leq[x, a_star[i]] and S.leq[x, b_star[j]]):
            out.append(("ii", i, j))
        if not S.leq[a_star[i], S.join[a_star[j], x]]:
            out.append(("ii", i, j))
    for i, j, k in itertools.product(range(n), repeat=3):
        if not S.leq[c[(i, k)], S.join[c[(i, j)], c[(j, k)]]]:
            out.append(("iii", i, j, k))
    return out


def canonical_witness(S, pairs):
    """``c_ij = a_i ^ b_j``, the witness that works in distributive lattices."""
    S = as_semilattice(S)
    return {(i, j): int(S.meet[pairs[i][0], pairs[j][1]])
            for i in range(len(pairs)) for j in range(len(pairs))}


def lift_wurp(pairs, family, witness):
    """Transport a universal-family witness to an arbitrary family.

    ``family`` is a list of pairs drawn from ``pairs``; entries between two
    indices carrying the same pair are zero (passed as ``None`` -> caller's
    zero).
    """
    pos = {p: i for i, p in enumerate(pairs)}
    out = {}
    for i, j in itertools.product(range(len(family)), repeat=2):
        pi, pj = pos[family[i]], pos[family[j]]
        out[(i, j)] = None if pi == pj else witness[(pi, pj)]
    return out


# ---------------------------------------------------------------------------
# search


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise ResourceCap(f"search exceeded {self.limit} nodes",
                              resource="search nodes", limit=self.limit, partial=self.used)


def _order_down(S, elems):
    h = S.height()
    return sorted(elems, key=lambda x: (-h[x], x))


def _solve_matrix(S, pairs, cand, pair_ok, triangles, budget, skip=frozenset()):
    """Backtracking over entries ``(i, j)``, ``i != j``.

    ``cand[(i, j)]``: candidate values (best first). ``triangles``: enabled
    (i, j, k) constraints ``c_ik <= c_ij v c_jk``. Returns a dict or None.
    """
    n = len(pairs)
    zero = S.zero
    vars_ = [(i, j) for i in range(n) for j in range(n) if i != j]
    pos = {v: t for t, v in enumerate(vars_)}
    checks = [[] for _ in vars_]
    for (i, j, k) in triangles:
        if (i, j, k) in skip:
            continue
        t = max(pos[(i, k)], pos[(i, j)], pos[(j, k)])
        checks[t].append((i, j, k))
    c = {(i, i): zero for i in range(n)}
    leq, join = S.leq, S.join
    choice = [0] * len(vars_)
    t = 0
    while 0 <= t < len(vars_):
        v = vars_[t]
        opts = cand[v]
        placed = False
        while choice[t] < len(opts):
            x = opts[choice[t]]
            choice[t] += 1
            budget.tick()
            c[v] = x
            if all(leq[c[(i, k)], join[c[(i, j)], c[(j, k)]]] for (i, j, k) in checks[t]):
                placed = True
                break
        if placed:
            t += 1
            if t < len(vars_):
                choice[t] = 0
        else:
            c.pop(v, None)
            t -= 1
    return c if t == len(vars_) else None


def _all_triangles(n):
    return [(i, j, k) for i in range(n) for j in range(n) for k in range(n)
            if len({i, j, k}) == 3]


def check_WURP_at(S, e, family=None, node_budget=DEFAULT_NODE_BUDGET, certificate=True):
    """Decide the weak uniform refinement property at ``e``.

    On success the result carries a :class:`WitnessMatrix`; on failure a
    minimal set of violated constraints: ``("pair", i, j)`` means no entry
    satisfies (i') and (ii') for that pair, ``("tri", i, j, k)`` is a
    triangle inequality.
    """
    S = as_semilattice(S)
    pairs = list(family) if family is not None else universal_family(S, e)
    n = len(pairs)
    budget = _Budget(node_budget)
    cand = {}
    for i, j in itertools.product(range(n), repeat=2):
        if i == j:
            continue
        (ai, bi), (aj, bj) = pairs[i], pairs[j]
        top = S.meet[ai, bj]
        opts = [x for x in _order_down(S, S.below(top))
                if S.join[S.join[x, aj], bi] == e]
        if not opts:
            return RefinementResult(False, e, pairs, certificate=[("pair", i, j)],
                                    nodes=budget.used)
        cand[(i, j)] = opts
    tris = _all_triangles(n)
    sol = _solve_matrix(S, pairs, cand, None, tris, budget)
    if sol is not None:
        return RefinementResult(True, e, pairs, witness=WitnessMatrix(pairs, sol),
                                nodes=budget.used)
    cert = []
    if certificate:
        cert = _minimise(tris, lambda keep: _solve_matrix(
            S, pairs, cand, None, keep, _Budget(node_budget)) is None)
        cert = [("tri",) + t for t in cert]
    return RefinementResult(False, e, pairs, certificate=cert, nodes=budget.used)


def _minimise(constraints, unsat):
    """Deletion debugging: drop constraints one at a time while the rest stays
    unsatisfiable."""
    keep = list(constraints)
    i = 0
    while i < len(keep):
        trial = keep[:i] + keep[i + 1:]
        if unsat(trial):
            keep = trial
        else:
            i += 1
    return keep


def check_URP_at(S, e, family=None, node_budget=DEFAULT_NODE_BUDGET, certificate=True):
    """Decide the uniform refinement property at ``e``.

    Searches ``(a*_i, b*_i)`` first, maximal choices first, with arc
    consistency on the pairwise condition that some ``c_ij`` satisfies (ii);
    then the entries ``c_ij`` as in :func:`check_WURP_at`.
    """
    S = as_semilattice(S)
    pairs = list(family) if family is not None else universal_family(S, e)
    n = len(pairs)
    budget = _Budget(node_budget)
    leq, join, meet = S.leq, S.join, S.meet
    h = S.height()
    doms = []
    for a, b in pairs:
        opts = [(x, y) for x in S.below(a) for y in S.below(b) if join[x, y] == e]
        opts.sort(key=lambda p: (-(h[p[0]] + h[p[1]]), p))
        doms.append(opts)

    def compatible(p, q):
        # some c <= p.a* ^ q.b* with p.a* <= q.a* v c; c = p.a* ^ q.b* is best
        return bool(leq[p[0], join[q[0], meet[p[0], q[1]]]])

    def ac3(doms, disabled=frozenset()):
        doms = [list(d) for d in doms]
        queue = [(i, j) for i in range(n) for j in range(n) if i != j]
        while queue:
            i, j = queue.pop()
            if (i, j) in disabled:
                continue
            # revise i against j (constraint i->j) and j against i
            new_i = [p for p in doms[i] if any(compatible(p, q) for q in doms[j])]
            new_j = [q for q in doms[j] if any(compatible(p, q) for p in doms[i])]
            changed = []
            if len(new_i) != len(doms[i]):
                doms[i] = new_i
                changed.append(i)
            if len(new_j) != len(doms[j]):
                doms[j] = new_j
                changed.append(j)
            for x in changed:
                if not doms[x]:
                    return None, (i, j)
                queue.extend((x, y) for y in range(n) if y != x)
                queue.extend((y, x) for y in range(n) if y != x)
        return doms, None

    doms, wipe = ac3(doms)
    if doms is None:
        cert = []
        if certificate:
            i, j = wipe
            pair_cons = [(i, j)] + [(x, y) for x in range(n) for y in range(n)
                                    if x != y and (x, y) != (i, j)]
            cert = _minimise(pair_cons, lambda keep: ac3(
                [d for d in _initial_doms(S, pairs, e)],
                disabled=frozenset(pair_cons) - frozenset(keep))[0] is None)
            cert = [("pair", i, j) for i, j in cert]
        return RefinementResult(False, e, pairs, certificate=cert, nodes=budget.used)

    tris = _all_triangles(n)
    assign = [None] * n

    def c_candidates(astar, bstar):
        cand = {}
        for i, j in itertools.product(range(n), repeat=2):
            if i == j:
                continue
            top = meet[astar[i], bstar[j]]
            opts = [x for x in _order_down(S, S.below(top))
                    if leq[astar[i], join[astar[j], x]]]
            if not opts:
                return None
            cand[(i, j)] = opts
        return cand

    def rec(i):
        if i == n:
            astar = [p[0] for p in assign]
            bstar = [p[1] for p in assign]
            cand = c_candidates(astar, bstar)
            if cand is None:
                return None
            sol = _solve_matrix(S, pairs, cand, None, tris, budget)
            return None if sol is None else (astar, bstar, sol)
        for p in doms[i]:
            budget.tick()
            if all(compatible(p, assign[k]) and compatible(assign[k], p) for k in range(i)):
                assign[i] = p
                r = rec(i + 1)
                if r is not None:
                    return r
        assign[i] = None
        return None

    r = rec(0)
    if r is not None:
        astar, bstar, sol = r
        return RefinementResult(True, e, pairs,
                                witness=WitnessMatrix(pairs, sol, astar, bstar),
                                nodes=budget.used)
    return RefinementResult(False, e, pairs, certificate=[("search-exhausted",)],
                            nodes=budget.used)


def _initial_doms(S, pairs, e):
    h = S.height()
    out = []
    for a, b in pairs:
        opts = [(x, y) for x in S.below(a) for y in S.below(b) if S.join[x, y] == e]
        opts.sort(key=lambda p: (-(h[p[0]] + h[p[1]]), p))
        out.append(opts)
    return out


def holds_everywhere(S, check, **kw):
    """Run ``check(S, e)`` at every element; return the list of failures."""
    S = as_semilattice(S)
    return [e for e in range(S.size) if not check(S, e, **kw)]
