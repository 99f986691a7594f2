"""Set mappings on pairs, free triples, and supports of congruences of
bounded free products of chains."""

from __future__ import annotations

import functools
import itertools
from pathlib import Path

from .congruence import image_congruence
from .errors import ParseError
from .free import free_over_chains, inclusion_hom, retraction_hom


class SetMapping:
    """``F``: unordered pairs of ``range(n)`` -> subsets of ``range(n)``.

    Pairs not given explicitly map to the empty set.
    """

    def __init__(self, n, values=None):
        self.n = int(n)
        self.values = {}
        for pair, val in (values or {}).items():
            i, j = pair
            if i == j:
                raise ValueError(f"pair ({i}, {j}) is not a 2-element set")
            for x in (i, j, *val):
                if not 0 <= x < self.n:
                    raise ValueError(f"{x} is outside the ground set of size {self.n}")
            self.values[frozenset((i, j))] = frozenset(val)

    def __call__(self, i, j):
        return self.values.get(frozenset((i, j)), frozenset())

    @classmethod
    def from_function(cls, n, f):
        return cls(n, {(i, j): f(i, j) for i, j in itertools.combinations(range(n), 2)})

    def format(self):
        lines = [f"ground {self.n}"]
        for i, j in itertools.combinations(range(self.n), 2):
            v = sorted(self(i, j))
            lines.append(f"pair {i} {j} : " + " ".join(map(str, v)))
        return "\n".join(lines) + "\n"


def parse_set_mapping(text):
    n = None
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "ground":
            if len(rest) != 1 or not rest[0].isdigit():
                raise ParseError(f"line {lineno}: expected 'ground <n>'")
            n = int(rest[0])
        elif head == "pair":
            if n is None:
                raise ParseError(f"line {lineno}: 'pair' before 'ground'")
            left, sep, right = line[4:].partition(":")
            try:
                i, j = (int(x) for x in left.split())
                val = [int(x) for x in right.split()]
            except ValueError:
                raise ParseError(f"line {lineno}: expected 'pair <i> <j> : <k ...>'") from None
            if not sep:
                raise ParseError(f"line {lineno}: missing ':'")
            values[(i, j)] = val
        else:
            raise ParseError(f"line {lineno}: unknown directive {head!r}")
    if n is None:
        raise ParseError("missing 'ground' line")
    try:
        return SetMapping(n, values)
    except ValueError as e:
        raise ParseError(str(e)) from None


def load_set_mapping(path):
    return parse_set_mapping(Path(path).read_text())


def is_free_triple(m, i, j, k):
    return (len({i, j, k}) == 3 and i not in m(j, k) and j not in m(i, k)
            and k not in m(i, j))


def find_free_triple(m):
    """Lexicographically least ``(i, j, k)``, ``i < j < k``, free for ``m``.

    Freeness is symmetric in the three elements, so increasing triples cover
    every case.
    """
    for t in itertools.combinations(range(m.n), 3):
        if is_free_triple(m, *t):
            return t
    return None


def all_free_triples(m):
    return [t for t in itertools.permutations(range(m.n), 3) if is_free_triple(m, *t)]


@functools.lru_cache(maxsize=32)
def _restricted(V, P, max_elements):
    kw = {} if max_elements is None else {"max_elements": max_elements}
    return free_over_chains(V, P, **kw)


def support_of(theta, BX, max_elements=None):
    """Inclusion-minimal set ``Y`` of chain labels such that ``theta`` lies
    in the image of ``Con(B(Y)) -> Con(B(X))``.

    ``theta`` is in that image iff it equals its round trip through the
    retraction onto ``B(Y)`` and back. Subsets are tried by size, then
    lexicographically; the first hit is inclusion-minimal.
    """
    V, P = BX.variety, BX.presentation
    for r in range(len(P.labels) + 1):
        for Y in itertools.combinations(P.labels, r):
            BY = BX if len(Y) == len(P.labels) else _restricted(V, P.restrict(Y), max_elements)
            down = image_congruence(retraction_hom(BX, BY), theta)
            back = image_congruence(inclusion_hom(BY, BX), down)
            if back == theta:
                return Y
    raise RuntimeError("theta is not in the image of Con(B(X)) itself")
