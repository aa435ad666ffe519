"""Expansion-tree search for XYZW-similarity of grammar words.

A node is a frozenset of ordered word pairs.  The search is breadth first;
each dequeued node is expanded and the child is simplified with the
Reflexivity, Preorder, BPA1 and BPA2 rules before being enqueued.
"""

from __future__ import annotations

import enum
import time
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .grammar import Grammar, Word, prune, translate
from .lts import BISIMILARITY, SUBTYPING, Relation
from .types import Type, require_well_formed

Pair = tuple  # tuple[Word, Word]
Node = frozenset  # frozenset[Pair]

# Bounds that keep a single simplification step finite.  They only limit how
# many siblings are tried, never what counts as success.
MAX_SIBLINGS = 64
MAX_PATH = 4096


class Verdict(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @property
    def exit_code(self) -> int:
        return {Verdict.TRUE: 0, Verdict.FALSE: 1, Verdict.UNKNOWN: 2}[self]


@dataclass(frozen=True)
class Budget:
    max_visits: int = 10**6
    timeout: Optional[float] = 30.0


@dataclass(frozen=True)
class Outcome:
    verdict: Verdict
    visits: int
    seconds: float


# Expansion ---------------------------------------------------------------

def expand(n: Iterable[Pair], g: Grammar, relation: Relation = SUBTYPING) -> Optional[Node]:
    """The XYZW-expansion of ``n``, or None when some pair cannot be matched.

    Pairs contributed by Z/W actions are stored inverted, as (right, left).
    """
    child = set()
    prods = g.prods
    for x, y in n:
        tx = _trans(x, prods)
        ty = _trans(y, prods)
        for a, x1 in tx.items():
            c = relation(a)
            if c.in_x or c.in_z:
                y1 = ty.get(a)
                if y1 is None:
                    return None
                if c.in_x:
                    child.add((x1, y1))
                if c.in_z:
                    child.add((y1, x1))
        for a, y1 in ty.items():
            c = relation(a)
            if c.in_y or c.in_w:
                x1 = tx.get(a)
                if x1 is None:
                    return None
                if c.in_y:
                    child.add((x1, y1))
                if c.in_w:
                    child.add((y1, x1))
    return frozenset(child)


def _trans(w: Word, prods) -> dict:
    if not w:
        return {}
    ps = prods.get(w[0])
    if not ps:
        return {}
    tail = w[1:]
    if not tail:
        return ps
    return {a: rhs + tail for a, rhs in ps.items()}


def is_leaf(n: Node, g: Grammar, relation: Relation = SUBTYPING) -> bool:
    return expand(n, g, relation) is None


# Simplification rules ----------------------------------------------------

def simplify_reflexivity(n: Iterable[Pair]) -> Node:
    return frozenset(p for p in n if p[0] != p[1])


class Ancestors:
    """Ancestor pairs of a node, with reachability in their preorder."""

    __slots__ = ("pairs", "_succ")

    def __init__(self, pairs: Iterable[Pair] = ()):
        self.pairs = frozenset(pairs)
        self._succ: Optional[dict] = None

    def union(self, more: Iterable[Pair]) -> Ancestors:
        return Ancestors(self.pairs | frozenset(more))

    def _graph(self) -> dict:
        if self._succ is None:
            succ: dict = {}
            for a, b in self.pairs:
                succ.setdefault(a, set()).add(b)
            self._succ = succ
        return self._succ

    def implies(self, x: Word, y: Word) -> bool:
        """Whether (x, y) is in the least preorder containing the pairs."""
        if x == y:
            return True
        succ = self._graph()
        if x not in succ:
            return False
        seen = {x}
        stack = [x]
        while stack:
            w = stack.pop()
            for v in succ.get(w, ()):
                if v == y:
                    return True
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return False

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def _as_ancestors(a) -> Ancestors:
    return a if isinstance(a, Ancestors) else Ancestors(a)


def simplify_preorder(n: Iterable[Pair], ancestors) -> Node:
    anc = _as_ancestors(ancestors)
    return frozenset(p for p in n if not anc.implies(p[0], p[1]))


def simplify_bpa1(n: Node, ancestors) -> set[Node]:
    """Siblings replacing (X0 x, Y0 y) by (x, x') and (y, y') for an ancestor
    (X0 x', Y0 y') with the same head symbols."""
    anc = _as_ancestors(ancestors)
    by_heads: dict = {}
    for a, b in anc.pairs:
        if a and b:
            by_heads.setdefault((a[0], b[0]), []).append((a, b))
    out = set()
    for p in n:
        x, y = p
        if not x or not y:
            continue
        for ax, ay in sorted(by_heads.get((x[0], y[0]), ())):
            out.add((n - {p}) | {(x[1:], ax[1:]), (y[1:], ay[1:])})
    return out


def simplify_bpa2(n: Node, g: Grammar) -> set[Node]:
    """Siblings cancelling normed head symbols along a minimal path."""
    out = set()
    for p in n:
        x, y = p
        if not x or not y:
            continue
        x0, y0 = x[0], y[0]
        nx, ny = g.norm(x0), g.norm(y0)
        if nx is None or ny is None:
            continue
        if nx <= ny:
            path = g.minimal_path((x0,), MAX_PATH)
            z = None if path is None else g.run((y0,), path)
            if z is None:
                continue
            new = {((x0,) + z, (y0,)), (x[1:], z + y[1:])}
        else:
            path = g.minimal_path((y0,), MAX_PATH)
            z = None if path is None else g.run((x0,), path)
            if z is None:
                continue
            new = {((x0,), (y0,) + z), (z + x[1:], y[1:])}
        out.add((n - {p}) | new)
    return out


def _reduce(n: Node, anc: Ancestors) -> Node:
    return simplify_preorder(simplify_reflexivity(n), anc)


def simplify(n: Node, anc: Ancestors, g: Grammar) -> list[Node]:
    """Close ``n`` under the simplification rules; the node and its siblings."""
    first = _reduce(n, anc)
    found = {first}
    frontier = [first]
    while frontier and len(found) < MAX_SIBLINGS:
        nxt = []
        for m in frontier:
            if not m:
                continue
            sibs = simplify_bpa1(m, anc) | simplify_bpa2(m, g)
            for s in sorted(sibs, key=_node_key):
                s = _reduce(s, anc)
                if s not in found:
                    found.add(s)
                    nxt.append(s)
                    if len(found) >= MAX_SIBLINGS:
                        break
        frontier = nxt
    return sorted(found, key=_node_key)


def _node_key(n: Node):
    return (len(n), sorted(n))


# Search ------------------------------------------------------------------

def explore(x: Word, y: Word, g: Grammar, budget: Budget = Budget(),
            relation: Relation = SUBTYPING) -> Outcome:
    start = time.monotonic()
    deadline = None if budget.timeout is None else start + budget.timeout
    queue = deque([(frozenset({(tuple(x), tuple(y))}), Ancestors())])
    seen: dict[Node, list[frozenset]] = {}
    visits = 0

    def done(v: Verdict) -> Outcome:
        return Outcome(v, visits, time.monotonic() - start)

    while queue:
        if visits >= budget.max_visits:
            return done(Verdict.UNKNOWN)
        if deadline is not None and time.monotonic() >= deadline:
            return done(Verdict.UNKNOWN)
        n, anc = queue.popleft()
        visits += 1
        if not n:
            return done(Verdict.TRUE)
        child = expand(n, g, relation)
        if child is None:
            continue
        child_anc = anc.union(n)
        for m in simplify(child, child_anc, g):
            if not m:
                queue.append((m, child_anc))
                continue
            previous = seen.setdefault(m, [])
            if any(child_anc.pairs <= p for p in previous):
                continue
            previous.append(child_anc.pairs)
            queue.append((m, child_anc))
    return done(Verdict.FALSE)


def sub_g(x: Word, y: Word, g: Grammar, budget: Budget = Budget(),
          relation: Relation = SUBTYPING) -> Verdict:
    return explore(x, y, g, budget, relation).verdict


def check(t: Type, u: Type, budget: Budget = Budget(), relation: Relation = SUBTYPING) -> Outcome:
    """Translate both types to one grammar, prune it and search."""
    require_well_formed(t)
    require_well_formed(u)
    (x, y), g = translate(t, u)
    return explore(x, y, prune(g), budget, relation)


def sub_t(t: Type, u: Type, budget: Budget = Budget()) -> Verdict:
    return check(t, u, budget, SUBTYPING).verdict


def equiv_t(t: Type, u: Type, budget: Budget = Budget()) -> Verdict:
    return check(t, u, budget, BISIMILARITY).verdict
