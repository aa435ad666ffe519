"""Bounded (stratified) XYZW-similarity by exhaustive clause evaluation.

Used as an independent check of the expansion-tree search at small depths.
Depth 0 relates everything; depth n+1 requires the four simulation clauses
with derivatives related at depth n.
"""

from __future__ import annotations

from typing import Callable, Hashable, Mapping

from .grammar import Grammar, Word, grammar_transitions
from .lts import SUBTYPING, Relation, transitions
from .types import Type

DEFAULT_DEPTH = 6


def _bounded(left: Hashable, right: Hashable, depth: int,
             step: Callable[[Hashable], Mapping], relation: Relation) -> bool:
    memo: dict = {}

    def sim(t, u, n: int) -> bool:
        if n == 0:
            return True
        key = (t, u, n)
        hit = memo.get(key)
        if hit is not None:
            return hit
        tt, tu = step(t), step(u)
        ok = True
        for a, t1 in tt.items():
            c = relation(a)
            if not (c.in_x or c.in_z):
                continue
            u1 = tu.get(a)
            if u1 is None or (c.in_x and not sim(t1, u1, n - 1)) or (c.in_z and not sim(u1, t1, n - 1)):
                ok = False
                break
        if ok:
            for a, u1 in tu.items():
                c = relation(a)
                if not (c.in_y or c.in_w):
                    continue
                t1 = tt.get(a)
                if t1 is None or (c.in_y and not sim(t1, u1, n - 1)) or (c.in_w and not sim(u1, t1, n - 1)):
                    ok = False
                    break
        memo[key] = ok
        return ok

    return sim(left, right, depth)


def bounded_sim_types(t: Type, u: Type, n: int = DEFAULT_DEPTH,
                      relation: Relation = SUBTYPING) -> bool:
    return _bounded(t, u, n, transitions, relation)


def bounded_sim_words(x: Word, y: Word, n: int, g: Grammar,
                      relation: Relation = SUBTYPING) -> bool:
    return _bounded(tuple(x), tuple(y), n, lambda w: grammar_transitions(w, g), relation)


def refutation_depth(t: Type, u: Type, max_depth: int = DEFAULT_DEPTH,
                     relation: Relation = SUBTYPING):
    """Smallest depth at which ``t`` and ``u`` are not related, or None."""
    for n in range(1, max_depth + 1):
        if not bounded_sim_types(t, u, n, relation):
            return n
    return None
