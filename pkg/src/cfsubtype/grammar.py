"""Translation of types into simple grammars in Greibach normal form.

Nonterminals are small integers; ``BOTTOM`` is the distinguished symbol
without productions.  A word is a tuple of nonterminals and the empty tuple
is the empty word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional

from .lts import (
    A_DOM, A_END, A_LIN, A_RCD, A_RNG, A_UNIT, A_VRT, Action, a_base,
    a_choice, a_choice_field, a_cont, a_payload, a_rcd_field, a_vrt_field,
)
from .types import (
    Arrow, Base, Choice, End, Msg, Multiplicity, Rec, Record, Seq, Skip, Type,
    Unit, Var, Variant, unfold,
)

Word = tuple  # tuple[int, ...]
BOTTOM = 0
EPSILON: Word = ()


def unr(t: Type) -> Type:
    """Unravel ``t`` until a type constructor is at the head."""
    while True:
        if isinstance(t, Rec):
            t = unfold(t)
        elif isinstance(t, Seq):
            h = t.head
            if isinstance(h, Skip):
                t = t.tail
            elif isinstance(h, End):
                return h
            elif isinstance(h, Choice):
                return Choice(h.view, tuple((l, Seq(s, t.tail)) for l, s in h.branches))
            elif isinstance(h, Rec):
                t = Seq(unfold(h), t.tail)
            elif isinstance(h, Seq):
                t = Seq(h.head, Seq(h.tail, t.tail))
            else:
                return t
        else:
            return t


@dataclass(frozen=True)
class Grammar:
    """A simple grammar: at most one production per (nonterminal, action)."""
    prods: Mapping[int, Mapping[Action, Word]]
    names: Mapping[int, str] = field(default_factory=dict)

    @property
    def nonterminals(self) -> set[int]:
        syms = {BOTTOM} | set(self.prods)
        for ps in self.prods.values():
            for rhs in ps.values():
                syms.update(rhs)
        return syms

    def name(self, x: int) -> str:
        if x == BOTTOM:
            return "⊥"
        return self.names.get(x, f"N{x}")

    def show_word(self, w: Word) -> str:
        return " ".join(self.name(x) for x in w) if w else "ε"

    def transitions(self, w: Word) -> dict[Action, Word]:
        return grammar_transitions(w, self)

    @cached_property
    def norms(self) -> dict[int, int]:
        """Norm of every normed nonterminal; unnormed ones are absent."""
        return _compute_norms(self.prods)

    @cached_property
    def _min_step(self) -> dict[int, tuple[Action, Word]]:
        norms = self.norms
        best: dict[int, tuple[Action, Word]] = {}
        for x, ps in self.prods.items():
            if x not in norms:
                continue
            for a in sorted(ps):
                rhs = ps[a]
                if all(y in norms for y in rhs) and 1 + sum(norms[y] for y in rhs) == norms[x]:
                    best[x] = (a, rhs)
                    break
        return best

    def norm(self, x: int) -> Optional[int]:
        return self.norms.get(x)

    def word_norm(self, w: Word) -> Optional[int]:
        total = 0
        for x in w:
            n = self.norms.get(x)
            if n is None:
                return None
            total += n
        return total

    def minimal_path(self, w: Word, limit: Optional[int] = None) -> Optional[list[Action]]:
        """Shortest action sequence taking ``w`` to the empty word.

        None when ``w`` is unnormed or its norm exceeds ``limit``.
        """
        n = self.word_norm(w)
        if n is None or (limit is not None and n > limit):
            return None
        path: list[Action] = []
        stack = list(reversed(w))
        while stack:
            x = stack.pop()
            a, rhs = self._min_step[x]
            path.append(a)
            stack.extend(reversed(rhs))
        return path

    def run(self, w: Word, path) -> Optional[Word]:
        """The word reached from ``w`` along ``path``, if every step exists."""
        for a in path:
            if not w:
                return None
            rhs = self.prods.get(w[0], {}).get(a)
            if rhs is None:
                return None
            w = rhs + w[1:]
        return w

    def dump(self) -> str:
        lines = []
        for x in sorted(self.prods):
            for a in sorted(self.prods[x]):
                rhs = self.prods[x][a]
                lines.append(" ".join([self.name(x), "->", str(a), *(self.name(y) for y in rhs)]))
        return "\n".join(lines)


def grammar_transitions(w: Word, g: Grammar) -> dict[Action, Word]:
    if not w:
        return {}
    tail = w[1:]
    return {a: rhs + tail for a, rhs in g.prods.get(w[0], {}).items()}


def _compute_norms(prods: Mapping[int, Mapping[Action, Word]]) -> dict[int, int]:
    norms: dict[int, int] = {}
    changed = True
    while changed:
        changed = False
        for x, ps in prods.items():
            best = None
            for rhs in ps.values():
                if all(y in norms for y in rhs):
                    cand = 1 + sum(norms[y] for y in rhs)
                    if best is None or cand < best:
                        best = cand
            if best is not None and best < norms.get(x, best + 1):
                norms[x] = best
                changed = True
    return norms


def norm(x: int, g: Grammar) -> Optional[int]:
    return g.norm(x)


def prune(g: Grammar) -> Grammar:
    """Cut every right-hand side just after its first unnormed symbol."""
    norms = g.norms
    prods = {}
    for x, ps in g.prods.items():
        new = {}
        for a, rhs in ps.items():
            for i, y in enumerate(rhs):
                if y not in norms:
                    rhs = rhs[: i + 1]
                    break
            new[a] = rhs
        prods[x] = new
    return Grammar(prods, dict(g.names))


class GrammarBuilder:
    """Accumulates productions over successive :meth:`grm` calls.

    Constructor subterms are memoised structurally, so repeated subterms share
    one nonterminal.  Each closed ``rec`` subterm gets one nonterminal whose
    productions are those of its unravelling.
    """

    PREFIXES = "XYZWVUTS"

    def __init__(self) -> None:
        self.prods: dict[int, dict[Action, Word]] = {}
        self.names: dict[int, str] = {}
        self._memo: dict[Type, int] = {}
        self._next = 1
        self._calls = -1
        self._local = 0

    def _fresh(self) -> int:
        x = self._next
        self._next += 1
        prefix = self.PREFIXES[self._calls % len(self.PREFIXES)] if self._calls >= 0 else "N"
        if self._calls >= len(self.PREFIXES):
            prefix += str(self._calls // len(self.PREFIXES))
        self.names[x] = f"{prefix}{self._local}"
        self._local += 1
        return x

    def grm(self, t: Type) -> Word:
        """Translate ``t``, extending this builder's productions."""
        self._calls += 1
        self._local = 0
        return self.word(t)

    def grammar(self) -> Grammar:
        return Grammar({x: dict(ps) for x, ps in self.prods.items()}, dict(self.names))

    def word(self, t: Type) -> Word:
        if isinstance(t, Skip):
            return EPSILON
        if isinstance(t, Seq):
            return self.word(t.head) + self.word(t.tail)
        if isinstance(t, Var):
            raise ValueError(f"free reference {t.name} reached during translation")
        known = self._memo.get(t)
        if known is not None:
            return (known,)
        y = self._fresh()
        self._memo[t] = y
        self.prods[y] = self._productions(unr(t) if isinstance(t, Rec) else t)
        return (y,)

    def _productions(self, t: Type) -> dict[Action, Word]:
        if isinstance(t, Unit):
            return {A_UNIT: EPSILON}
        if isinstance(t, Base):
            return {a_base(t.name): EPSILON}
        if isinstance(t, Arrow):
            out = {A_DOM: self.word(t.dom), A_RNG: self.word(t.rng)}
            if t.mult is Multiplicity.LIN:
                out[A_LIN] = EPSILON
            return out
        if isinstance(t, (Record, Variant)):
            is_rcd = isinstance(t, Record)
            out = {A_RCD if is_rcd else A_VRT: (BOTTOM,)}
            for label, f in t.fields:
                out[a_rcd_field(label) if is_rcd else a_vrt_field(label)] = self.word(f)
            return out
        if isinstance(t, End):
            return {A_END: (BOTTOM,)}
        if isinstance(t, Msg):
            return {a_payload(t.pol): self.word(t.payload) + (BOTTOM,), a_cont(t.pol): EPSILON}
        if isinstance(t, Choice):
            out = {a_choice(t.view): (BOTTOM,)}
            for label, s in t.branches:
                out[a_choice_field(t.view, label)] = self.word(s)
            return out
        if isinstance(t, Seq) and isinstance(t.head, Msg):
            # Only reached for an unravelled rec: the tail rides on the continuation.
            m = t.head
            return {a_payload(m.pol): self.word(m.payload) + (BOTTOM,), a_cont(m.pol): self.word(t.tail)}
        raise ValueError(f"cannot translate {t!r}; is the type well formed?")


def grm(t: Type, builder: Optional[GrammarBuilder] = None) -> tuple[Word, GrammarBuilder]:
    builder = builder if builder is not None else GrammarBuilder()
    return builder.grm(t), builder


def translate(*ts: Type) -> tuple[list[Word], Grammar]:
    """Words for each of ``ts`` over one shared grammar."""
    builder = GrammarBuilder()
    words = [builder.grm(t) for t in ts]
    return words, builder.grammar()
