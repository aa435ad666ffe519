"""Type AST for functional and higher-order context-free session types.

Types are immutable dataclasses.  Label maps (records, variants, choices) are
stored as tuples of ``(label, type)`` pairs sorted by label, so structural
equality and hashing are canonical.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union


class Multiplicity(enum.Enum):
    LIN = "lin"
    UN = "un"

    def leq(self, other: Multiplicity) -> bool:
        """Multiplicity preorder: un <= lin, and each is below itself."""
        return self is other or (self is Multiplicity.UN and other is Multiplicity.LIN)


class Polarity(enum.Enum):
    IN = "?"
    OUT = "!"


class View(enum.Enum):
    INTERNAL = "+"
    EXTERNAL = "&"


Fields = tuple  # tuple[tuple[str, "Type"], ...]


def _canonical_fields(fields) -> tuple:
    items = list(fields.items()) if isinstance(fields, Mapping) else list(fields)
    labels = [label for label, _ in items]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate labels in {labels}")
    return tuple(sorted(items, key=lambda kv: kv[0]))


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Base:
    """A base type such as ``int``; behaves like Unit with its own action."""
    name: str


@dataclass(frozen=True)
class Arrow:
    mult: Multiplicity
    dom: Type
    rng: Type


@dataclass(frozen=True)
class Record:
    fields: Fields

    def __post_init__(self):
        object.__setattr__(self, "fields", _canonical_fields(self.fields))


@dataclass(frozen=True)
class Variant:
    fields: Fields

    def __post_init__(self):
        object.__setattr__(self, "fields", _canonical_fields(self.fields))


@dataclass(frozen=True)
class Msg:
    pol: Polarity
    payload: Type


@dataclass(frozen=True)
class Choice:
    view: View
    branches: Fields

    def __post_init__(self):
        branches = _canonical_fields(self.branches)
        if not branches:
            raise ValueError("choice types need at least one branch")
        object.__setattr__(self, "branches", branches)


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class End:
    pass


@dataclass(frozen=True)
class Seq:
    head: Type
    tail: Type


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Rec:
    var: str
    body: Type


Type = Union[Unit, Base, Arrow, Record, Variant, Msg, Choice, Skip, End, Seq, Var, Rec]

SESSION_CONSTRUCTORS = (Msg, Choice, Skip, End, Seq)
FUNCTIONAL_CONSTRUCTORS = (Unit, Base, Arrow, Record, Variant)


def children(t: Type) -> Iterator[Type]:
    if isinstance(t, Arrow):
        yield t.dom
        yield t.rng
    elif isinstance(t, (Record, Variant)):
        for _, f in t.fields:
            yield f
    elif isinstance(t, Choice):
        for _, b in t.branches:
            yield b
    elif isinstance(t, Msg):
        yield t.payload
    elif isinstance(t, Seq):
        yield t.head
        yield t.tail
    elif isinstance(t, Rec):
        yield t.body


def subterms(t: Type) -> Iterator[Type]:
    """All subterms of ``t`` in pre-order, including ``t`` itself."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        stack.extend(reversed(list(children(s))))


def ast_size(t: Type) -> int:
    return sum(1 for _ in subterms(t))


def binders(t: Type) -> list[str]:
    return [s.var for s in subterms(t) if isinstance(s, Rec)]


def free_refs(t: Type) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Rec):
        return free_refs(t.body) - {t.var}
    out: frozenset[str] = frozenset()
    for c in children(t):
        out |= free_refs(c)
    return out


def _fresh(base: str, avoid: set[str]) -> str:
    for i in itertools.count(1):
        name = f"{base}{i}"
        if name not in avoid:
            return name
    raise AssertionError("unreachable")


def _map_fields(fields, f):
    return tuple((label, f(ty)) for label, ty in fields)


def rebuild(t: Type, f) -> Type:
    """Apply ``f`` to every immediate child of ``t``."""
    if isinstance(t, Arrow):
        return Arrow(t.mult, f(t.dom), f(t.rng))
    if isinstance(t, Record):
        return Record(_map_fields(t.fields, f))
    if isinstance(t, Variant):
        return Variant(_map_fields(t.fields, f))
    if isinstance(t, Choice):
        return Choice(t.view, _map_fields(t.branches, f))
    if isinstance(t, Msg):
        return Msg(t.pol, f(t.payload))
    if isinstance(t, Seq):
        return Seq(f(t.head), f(t.tail))
    if isinstance(t, Rec):
        return Rec(t.var, f(t.body))
    return t


def substitute(body: Type, x: str, replacement: Type) -> Type:
    """Capture-avoiding substitution of ``replacement`` for free ``x`` in ``body``."""
    repl_free = free_refs(replacement)

    def go(t: Type) -> Type:
        if isinstance(t, Var):
            return replacement if t.name == x else t
        if isinstance(t, Rec):
            if t.var == x or x not in free_refs(t.body):
                return t
            if t.var in repl_free:
                avoid = repl_free | free_refs(t.body) | {x}
                new = _fresh(t.var, set(avoid) | set(binders(t.body)))
                return Rec(new, go(substitute(t.body, t.var, Var(new))))
            return Rec(t.var, go(t.body))
        return rebuild(t, go)

    return go(body)


def unfold(t: Rec) -> Type:
    return substitute(t.body, t.var, t)


def freshen(t: Type, avoid: Iterable[str] = ()) -> Type:
    """Alpha-rename so that every binder in ``t`` is distinct."""
    used = set(avoid) | free_refs(t)

    def go(s: Type) -> Type:
        if isinstance(s, Rec):
            name = s.var if s.var not in used else _fresh(s.var, used | set(binders(s)))
            used.add(name)
            body = s.body if name == s.var else substitute(s.body, s.var, Var(name))
            return Rec(name, go(body))
        return rebuild(s, go)

    return go(t)


# Well-formedness ---------------------------------------------------------

def is_terminated(t: Type) -> bool:
    if isinstance(t, Skip):
        return True
    if isinstance(t, Seq):
        return is_terminated(t.head) and is_terminated(t.tail)
    if isinstance(t, Rec):
        return is_terminated(t.body)
    return False


def is_contractive(t: Type, x: str) -> bool:
    if isinstance(t, (Unit, Base, Arrow, Record, Variant, End, Msg, Choice, Skip)):
        return True
    if isinstance(t, Seq):
        if is_terminated(t.head):
            return is_contractive(t.tail, x)
        return is_contractive(t.head, x)
    if isinstance(t, Var):
        return t.name != x
    if isinstance(t, Rec):
        return is_contractive(t.body, x)
    raise TypeError(f"not a type: {t!r}")


class Sort(enum.Enum):
    FUNCTIONAL = "functional"
    SESSION = "session"


def head_sort(t: Type, env: Mapping[str, Sort | None]) -> Sort | None:
    """Syntactic sort of ``t``; None when it cannot be determined."""
    if isinstance(t, SESSION_CONSTRUCTORS):
        return Sort.SESSION
    if isinstance(t, FUNCTIONAL_CONSTRUCTORS):
        return Sort.FUNCTIONAL
    if isinstance(t, Var):
        return env.get(t.name)
    if isinstance(t, Rec):
        return head_sort(t.body, {**env, t.var: None})
    raise TypeError(f"not a type: {t!r}")


@dataclass(frozen=True)
class IllFormed:
    """Why a type failed type formation.  Falsy, so it reads like ``False``."""
    rule: str
    subterm: Type
    message: str

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"{self.rule}: {self.message}"


class IllFormedType(ValueError):
    def __init__(self, diagnostic: IllFormed):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


def well_formed(delta: Iterable[str], t: Type) -> Union[bool, IllFormed]:
    """Type formation ``delta |- t``.

    Returns True, or an :class:`IllFormed` naming the first violated premise.
    Besides closedness and contractivity this checks that session positions
    (sequence components, choice branches) hold session types and that no
    binder shadows an enclosing one.
    """
    result = _formation({name: None for name in delta}, t, session_position=False)
    return True if result is None else result


def _formation(env: dict, t: Type, session_position: bool) -> IllFormed | None:
    if session_position and head_sort(t, env) is Sort.FUNCTIONAL:
        return IllFormed("Sort", t, "functional type in a session position")
    if isinstance(t, Var):
        if t.name not in env:
            return IllFormed("TF-Var", t, f"free reference {t.name}")
        return None
    if isinstance(t, Rec):
        if t.var in env:
            return IllFormed("TF-Rec", t, f"binder {t.var} is not distinct")
        if is_terminated(t.body):
            return IllFormed("TF-Rec", t, f"body of rec {t.var} is terminated")
        if not is_contractive(t.body, t.var):
            return IllFormed("TF-Rec", t, f"body of rec {t.var} is not contractive")
        sort = head_sort(t.body, {**env, t.var: None})
        return _formation({**env, t.var: sort}, t.body, session_position)
    # IllFormed is falsy, so results are compared against None.
    if isinstance(t, Seq):
        parts = [(t.head, True), (t.tail, True)]
    elif isinstance(t, Choice):
        parts = [(b, True) for _, b in t.branches]
    else:
        parts = [(c, False) for c in children(t)]
    for c, session in parts:
        bad = _formation(env, c, session)
        if bad is not None:
            return bad
    return None


def require_well_formed(t: Type) -> Type:
    result = well_formed((), t)
    if result is not True:
        raise IllFormedType(result)
    return t


# Convenience constructors used by tests and examples.

def record(**fields: Type) -> Record:
    return Record(fields)


def variant(**fields: Type) -> Variant:
    return Variant(fields)


def internal(**branches: Type) -> Choice:
    return Choice(View.INTERNAL, branches)


def external(**branches: Type) -> Choice:
    return Choice(View.EXTERNAL, branches)


def out(t: Type) -> Msg:
    return Msg(Polarity.OUT, t)


def inp(t: Type) -> Msg:
    return Msg(Polarity.IN, t)


def seq(*ts: Type) -> Type:
    """Right-nested sequential composition of one or more session types."""
    if not ts:
        return Skip()
    result = ts[-1]
    for s in reversed(ts[:-1]):
        result = Seq(s, result)
    return result
