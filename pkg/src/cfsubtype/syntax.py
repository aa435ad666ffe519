"""Concrete syntax for types.

::

    type   ::= seq (("->" | "-o") type)?          -> unrestricted, -o linear
    seq    ::= prefix (";" seq)?                  ; binds tighter than arrows
    prefix ::= "rec" ident "." type | atom
    atom   ::= "unit" | "skip" | "end" | base | ident | "(" type ")"
             | "{" fields? "}" | "<" fields? ">"
             | ("?" | "!") atom | ("+" | "&") "{" fields "}"
    fields ::= label ":" type ("," label ":" type)*

Binders are renamed apart while parsing so that every ``rec`` in one parse
introduces a distinct name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .types import (
    Arrow, Base, Choice, End, Msg, Multiplicity, Polarity, Rec, Record, Seq,
    Skip, Sort, Type, Unit, Var, Variant, View, head_sort,
)

BASE_TYPES = frozenset({"int", "bool", "char", "string", "float"})
KEYWORDS = frozenset({"unit", "skip", "end", "rec"})

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->|-o)
  | (?P<word>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[(){}<>,:;.?!+&])
""", re.VERBOSE)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def _tokenize(text: str) -> list[Token]:
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            line, col = _line_col(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.used = {t.text for t in self.tokens if t.kind == "word"}
        self.bound: set[str] = set()
        self.positions: dict[int, int] = {}

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        line, col = _line_col(self.text, tok.offset)
        return ParseError(message, line, col)

    def accept(self, text: str) -> bool:
        if self.tok.kind != "eof" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.tok
        if not self.accept(text):
            found = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return tok

    def mark(self, t: Type, tok: Token) -> Type:
        self.positions[id(t)] = tok.offset
        return t

    # grammar
    def parse(self) -> Type:
        t = self.type({})
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return t

    def type(self, env: dict) -> Type:
        start = self.tok
        left = self.seq(env)
        if self.tok.kind == "arrow":
            mult = Multiplicity.UN if self.tok.text == "->" else Multiplicity.LIN
            self.i += 1
            right = self.type(env)
            return self.mark(Arrow(mult, left, right), start)
        return left

    def seq(self, env: dict) -> Type:
        start = self.tok
        head = self.prefix(env)
        if self.accept(";"):
            tail = self.seq(env)
            return self.mark(Seq(head, tail), start)
        return head

    def prefix(self, env: dict) -> Type:
        start = self.tok
        if self.accept("rec"):
            name_tok = self.tok
            if name_tok.kind != "word" or name_tok.text in KEYWORDS or name_tok.text in BASE_TYPES:
                raise self.error("expected a reference name after 'rec'")
            self.i += 1
            self.expect(".")
            name = name_tok.text
            if name in self.bound:
                k = 1
                while f"{name}{k}" in self.used:
                    k += 1
                fresh = f"{name}{k}"
            else:
                fresh = name
            self.used.add(fresh)
            self.bound.add(fresh)
            body = self.type({**env, name: fresh})
            return self.mark(Rec(fresh, body), start)
        return self.atom(env)

    def atom(self, env: dict) -> Type:
        tok = self.tok
        if tok.kind == "word":
            self.i += 1
            if tok.text == "unit":
                return self.mark(Unit(), tok)
            if tok.text == "skip":
                return self.mark(Skip(), tok)
            if tok.text == "end":
                return self.mark(End(), tok)
            if tok.text in BASE_TYPES:
                return self.mark(Base(tok.text), tok)
            if tok.text == "rec":
                raise self.error("'rec' needs parentheses here", tok)
            return self.mark(Var(env.get(tok.text, tok.text)), tok)
        if self.accept("("):
            t = self.type(env)
            self.expect(")")
            return t
        if self.accept("{"):
            fields = self.fields(env, "}")
            return self.mark(Record(fields), tok)
        if self.accept("<"):
            fields = self.fields(env, ">")
            return self.mark(Variant(fields), tok)
        if tok.text in ("?", "!"):
            self.i += 1
            pol = Polarity(tok.text)
            return self.mark(Msg(pol, self.atom(env)), tok)
        if tok.text in ("+", "&"):
            self.i += 1
            self.expect("{")
            fields = self.fields(env, "}")
            if not fields:
                raise self.error("a choice needs at least one branch", tok)
            return self.mark(Choice(View(tok.text), fields), tok)
        found = tok.text or "end of input"
        raise self.error(f"expected a type, found {found!r}")

    def fields(self, env: dict, close: str) -> list:
        out = []
        seen = set()
        if self.accept(close):
            return out
        while True:
            label_tok = self.tok
            if label_tok.kind != "word":
                raise self.error("expected a label")
            if label_tok.text in seen:
                raise self.error(f"duplicate label {label_tok.text!r}")
            seen.add(label_tok.text)
            self.i += 1
            self.expect(":")
            out.append((label_tok.text, self.type(env)))
            if self.accept(close):
                return out
            self.expect(",")

    # sorts
    def check_sorts(self, t: Type, env: dict, session: bool) -> None:
        if session and head_sort(t, env) is Sort.FUNCTIONAL:
            offset = self.positions.get(id(t), 0)
            line, col = _line_col(self.text, offset)
            raise ParseError("functional type in a session position", line, col)
        if isinstance(t, Rec):
            sort = head_sort(t.body, {**env, t.var: None})
            self.check_sorts(t.body, {**env, t.var: sort}, session)
        elif isinstance(t, Seq):
            self.check_sorts(t.head, env, True)
            self.check_sorts(t.tail, env, True)
        elif isinstance(t, Choice):
            for _, b in t.branches:
                self.check_sorts(b, env, True)
        elif isinstance(t, Arrow):
            self.check_sorts(t.dom, env, False)
            self.check_sorts(t.rng, env, False)
        elif isinstance(t, (Record, Variant)):
            for _, f in t.fields:
                self.check_sorts(f, env, False)
        elif isinstance(t, Msg):
            self.check_sorts(t.payload, env, False)


def parse_type(text: str) -> Type:
    """Parse one type; raises :class:`ParseError` with a line and column."""
    p = _Parser(text)
    t = p.parse()
    p.check_sorts(t, {}, False)
    return t


# Printing ----------------------------------------------------------------

_TYPE, _SEQ, _ATOM = 0, 1, 2


def print_type(t: Type) -> str:
    return _show(t, _TYPE)


def _paren(s: str, needed: bool) -> str:
    return f"({s})" if needed else s


def _show_fields(fields) -> str:
    return ", ".join(f"{label}: {_show(f, _TYPE)}" for label, f in fields)


def _show(t: Type, ctx: int) -> str:
    if isinstance(t, Unit):
        return "unit"
    if isinstance(t, Skip):
        return "skip"
    if isinstance(t, End):
        return "end"
    if isinstance(t, Base):
        return t.name
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Arrow):
        op = "->" if t.mult is Multiplicity.UN else "-o"
        return _paren(f"{_show(t.dom, _SEQ)} {op} {_show(t.rng, _TYPE)}", ctx > _TYPE)
    if isinstance(t, Rec):
        return _paren(f"rec {t.var} . {_show(t.body, _TYPE)}", ctx > _TYPE)
    if isinstance(t, Seq):
        return _paren(f"{_show(t.head, _ATOM)} ; {_show(t.tail, _SEQ)}", ctx > _SEQ)
    if isinstance(t, Msg):
        return t.pol.value + _show(t.payload, _ATOM)
    if isinstance(t, Record):
        return "{" + _show_fields(t.fields) + "}"
    if isinstance(t, Variant):
        return "<" + _show_fields(t.fields) + ">"
    if isinstance(t, Choice):
        return t.view.value + "{" + _show_fields(t.branches) + "}"
    raise TypeError(f"not a type: {t!r}")
