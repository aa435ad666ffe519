"""Labelled transition system over types and the X/Y/Z/W action classes."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .types import (
    Arrow, Base, Choice, End, Msg, Multiplicity, Polarity, Rec, Record, Seq,
    Skip, Type, Unit, Var, Variant, View, unfold,
)


class Kind(enum.IntEnum):
    UNIT = 0
    BASE = 1
    DOM = 2
    RNG = 3
    LIN = 4
    END = 5
    RCD_DEFAULT = 6
    VRT_DEFAULT = 7
    RCD_FIELD = 8
    VRT_FIELD = 9
    MSG_PAYLOAD = 10
    MSG_CONT = 11
    CHOICE_DEFAULT = 12
    CHOICE_FIELD = 13


@dataclass(frozen=True, order=True)
class Action:
    """A transition label.

    ``arg`` carries the base-type name, the polarity or view symbol, and
    ``label`` the field or branch label where the kind needs one.
    """
    kind: Kind
    arg: str = ""
    label: str = ""

    def __str__(self) -> str:
        k = self.kind
        if k is Kind.UNIT:
            return "unit"
        if k is Kind.BASE:
            return self.arg
        if k is Kind.DOM:
            return "->d"
        if k is Kind.RNG:
            return "->r"
        if k is Kind.LIN:
            return "->lin"
        if k is Kind.END:
            return "end"
        if k is Kind.RCD_DEFAULT:
            return "{}"
        if k is Kind.VRT_DEFAULT:
            return "<>"
        if k is Kind.RCD_FIELD:
            return "{}" + self.label
        if k is Kind.VRT_FIELD:
            return "<>" + self.label
        if k is Kind.MSG_PAYLOAD:
            return self.arg + "p"
        if k is Kind.MSG_CONT:
            return self.arg + "c"
        if k is Kind.CHOICE_DEFAULT:
            return self.arg
        return self.arg + self.label

    @property
    def polarity(self) -> Optional[Polarity]:
        if self.kind in (Kind.MSG_PAYLOAD, Kind.MSG_CONT):
            return Polarity(self.arg)
        return None

    @property
    def view(self) -> Optional[View]:
        if self.kind in (Kind.CHOICE_DEFAULT, Kind.CHOICE_FIELD):
            return View(self.arg)
        return None


A_UNIT = Action(Kind.UNIT)
A_DOM = Action(Kind.DOM)
A_RNG = Action(Kind.RNG)
A_LIN = Action(Kind.LIN)
A_END = Action(Kind.END)
A_RCD = Action(Kind.RCD_DEFAULT)
A_VRT = Action(Kind.VRT_DEFAULT)


def a_base(name: str) -> Action:
    return Action(Kind.BASE, name)


def a_rcd_field(label: str) -> Action:
    return Action(Kind.RCD_FIELD, "", label)


def a_vrt_field(label: str) -> Action:
    return Action(Kind.VRT_FIELD, "", label)


def a_payload(pol: Polarity) -> Action:
    return Action(Kind.MSG_PAYLOAD, pol.value)


def a_cont(pol: Polarity) -> Action:
    return Action(Kind.MSG_CONT, pol.value)


def a_choice(view: View) -> Action:
    return Action(Kind.CHOICE_DEFAULT, view.value)


def a_choice_field(view: View, label: str) -> Action:
    return Action(Kind.CHOICE_FIELD, view.value, label)


@dataclass(frozen=True)
class ClassSet:
    in_x: bool
    in_y: bool
    in_z: bool
    in_w: bool


_XY = ClassSet(True, True, False, False)
_X = ClassSet(True, False, False, False)
_Y = ClassSet(False, True, False, False)
_ZW = ClassSet(False, False, True, True)


def classify(a: Action) -> ClassSet:
    """Action classes for subtyping.

    Contravariant positions (output payloads, arrow domains) go to Z and W;
    width-subtyping labels go to X (variants, external choice) or Y
    (records, internal choice); the linear-arrow label goes to X; everything
    else to both X and Y.
    """
    k = a.kind
    if k is Kind.DOM:
        return _ZW
    if k is Kind.MSG_PAYLOAD and a.arg == Polarity.OUT.value:
        return _ZW
    if k is Kind.LIN or k is Kind.VRT_FIELD:
        return _X
    if k is Kind.RCD_FIELD:
        return _Y
    if k is Kind.CHOICE_FIELD:
        return _X if a.arg == View.EXTERNAL.value else _Y
    return _XY


def classify_bisimulation(a: Action) -> ClassSet:
    """Every action in X and Y, none in Z or W: bisimilarity."""
    return _XY


@dataclass(frozen=True)
class Relation:
    """A choice of X/Y/Z/W label sets, given as a classification function."""
    name: str
    classify: object

    def __call__(self, a: Action) -> ClassSet:
        return self.classify(a)


SUBTYPING = Relation("subtyping", classify)
BISIMILARITY = Relation("bisimilarity", classify_bisimulation)


@lru_cache(maxsize=1 << 16)
def transitions(t: Type) -> dict[Action, Type]:
    """All derivatives of ``t``; at most one per action.

    Requires a contractive type, otherwise head normalisation loops.
    The returned dict must not be mutated (it is cached).
    """
    while True:
        if isinstance(t, Rec):
            t = unfold(t)
            continue
        if isinstance(t, Seq):
            h = t.head
            if isinstance(h, Skip):
                t = t.tail
                continue
            if isinstance(h, Seq):
                t = Seq(h.head, Seq(h.tail, t.tail))
                continue
            if isinstance(h, Rec):
                t = Seq(unfold(h), t.tail)
                continue
            if isinstance(h, End):
                return {A_END: Skip()}
            if isinstance(h, Msg):
                return {a_payload(h.pol): h.payload, a_cont(h.pol): t.tail}
            if isinstance(h, Choice):
                out = {a_choice(h.view): Skip()}
                for label, s in h.branches:
                    out[a_choice_field(h.view, label)] = Seq(s, t.tail)
                return out
            return {}
        break
    if isinstance(t, Unit):
        return {A_UNIT: Skip()}
    if isinstance(t, Base):
        return {a_base(t.name): Skip()}
    if isinstance(t, Arrow):
        out = {A_DOM: t.dom, A_RNG: t.rng}
        if t.mult is Multiplicity.LIN:
            out[A_LIN] = Skip()
        return out
    if isinstance(t, Record):
        out = {A_RCD: Skip()}
        for label, f in t.fields:
            out[a_rcd_field(label)] = f
        return out
    if isinstance(t, Variant):
        out = {A_VRT: Skip()}
        for label, f in t.fields:
            out[a_vrt_field(label)] = f
        return out
    if isinstance(t, Msg):
        return {a_payload(t.pol): t.payload, a_cont(t.pol): Skip()}
    if isinstance(t, Choice):
        out = {a_choice(t.view): Skip()}
        for label, s in t.branches:
            out[a_choice_field(t.view, label)] = s
        return out
    if isinstance(t, End):
        return {A_END: Skip()}
    # Skip and free references have no transitions.
    assert isinstance(t, (Skip, Var)), t
    return {}
