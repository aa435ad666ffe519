"""Random well-formed types and subtyping pairs.

Valid pairs are built by recursively picking one of the structural
properties of subtyping (width subtyping on records, variants and choices,
arrow variance, the monoid laws of sequential composition, recursion...).
Invalid pairs follow the same recursion with one invalid pair injected in
place of a valid one; results that still turn out to be related by the
bounded oracle are discarded and regenerated.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Iterator, Optional

from .oracle import DEFAULT_DEPTH, bounded_sim_types
from .types import (
    Arrow, Base, Choice, End, Msg, Multiplicity, Polarity, Rec, Record, Seq,
    Skip, Sort, Type, Unit, Var, Variant, View, ast_size, freshen, is_contractive,
    is_terminated, unfold, well_formed,
)

FUN, SES = Sort.FUNCTIONAL, Sort.SESSION
MULT_PAIRS = [(Multiplicity.UN, Multiplicity.UN), (Multiplicity.UN, Multiplicity.LIN),
              (Multiplicity.LIN, Multiplicity.LIN)]


@dataclass(frozen=True)
class GenConfig:
    size: int = 8
    seed: int = 0
    labels: tuple = ("A", "B", "C")
    bases: tuple = ("int", "bool")
    max_retries: int = 200
    discard_depth: int = DEFAULT_DEPTH

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("size must be non-negative")
        if not self.labels:
            raise ValueError("need at least one label")


class GenerationError(RuntimeError):
    pass


# Free references by variance ---------------------------------------------

def free_cov(t: Type) -> frozenset[str]:
    return _free_by_variance(t)[0]


def free_contrav(t: Type) -> frozenset[str]:
    return _free_by_variance(t)[1]


def _free_by_variance(t: Type) -> tuple[frozenset, frozenset]:
    if isinstance(t, Var):
        return frozenset([t.name]), frozenset()
    if isinstance(t, Arrow):
        dc, dn = _free_by_variance(t.dom)
        rc, rn = _free_by_variance(t.rng)
        return dn | rc, dc | rn
    if isinstance(t, (Record, Variant, Choice)):
        cov, con = frozenset(), frozenset()
        for _, f in (t.branches if isinstance(t, Choice) else t.fields):
            c, n = _free_by_variance(f)
            cov, con = cov | c, con | n
        return cov, con
    if isinstance(t, Msg):
        c, n = _free_by_variance(t.payload)
        return (c, n) if t.pol is Polarity.IN else (n, c)
    if isinstance(t, Seq):
        hc, hn = _free_by_variance(t.head)
        tc, tn = _free_by_variance(t.tail)
        return hc | tc, hn | tn
    if isinstance(t, Rec):
        c, n = _free_by_variance(t.body)
        return c - {t.var}, n - {t.var}
    return frozenset(), frozenset()


# Generator ---------------------------------------------------------------

@dataclass
class _Env:
    vars: tuple = ()  # (name, sort) pairs in scope

    def of(self, sort: Sort) -> list[str]:
        return [n for n, s in self.vars if sort is FUN or s is SES]

    def bind(self, name: str, sort: Sort) -> _Env:
        return _Env(self.vars + ((name, sort),))


class Generator:
    """A seeded stream of types and pairs.  Not thread-safe; use one per thread."""

    def __init__(self, cfg: GenConfig, rng: Optional[random.Random] = None):
        self.cfg = cfg
        self.rng = rng if rng is not None else random.Random(cfg.seed)
        self._names = 0

    # helpers
    def _fresh(self, sort: Sort) -> str:
        self._names += 1
        return f"{'s' if sort is SES else 't'}{self._names}"

    def _split(self, total: int, parts: int) -> list[int]:
        """Uniformly random composition of ``total`` into ``parts`` non-negative sizes."""
        if parts <= 0:
            return []
        cuts = sorted(self.rng.randint(0, total) for _ in range(parts - 1))
        bounds = [0, *cuts, total]
        return [bounds[i + 1] - bounds[i] for i in range(parts)]

    def _labels(self, lo: int = 1) -> list[str]:
        labels = list(self.cfg.labels)
        k = self.rng.randint(min(lo, len(labels)), len(labels))
        return sorted(self.rng.sample(labels, k))

    def _guard(self, body: Type, sort: Sort) -> Type:
        if sort is SES:
            return Seq(Msg(self.rng.choice(list(Polarity)), Unit()), body)
        return Arrow(Multiplicity.UN, Unit(), body)

    def _needs_guard(self, body: Type, x: str) -> bool:
        return is_terminated(body) or not is_contractive(body, x)

    # single types
    def type(self, size: int, sort: Sort = FUN, env: _Env = _Env()) -> Type:
        rng = self.rng
        if size <= 0:
            leaves: list[Type] = [Skip(), End()]
            if sort is FUN:
                leaves += [Unit(), *(Base(b) for b in self.cfg.bases)]
            leaves += [Var(n) for n in env.of(sort)]
            return rng.choice(leaves)
        kinds = ["msg", "choice", "seq", "rec"]
        if sort is FUN:
            kinds += ["arrow", "record", "variant", "frec"]
        kind = rng.choice(kinds)
        rest = size - 1
        if kind == "msg":
            return Msg(rng.choice(list(Polarity)), self.type(rest, FUN, env))
        if kind == "choice":
            labels = self._labels()
            sizes = self._split(rest, len(labels))
            view = rng.choice(list(View))
            return Choice(view, [(l, self.type(s, SES, env)) for l, s in zip(labels, sizes)])
        if kind == "seq":
            a, b = self._split(rest, 2)
            return Seq(self.type(a, SES, env), self.type(b, SES, env))
        if kind in ("rec", "frec"):
            s = SES if kind == "rec" else FUN
            x = self._fresh(s)
            if s is SES:
                body = self.type(rest, SES, env.bind(x, s))
            else:
                body = self._fun_constructor(rest, env.bind(x, s))
            if self._needs_guard(body, x):
                body = self._guard(body, s)
            return Rec(x, body)
        return self._fun_constructor(size, env, kind)

    def _fun_constructor(self, size: int, env: _Env, kind: Optional[str] = None) -> Type:
        rng = self.rng
        kind = kind or rng.choice(["arrow", "record", "variant"])
        rest = max(size - 1, 0)
        if kind == "arrow":
            a, b = self._split(rest, 2)
            return Arrow(rng.choice(list(Multiplicity)), self.type(a, FUN, env), self.type(b, FUN, env))
        labels = self._labels(lo=0)
        sizes = self._split(rest, len(labels))
        fields = [(l, self.type(s, FUN, env)) for l, s in zip(labels, sizes)]
        return Record(fields) if kind == "record" else Variant(fields)

    # pairs
    def pair(self, size: int, sort: Sort = FUN, env: _Env = _Env(), valid: bool = True) -> tuple[Type, Type]:
        if not valid:
            return self._invalid(size, sort, env)
        return self._valid(size, sort, env, inject=False)

    def _child(self, size: int, sort: Sort, env: _Env, invalid: bool) -> tuple[Type, Type]:
        return self._invalid(size, sort, env) if invalid else self._valid(size, sort, env, False)

    def _children(self, sizes, sorts, env: _Env, inject: bool) -> list[tuple[Type, Type]]:
        bad = self.rng.randrange(len(sizes)) if inject and sizes else -1
        return [self._child(s, so, env, i == bad) for i, (s, so) in enumerate(zip(sizes, sorts))]

    def _valid(self, size: int, sort: Sort, env: _Env, inject: bool) -> tuple[Type, Type]:
        rng = self.rng
        if size <= 0:
            leaves = [(Skip(), Skip()), (End(), End())]
            if sort is FUN:
                leaves += [(Unit(), Unit()), *((Base(b), Base(b)) for b in self.cfg.bases)]
            leaves += [(Var(n), Var(n)) for n in env.of(sort)]
            return rng.choice(leaves)
        items = list(_SESSION_ITEMS)
        if sort is FUN:
            items += _FUNCTIONAL_ITEMS
        if inject:
            items = [i for i in items if i not in _NOT_INJECTABLE]
        while True:
            item = rng.choice(items)
            result = item(self, size - 1, sort, env, inject)
            if result is not None:
                return result

    # valid items; each receives the size left after its own constructor
    def _arrow(self, rest, sort, env, inject):
        (v, t), (u, w) = self._children(self._split(rest, 2), [FUN, FUN], env, inject)
        m, n = self.rng.choice(MULT_PAIRS)
        return Arrow(m, t, u), Arrow(n, v, w)

    def _width(self, rest, sort, env, inject, kind):
        """Records and internal choices lose labels going up; variants and
        external choices gain them."""
        labels = self._labels(lo=0 if kind in ("record", "variant") else 1)
        common_n = self.rng.randint(1 if kind in ("int", "ext") else 0, len(labels))
        common = labels[:common_n]
        extra = labels[common_n:]
        if inject and not common:
            return None
        child_sort = SES if kind in ("int", "ext") else FUN
        sizes = self._split(rest, len(common) + len(extra))
        pairs = self._children(sizes[: len(common)], [child_sort] * len(common), env, inject)
        extras = [(l, self.type(s, child_sort, env)) for l, s in zip(extra, sizes[len(common):])]
        left = [(l, p[0]) for l, p in zip(common, pairs)]
        right = [(l, p[1]) for l, p in zip(common, pairs)]
        if kind in ("record", "int"):
            left += extras
        else:
            right += extras
        build = {"record": Record, "variant": Variant,
                 "int": lambda fs: Choice(View.INTERNAL, fs),
                 "ext": lambda fs: Choice(View.EXTERNAL, fs)}[kind]
        if not left or not right:
            if kind in ("int", "ext"):
                return None
        return build(left), build(right)

    def _record(self, rest, sort, env, inject):
        return self._width(rest, sort, env, inject, "record")

    def _variant(self, rest, sort, env, inject):
        return self._width(rest, sort, env, inject, "variant")

    def _int_choice(self, rest, sort, env, inject):
        return self._width(rest, sort, env, inject, "int")

    def _ext_choice(self, rest, sort, env, inject):
        return self._width(rest, sort, env, inject, "ext")

    def _message(self, rest, sort, env, inject):
        (a, b), = self._children([rest], [FUN], env, inject)
        if self.rng.random() < 0.5:
            return Msg(Polarity.IN, a), Msg(Polarity.IN, b)
        return Msg(Polarity.OUT, b), Msg(Polarity.OUT, a)

    def _seq(self, rest, sort, env, inject):
        (s1, r1), (s2, r2) = self._children(self._split(rest, 2), [SES, SES], env, inject)
        return Seq(s1, s2), Seq(r1, r2)

    def _rec(self, rest, sort, env, inject, rec_sort=None):
        s = rec_sort or (SES if sort is SES or self.rng.random() < 0.7 else FUN)
        x = self._fresh(s)
        inner = env.bind(x, s)
        if s is SES:
            (t, u), = self._children([rest], [SES], inner, inject)
        else:
            (t, u), = self._children([rest], [FUN], inner, inject)
        if x in free_contrav(t) | free_contrav(u):
            u = t
        if self._needs_guard(t, x) or self._needs_guard(u, x):
            return self._guarded_rec(x, t, u, s)
        return Rec(x, t), Rec(x, u)

    def _guarded_rec(self, x, t, u, s):
        if s is SES:
            guard = Msg(self.rng.choice(list(Polarity)), Unit())
            return Rec(x, Seq(guard, t)), Rec(x, Seq(guard, u))
        return Rec(x, Arrow(Multiplicity.UN, Unit(), t)), Rec(x, Arrow(Multiplicity.UN, Unit(), u))

    def _fun_rec(self, rest, sort, env, inject):
        return self._rec(rest, sort, env, inject, rec_sort=FUN)

    def _end_absorb(self, rest, sort, env, inject):
        a, b = self._split(rest, 2)
        s, r = self.type(a, SES, env), self.type(b, SES, env)
        return self.rng.choice([(Seq(End(), s), End()), (End(), Seq(End(), s)),
                                (Seq(End(), s), Seq(End(), r))])

    def _skip_unit(self, rest, sort, env, inject):
        (s, r), = self._children([rest], [SES], env, inject)
        return self.rng.choice([(Seq(s, Skip()), r), (Seq(Skip(), s), r),
                                (s, Seq(r, Skip())), (s, Seq(Skip(), r))])

    def _distribute(self, rest, sort, env, inject):
        view = self.rng.choice(list(View))
        labels = self._labels()
        common_n = self.rng.randint(1, len(labels))
        common, extra = labels[:common_n], labels[common_n:]
        sizes = self._split(rest, len(labels) + 1)
        pairs = self._children(sizes[: common_n + 1], [SES] * (common_n + 1), env, inject)
        (s_tail, r_tail), branch_pairs = pairs[0], pairs[1:]
        extras = [(l, self.type(n, SES, env)) for l, n in zip(extra, sizes[common_n + 1:])]
        left = [(l, p[0]) for l, p in zip(common, branch_pairs)]
        right = [(l, p[1]) for l, p in zip(common, branch_pairs)]
        if view is View.INTERNAL:
            left += extras
        else:
            right += extras
        if self.rng.random() < 0.5:
            return (Seq(Choice(view, left), s_tail),
                    Choice(view, [(l, Seq(r, r_tail)) for l, r in right]))
        return (Choice(view, [(l, Seq(s, s_tail)) for l, s in left]),
                Seq(Choice(view, right), r_tail))

    def _assoc(self, rest, sort, env, inject):
        (s1, r1), (s2, r2), (s3, r3) = self._children(self._split(rest, 3), [SES] * 3, env, inject)
        if self.rng.random() < 0.5:
            return Seq(s1, Seq(s2, s3)), Seq(Seq(r1, r2), r3)
        return Seq(Seq(s1, s2), s3), Seq(r1, Seq(r2, r3))

    def _vacuous_rec(self, rest, sort, env, inject):
        (t, u), = self._children([rest], [sort], env, inject)
        x = self._fresh(SES)
        if self.rng.random() < 0.5:
            if is_terminated(t):
                return None
            return Rec(x, t), u
        if is_terminated(u):
            return None
        return t, Rec(x, u)

    def _unfold_right(self, rest, sort, env, inject):
        pair = self._rec(rest, sort, env, inject)
        if pair is None:
            return None
        t, u = pair
        avoid = [n for n, _ in env.vars]
        return t, freshen(unfold(u), avoid)

    # invalid pairs
    def _invalid(self, size: int, sort: Sort, env: _Env) -> tuple[Type, Type]:
        rng = self.rng
        if size <= 1:
            cands = [(Skip(), End()), (End(), Skip())]
            if sort is FUN:
                cands += [(Base(b), Unit()) for b in self.cfg.bases]
                cands += [(Unit(), Base(b)) for b in self.cfg.bases]
            return rng.choice(cands)
        if rng.random() < 0.5:
            return self._valid(size, sort, env, inject=True)
        items = list(_INVALID_SESSION)
        if sort is FUN:
            items += _INVALID_FUNCTIONAL
        while True:
            result = rng.choice(items)(self, size - 1, sort, env)
            if result is not None:
                return result

    def _bad_width(self, rest, sort, env, kind):
        labels = self._labels(lo=2)
        if len(labels) < 2:
            return None
        common_n = self.rng.randint(1, len(labels) - 1)
        common, extra = labels[:common_n], labels[common_n:]
        child_sort = SES if kind in ("int", "ext") else FUN
        sizes = self._split(rest, len(labels))
        pairs = [self._valid(s, child_sort, env, False) for s in sizes[:common_n]]
        extras = [(l, self.type(s, child_sort, env)) for l, s in zip(extra, sizes[common_n:])]
        left = [(l, p[0]) for l, p in zip(common, pairs)]
        right = [(l, p[1]) for l, p in zip(common, pairs)]
        # The opposite side of the valid direction gets the extra labels.
        if kind in ("record", "int"):
            right += extras
        else:
            left += extras
        build = {"record": Record, "variant": Variant,
                 "int": lambda fs: Choice(View.INTERNAL, fs),
                 "ext": lambda fs: Choice(View.EXTERNAL, fs)}[kind]
        return build(left), build(right)

    def _bad_record(self, rest, sort, env):
        return self._bad_width(rest, sort, env, "record")

    def _bad_variant(self, rest, sort, env):
        return self._bad_width(rest, sort, env, "variant")

    def _bad_int(self, rest, sort, env):
        return self._bad_width(rest, sort, env, "int")

    def _bad_ext(self, rest, sort, env):
        return self._bad_width(rest, sort, env, "ext")

    def _bad_mult(self, rest, sort, env):
        a, b = self._split(rest, 2)
        v, t = self._valid(a, FUN, env, False)
        u, w = self._valid(b, FUN, env, False)
        return Arrow(Multiplicity.LIN, t, u), Arrow(Multiplicity.UN, v, w)

    def _bad_dom(self, rest, sort, env):
        a, b = self._split(rest, 2)
        t, v = self._valid(a, FUN, env, False)
        u, w = self._valid(b, FUN, env, False)
        m, n = self.rng.choice(MULT_PAIRS)
        return Arrow(m, t, u), Arrow(n, v, w)

    def _bad_rng(self, rest, sort, env):
        a, b = self._split(rest, 2)
        v, t = self._valid(a, FUN, env, False)
        w, u = self._valid(b, FUN, env, False)
        m, n = self.rng.choice(MULT_PAIRS)
        return Arrow(m, t, u), Arrow(n, v, w)

    def _bad_polarity(self, rest, sort, env):
        t = self.type(rest, FUN, env)
        if self.rng.random() < 0.5:
            return Msg(Polarity.IN, t), Msg(Polarity.OUT, t)
        return Msg(Polarity.OUT, t), Msg(Polarity.IN, t)

    def _bad_payload(self, rest, sort, env):
        a, b = self._valid(rest, FUN, env, False)
        if self.rng.random() < 0.5:
            # ?T vs ?U with U <= T
            return Msg(Polarity.IN, b), Msg(Polarity.IN, a)
        return Msg(Polarity.OUT, a), Msg(Polarity.OUT, b)


    # Mutation towards a super- or subtype ----------------------------------

    def vary(self, t: Type, up: bool, budget: int = 3) -> Type:
        """A random supertype (``up``) or subtype of ``t``.

        Labels are dropped or added where width subtyping allows it, linear
        arrows replace unrestricted ones going up, and variance flips in arrow
        domains and output payloads.  Bodies of recursive types that use
        their reference contravariantly are left alone.
        """
        rng = self.rng
        if isinstance(t, Arrow):
            mult = t.mult
            if up and mult is Multiplicity.UN and rng.random() < 0.3:
                mult = Multiplicity.LIN
            elif not up and mult is Multiplicity.LIN and rng.random() < 0.3:
                mult = Multiplicity.UN
            return Arrow(mult, self.vary(t.dom, not up, budget), self.vary(t.rng, up, budget))
        if isinstance(t, Msg):
            flip = t.pol is Polarity.OUT
            return Msg(t.pol, self.vary(t.payload, up != flip, budget))
        if isinstance(t, Seq):
            return Seq(self.vary(t.head, up, budget), self.vary(t.tail, up, budget))
        if isinstance(t, Rec):
            if t.var in free_contrav(t.body):
                return t
            return Rec(t.var, self.vary(t.body, up, budget))
        if isinstance(t, (Record, Variant, Choice)):
            fields = t.branches if isinstance(t, Choice) else t.fields
            fields = [(l, self.vary(f, up, budget)) for l, f in fields]
            # Records and internal choices shrink going up; variants and
            # external choices grow.
            shrinks = isinstance(t, Record) or (isinstance(t, Choice) and t.view is View.INTERNAL)
            sort = SES if isinstance(t, Choice) else FUN
            if shrinks == up:
                keep = [f for f in fields if rng.random() < 0.7]
                if isinstance(t, Choice) and not keep:
                    keep = [rng.choice(fields)]
                fields = keep
            else:
                present = {l for l, _ in fields}
                for l in self.cfg.labels:
                    if l not in present and rng.random() < 0.3:
                        fields.append((l, self.type(rng.randint(0, budget), sort)))
            if isinstance(t, Choice):
                return Choice(t.view, fields)
            return type(t)(fields)
        return t


_SESSION_ITEMS = (
    Generator._seq, Generator._rec, Generator._int_choice, Generator._ext_choice,
    Generator._end_absorb, Generator._skip_unit, Generator._distribute,
    Generator._assoc, Generator._vacuous_rec, Generator._unfold_right,
    Generator._message,
)
_FUNCTIONAL_ITEMS = (
    Generator._arrow, Generator._record, Generator._variant, Generator._fun_rec,
)
# Children of End;S are never observed, so an injected pair there stays valid.
_NOT_INJECTABLE = (Generator._end_absorb,)
_INVALID_SESSION = (Generator._bad_int, Generator._bad_ext, Generator._bad_polarity,
                    Generator._bad_payload)
_INVALID_FUNCTIONAL = (Generator._bad_record, Generator._bad_variant, Generator._bad_mult,
                       Generator._bad_dom, Generator._bad_rng)


# Public entry points -----------------------------------------------------

def _checked(pair: tuple) -> tuple:
    """Rename binders apart (copies made while building may repeat names)
    and confirm well-formedness."""
    out = tuple(freshen(t) for t in pair)
    for t in out:
        result = well_formed((), t)
        if result is not True:
            raise AssertionError(f"generator produced an ill-formed type: {result}")
    return out


def gen_type(cfg: GenConfig, gen: Optional[Generator] = None) -> Type:
    gen = gen or Generator(cfg)
    return _checked((gen.type(cfg.size),))[0]


def gen_valid_pair(cfg: GenConfig, gen: Optional[Generator] = None) -> tuple[Type, Type]:
    gen = gen or Generator(cfg)
    return _checked(gen.pair(cfg.size, valid=True))


def gen_invalid_pair(cfg: GenConfig, gen: Optional[Generator] = None) -> tuple[Type, Type]:
    if cfg.size < 1:
        raise ValueError("invalid pairs need size >= 1")
    gen = gen or Generator(cfg)
    for _ in range(cfg.max_retries):
        t, u = _checked(gen.pair(cfg.size, valid=False))
        if not bounded_sim_types(t, u, cfg.discard_depth):
            return t, u
    raise GenerationError(
        f"no invalid pair after {cfg.max_retries} attempts at size {cfg.size}")


def gen_supertype(t: Type, cfg: GenConfig, gen: Optional[Generator] = None) -> Type:
    """A random supertype of the well-formed type ``t``."""
    gen = gen or Generator(cfg)
    return _checked((gen.vary(t, up=True),))[0]


def gen_subtype(t: Type, cfg: GenConfig, gen: Optional[Generator] = None) -> Type:
    """A random subtype of the well-formed type ``t``."""
    gen = gen or Generator(cfg)
    return _checked((gen.vary(t, up=False),))[0]


def pairs(cfg: GenConfig, count: int, valid: bool = True,
          min_size: Optional[int] = None,
          max_nodes: Optional[int] = None) -> Iterator[tuple[Type, Type]]:
    """``count`` pairs from one seeded stream.

    With ``min_size`` each pair's size is drawn uniformly from
    ``[min_size, cfg.size]``; otherwise every pair has size ``cfg.size``.
    With ``max_nodes``, pairs whose combined AST size exceeds it are
    redrawn (unfolding can make a pair much larger than its size).
    """
    gen = Generator(cfg)
    lo = 1 if not valid else 0
    for _ in range(count):
        for _attempt in range(cfg.max_retries):
            size = cfg.size if min_size is None else gen.rng.randint(max(min_size, lo), cfg.size)
            sub = replace(cfg, size=size)
            t, u = gen_valid_pair(sub, gen) if valid else gen_invalid_pair(sub, gen)
            if max_nodes is None or ast_size(t) + ast_size(u) <= max_nodes:
                break
        else:
            raise GenerationError(f"no pair within {max_nodes} nodes after {cfg.max_retries} attempts")
        yield t, u


def types(cfg: GenConfig, count: int, min_size: int = 0) -> Iterator[Type]:
    gen = Generator(cfg)
    for _ in range(count):
        size = gen.rng.randint(min_size, cfg.size)
        yield _checked((gen.type(size),))[0]
