import random

from hypothesis import given, strategies as st

from cfsubtype.gen import GenConfig, Generator, gen_type, pairs
from cfsubtype.grammar import (
    BOTTOM, EPSILON, Grammar, GrammarBuilder, grammar_transitions, grm, norm, prune,
    translate, unr,
)
from cfsubtype.lts import (
    A_END, a_choice, a_choice_field, a_cont, a_payload, transitions,
)
from cfsubtype.oracle import bounded_sim_words
from cfsubtype.types import End, Msg, Polarity, Rec, Seq, Skip, Unit, Var, View
from helpers import (
    EXAMPLE_PRODUCTIONS, bfs_norm, by_name, example_grammar_types, find_renaming,
    production_triples,
)

OUT_UNIT = Msg(Polarity.OUT, Unit())
LOOP = Rec("s", Seq(OUT_UNIT, Var("s")))


def example_grammar():
    words, g = translate(*example_grammar_types())
    return words, g


# unr ---------------------------------------------------------------------

def test_unr_examples():
    assert unr(Seq(Skip(), OUT_UNIT)) == OUT_UNIT
    assert unr(Seq(End(), OUT_UNIT)) == End()
    assert unr(LOOP) == Seq(OUT_UNIT, LOOP)
    assert unr(unr(LOOP)) == unr(LOOP)


# word / grm --------------------------------------------------------------

def test_word_of_skip_is_empty():
    b = GrammarBuilder()
    assert b.grm(Skip()) == EPSILON
    assert b.prods == {}


def test_word_of_message():
    b = GrammarBuilder()
    (y,) = b.grm(Msg(Polarity.IN, Unit()))
    (u,) = b.word(Unit())
    assert b.prods[y] == {a_payload(Polarity.IN): (u, BOTTOM), a_cont(Polarity.IN): EPSILON}


def test_word_of_sequence_concatenates():
    b = GrammarBuilder()
    s1, s2 = OUT_UNIT, Msg(Polarity.IN, Unit())
    w = b.grm(Seq(s1, s2))
    assert w == b.word(s1) + b.word(s2)


def test_end_goes_to_bottom():
    b = GrammarBuilder()
    (y,) = b.grm(End())
    assert b.prods[y] == {A_END: (BOTTOM,)}


def test_grm_of_loop_cycles_back():
    (x,), b = grm(LOOP)
    ps = b.prods[x]
    assert ps[a_cont(Polarity.OUT)] == (x,)
    (u,) = b.word(Unit())
    assert ps[a_payload(Polarity.OUT)] == (u, BOTTOM)


def test_grm_skip_yields_empty_grammar():
    w, b = grm(Skip())
    assert w == EPSILON and b.grammar().prods == {}


def test_example_grammar_matches_listing():
    ((x0,), (y0,)), g = example_grammar()
    assert g.name(x0) == "X0" and g.name(y0) == "Y0"
    renaming = find_renaming(production_triples(g), EXAMPLE_PRODUCTIONS)
    assert renaming is not None
    assert renaming["X0"] == "X0" and renaming["Y0"] == "Y0"


def test_renaming_search_sees_through_scrambled_names():
    # The isomorphism check must not rely on our names matching.
    _, g = example_grammar()
    names = sorted(n for n in by_name(g) if n != "⊥")
    shuffled = names[:]
    random.Random(3).shuffle(shuffled)
    scramble = dict(zip(names, shuffled))
    scramble["⊥"] = "⊥"
    scrambled = {(scramble[l], a, tuple(scramble[y] for y in r)) for l, a, r in production_triples(g)}
    assert find_renaming(scrambled, EXAMPLE_PRODUCTIONS) is not None
    broken = set(EXAMPLE_PRODUCTIONS) - {("Y0", "->lin", ())}
    assert find_renaming(scrambled, broken) is None


def test_dump_is_ordered_and_readable():
    _, g = example_grammar()
    lines = g.dump().splitlines()
    assert lines[0] == "X0 -> ->d X1"
    assert "X3 -> !p X4 ⊥" in lines
    assert "Y1 -> +Node Y1 X3 Y1" in lines
    assert len(lines) == 16


# grammar_transitions -----------------------------------------------------

def test_transitions_of_empty_word():
    _, g = example_grammar()
    assert grammar_transitions(EPSILON, g) == {}


def test_transitions_of_message_symbol():
    _, g = example_grammar()
    n = by_name(g)
    assert grammar_transitions((n["X3"],), g) == {
        a_payload(Polarity.OUT): (n["X4"], BOTTOM), a_cont(Polarity.OUT): EPSILON}


def test_transitions_append_tail():
    _, g = example_grammar()
    n = by_name(g)
    assert grammar_transitions((n["X2"], n["X3"]), g) == {
        a_choice_field(View.INTERNAL, "Empty"): (n["X3"],),
        a_choice(View.INTERNAL): (BOTTOM, n["X3"]),
    }


# norms -------------------------------------------------------------------

def test_norm_examples():
    _, g = example_grammar()
    n = by_name(g)
    assert norm(BOTTOM, g) is None
    assert norm(n["X2"], g) == 1 == bfs_norm((n["X2"],), g)
    assert norm(n["X1"], g) == 4 == bfs_norm((n["X1"],), g)


@given(seed=st.integers(0, 10**6), size=st.integers(0, 14))
def test_norms_agree_with_breadth_first_search(seed, size):
    (w,), g = translate(gen_type(GenConfig(size=size, seed=seed)))
    for x in g.nonterminals:
        expected = bfs_norm((x,), g, limit=40)
        got = g.norm(x)
        if expected is not None:
            assert got == expected
        elif got is not None:
            assert got > 40


@given(seed=st.integers(0, 10**6), size=st.integers(0, 14))
def test_norm_is_additive(seed, size):
    (w1, w2), g = translate(*next(pairs(GenConfig(size=size, seed=seed), 1)))
    n1, n2, n12 = g.word_norm(w1), g.word_norm(w2), g.word_norm(w1 + w2)
    if n1 is None or n2 is None:
        assert n12 is None
    else:
        assert n12 == n1 + n2


def test_minimal_path_reaches_empty_word():
    _, g = example_grammar()
    n = by_name(g)
    path = g.minimal_path((n["X1"],))
    assert len(path) == 4
    assert g.run((n["X1"],), path) == EPSILON
    assert g.minimal_path((BOTTOM,)) is None


# prune -------------------------------------------------------------------

def test_prune_cuts_after_unnormed_symbol():
    from cfsubtype.lts import A_UNIT
    g = Grammar({1: {A_UNIT: (BOTTOM, 2)}, 2: {A_UNIT: ()}})
    assert prune(g).prods[1][A_UNIT] == (BOTTOM,)


def test_prune_of_example_grammar():
    _, g = example_grammar()
    p = prune(g)
    for ps in p.prods.values():
        for rhs in ps.values():
            assert all(p.norm(y) is not None for y in rhs[:-1])
    assert p.dump() == g.dump()


@given(seed=st.integers(0, 10**6), size=st.integers(0, 20))
def test_prune_is_idempotent_and_keeps_simplicity(seed, size):
    (_, _), g = translate(*next(pairs(GenConfig(size=size, seed=seed), 1)))
    p = prune(g)
    assert prune(p).prods == p.prods
    assert set(p.prods) == set(g.prods)
    for x in g.prods:
        assert set(p.prods[x]) == set(g.prods[x])
    for ps in p.prods.values():
        for rhs in ps.values():
            assert all(y in p.nonterminals for y in rhs)


@given(seed=st.integers(0, 10**6), size=st.integers(0, 12), depth=st.integers(0, 5))
def test_prune_preserves_bounded_similarity(seed, size, depth):
    (x, y), g = translate(*next(pairs(GenConfig(size=size, seed=seed), 1)))
    p = prune(g)
    assert bounded_sim_words(x, y, depth, g) == bounded_sim_words(x, y, depth, p)
    assert bounded_sim_words(y, x, depth, g) == bounded_sim_words(y, x, depth, p)


# LTS agreement -----------------------------------------------------------

def synchronised_actions_agree(t, w, g, depth):
    """Walk the type and grammar transition systems together for ``depth`` steps."""
    frontier = [(t, w)]
    seen = set()
    for _ in range(depth):
        nxt = []
        for s, v in frontier:
            if (s, v) in seen:
                continue
            seen.add((s, v))
            ts, gs = transitions(s), grammar_transitions(v, g)
            if set(ts) != set(gs):
                return False
            nxt.extend((ts[a], gs[a]) for a in ts)
        frontier = nxt
    return True


@given(seed=st.integers(0, 10**6), size=st.integers(0, 20))
def test_type_and_grammar_transitions_agree(seed, size):
    t = gen_type(GenConfig(size=size, seed=seed))
    (w,), g = translate(t)
    assert synchronised_actions_agree(t, w, g, 5)
    assert synchronised_actions_agree(t, w, prune(g), 5)


def test_shared_builder_reuses_nonterminals():
    gen = Generator(GenConfig(seed=1))
    t = gen.type(8)
    (w1, w2), g = translate(t, t)
    assert w1 == w2
