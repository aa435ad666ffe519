import pytest
from hypothesis import given, strategies as st

from cfsubtype.gen import GenConfig, Generator, pairs
from cfsubtype.grammar import EPSILON, prune, translate
from cfsubtype.oracle import bounded_sim_types, bounded_sim_words
from cfsubtype.subtype import (
    Ancestors, Budget, Verdict, check, equiv_t, expand, explore, simplify,
    simplify_bpa1, simplify_bpa2, simplify_preorder, simplify_reflexivity, sub_g, sub_t,
)
from cfsubtype.syntax import parse_type
from cfsubtype.types import IllFormedType, Msg, Polarity, Seq, Skip, Unit, Var
from helpers import by_name, example_grammar_types

FAST = Budget(max_visits=20_000, timeout=5.0)


def P(text):
    return parse_type(text)


def example():
    ((x0,), (y0,)), g = translate(*example_grammar_types())
    return x0, y0, prune(g)


# expand ------------------------------------------------------------------

def test_expand_empty_pair():
    _, _, g = example()
    assert expand({(EPSILON, EPSILON)}, g) == frozenset()


def test_expand_root_of_example():
    x0, y0, g = example()
    n = by_name(g)
    # The domain pair is stored inverted; both ranges are unit (X5).
    assert expand({((x0,), (y0,))}, g) == {((n["Y1"],), (n["X1"],)), ((n["X5"],), (n["X5"],))}


def test_expand_fails_on_unmatched_action():
    _, _, g = example()
    n = by_name(g)
    assert expand({((n["X3"],), EPSILON)}, g) is None


def test_expand_fails_on_missing_linear_label():
    x0, y0, g = example()
    assert expand({((y0,), (x0,))}, g) is None


# Simplification rules ----------------------------------------------------

A, B, C, D = (1,), (2,), (3,), (4,)


def test_reflexivity():
    assert simplify_reflexivity({(A, A), (A, B)}) == {(A, B)}
    assert simplify_reflexivity({(EPSILON, EPSILON)}) == frozenset()
    assert simplify_reflexivity({(A, B)}) == {(A, B)}


def test_preorder_uses_transitive_closure():
    assert simplify_preorder({(A, C)}, {(A, B), (B, C)}) == frozenset()
    assert simplify_preorder({(A, A)}, set()) == frozenset()
    assert simplify_preorder({(C, A)}, {(A, B), (B, C)}) == {(C, A)}


def test_ancestors_implies():
    anc = Ancestors({(A, B), (B, C), (C, D)})
    assert anc.implies(A, D) and anc.implies(B, B)
    assert not anc.implies(D, A)


def test_bpa1_examples():
    x1, y1, y2 = 11, 21, 22
    a, b, c, d = (1,), (2,), (3,), (4,)
    n = frozenset({((x1,) + a, (y1,) + b)})
    assert simplify_bpa1(n, {((x1,) + c, (y1,) + d)}) == {frozenset({(a, c), (b, d)})}
    n2 = frozenset({((x1,) + a, (y2,) + b)})
    assert simplify_bpa1(n2, {((x1,) + c, (y1,) + d)}) == set()
    n3 = frozenset({((x1,), (y1,))})
    (sib,) = simplify_bpa1(n3, {((x1,), (y1,) + d)})
    assert simplify_reflexivity(sib) == {(EPSILON, d)}


def test_bpa2_on_example_grammar():
    _, _, g = example()
    n = by_name(g)
    x2, y1, x3 = n["X2"], n["Y1"], n["X3"]
    assert g.norm(x2) == 1 and g.norm(y1) == 1
    w, v = (x3,), (x3, x3)
    sibs = simplify_bpa2(frozenset({((x2,) + w, (y1,) + v)}), g)
    assert sibs == {frozenset({((x2,), (y1,)), (w, v)})}


def test_bpa2_skips_unnormed_heads():
    from cfsubtype.grammar import BOTTOM
    _, _, g = example()
    assert simplify_bpa2(frozenset({((BOTTOM,), (BOTTOM, 5))}), g) == set()


def test_bpa2_same_head():
    _, _, g = example()
    x3 = by_name(g)["X3"]
    (sib,) = simplify_bpa2(frozenset({((x3, 1), (x3, 2))}), g)
    assert simplify_reflexivity(sib) == {((1,), (2,))}


def test_simplify_returns_node_first_then_siblings():
    _, _, g = example()
    node = frozenset({((1,), (1,)), ((2,), (3,))})
    out = simplify(node, Ancestors(), g)
    assert frozenset({((2,), (3,))}) in out


# Search ------------------------------------------------------------------

def test_sub_g_empty_words():
    _, _, g = example()
    assert sub_g(EPSILON, EPSILON, g) is Verdict.TRUE


def test_sub_g_example():
    x0, y0, g = example()
    out = explore((x0,), (y0,), g)
    assert out.verdict is Verdict.TRUE
    assert out.visits <= 10**4


def test_sub_g_output_against_input():
    (x, y), g = translate(P("!unit"), P("?unit"))
    assert sub_g(x, y, prune(g)) is Verdict.FALSE


def test_verdict_exit_codes():
    assert [v.exit_code for v in (Verdict.TRUE, Verdict.FALSE, Verdict.UNKNOWN)] == [0, 1, 2]


def test_budget_exhaustion_is_unknown(trees):
    assert check(trees["STree"], trees["SFullTree1"], Budget(max_visits=1)).verdict is Verdict.UNKNOWN
    assert check(trees["STree"], trees["SFullTree1"], Budget(timeout=0.0)).verdict is Verdict.UNKNOWN


def test_ill_formed_input_rejected():
    with pytest.raises(IllFormedType):
        check(Var("s"), Skip())


# sub_t / equiv_t examples ------------------------------------------------

def test_tree_examples(trees):
    for right in ("SFullTree1", "SFullTree0", "SEmpty"):
        assert sub_t(trees["STree"], trees[right], FAST) is Verdict.TRUE, right
    assert sub_t(trees["SFullTree1"], trees["STree"], FAST) is Verdict.FALSE
    assert not bounded_sim_types(trees["SFullTree1"], trees["STree"], 6)


def test_arrow_example():
    t, u = example_grammar_types()
    assert sub_t(t, u, FAST) is Verdict.TRUE
    assert sub_t(u, t, FAST) is Verdict.FALSE


@pytest.mark.parametrize("left,right,expected", [
    ("&{A: end}", "&{A: end, B: end}", Verdict.TRUE),
    ("&{A: end, B: end}", "&{A: end}", Verdict.FALSE),
    ("+{A: end, B: end}", "+{A: end}", Verdict.TRUE),
    ("+{A: end}", "+{A: end, B: end}", Verdict.FALSE),
    ("!{A: int}", "!{A: int, B: bool}", Verdict.TRUE),
    ("!{A: int, B: bool}", "!{A: int}", Verdict.FALSE),
    ("?{A: int, B: bool}", "?{A: int}", Verdict.TRUE),
    ("unit -> unit", "unit -o unit", Verdict.TRUE),
    ("unit -o unit", "unit -> unit", Verdict.FALSE),
    ("<A: int>", "<A: int, B: unit>", Verdict.TRUE),
    ("{A: int} -> unit", "{A: int, B: bool} -> unit", Verdict.TRUE),
    ("end ; !int", "end", Verdict.TRUE),
    ("skip", "end", Verdict.FALSE),
])
def test_small_examples(left, right, expected):
    assert sub_t(P(left), P(right), FAST) is expected


def test_equiv_examples():
    s = Msg(Polarity.OUT, Unit())
    assert equiv_t(Seq(Skip(), s), s, FAST) is Verdict.TRUE
    assert equiv_t(Seq(Seq(s, s), s), Seq(s, Seq(s, s)), FAST) is Verdict.TRUE
    assert equiv_t(s, Msg(Polarity.IN, Unit()), FAST) is Verdict.FALSE
    # Width subtyping is not equivalence.
    assert equiv_t(P("+{A: end, B: end}"), P("+{A: end}"), FAST) is Verdict.FALSE


def test_equiv_unfolded_recursion():
    assert equiv_t(P("rec x . !int ; x"), P("!int ; (rec y . !int ; y)"), FAST) is Verdict.TRUE
    assert equiv_t(P("rec x . !int ; x ; x"), P("rec y . !int ; y"), FAST) is Verdict.TRUE


# Properties --------------------------------------------------------------

@given(seed=st.integers(0, 10**6), size=st.integers(0, 14))
def test_reflexive(seed, size):
    t = Generator(GenConfig(seed=seed)).type(size)
    assert sub_t(t, t, FAST) is Verdict.TRUE


@given(seed=st.integers(0, 10**6), size=st.integers(1, 12))
def test_true_is_sound_for_the_bounded_oracle(seed, size):
    for valid in (True, False):
        (t, u), = pairs(GenConfig(size=size, seed=seed), 1, valid=valid)
        if sub_t(t, u, FAST) is Verdict.TRUE:
            assert all(bounded_sim_types(t, u, n) for n in range(7))


@given(seed=st.integers(0, 10**6), size=st.integers(1, 12))
def test_deterministic(seed, size):
    (t, u), = pairs(GenConfig(size=size, seed=seed), 1)
    a = check(t, u, Budget(max_visits=5000, timeout=None))
    b = check(t, u, Budget(max_visits=5000, timeout=None))
    assert (a.verdict, a.visits) == (b.verdict, b.visits)


@given(seed=st.integers(0, 10**6), size=st.integers(1, 10), depth=st.integers(0, 4))
def test_expansion_preserves_bounded_similarity(seed, size, depth):
    # If every pair of a node is related at depth n+1, every pair of its
    # expansion is related at depth n.
    (t, u), = pairs(GenConfig(size=size, seed=seed), 1, valid=seed % 2 == 0)
    (x, y), g = translate(t, u)
    g = prune(g)
    node = frozenset({(x, y)})
    if bounded_sim_words(x, y, depth + 1, g):
        child = expand(node, g)
        assert child is not None
        for a, b in child:
            assert bounded_sim_words(a, b, depth, g)
    elif depth == 0:
        assert expand(node, g) is None
