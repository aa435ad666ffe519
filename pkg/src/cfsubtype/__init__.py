"""Subtyping for functional and higher-order context-free session types."""

from .grammar import Grammar, GrammarBuilder, grm, prune, translate, unr
from .lts import BISIMILARITY, SUBTYPING, Action, classify, transitions
from .subtype import Budget, Outcome, Verdict, check, equiv_t, sub_g, sub_t
from .syntax import ParseError, parse_type, print_type
from .types import IllFormed, IllFormedType, well_formed

__all__ = [
    "Action", "BISIMILARITY", "Budget", "Grammar", "GrammarBuilder", "IllFormed",
    "IllFormedType", "Outcome", "ParseError", "SUBTYPING", "Verdict", "check",
    "classify", "equiv_t", "grm", "parse_type", "print_type", "prune", "sub_g",
    "sub_t", "transitions", "translate", "unr", "well_formed",
]
