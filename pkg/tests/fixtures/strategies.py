"""Hypothesis strategies for series and qmax-valued elements."""

from fractions import Fraction

from hypothesis import strategies as st

from laysem.core import LayeredElement
from laysem.sorting import INFINITY
from laysem.tropical import PuiseuxSeries


def rationals(bound: int = 6, max_denominator: int = 6) -> st.SearchStrategy[Fraction]:
    return st.fractions(min_value=-bound, max_value=bound, max_denominator=max_denominator)


def nonzero_rationals() -> st.SearchStrategy[Fraction]:
    return rationals(bound=20, max_denominator=20).filter(lambda q: q != 0)


def series(max_terms: int = 3) -> st.SearchStrategy[PuiseuxSeries]:
    """Nonzero finite Puiseux series."""
    terms = st.lists(st.tuples(rationals(), nonzero_rationals()), min_size=1, max_size=max_terms)
    return terms.map(PuiseuxSeries.from_terms).filter(lambda p: not p.is_zero)


def natinf_sorts() -> st.SearchStrategy:
    return st.one_of(st.integers(min_value=1, max_value=6), st.just(INFINITY))


def qmax_elements() -> st.SearchStrategy[LayeredElement]:
    """Elements of R(nat-inf, qmax), which has an empty zero layer."""
    return st.builds(LayeredElement, rationals(bound=8), natinf_sorts())
