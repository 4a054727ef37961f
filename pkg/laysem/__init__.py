"""Layered semirings over valued monoids, their morphisms and layered tropicalization."""

from laysem.core import (
    ConstructedSemiring,
    LayeredElement,
    LayeredMap,
    LayeredSemiring,
    build_layered,
    check_axioms,
    check_frobenius,
    check_surpassing,
)
from laysem.errors import LaysemError
from laysem.monoids import ValuedMonoid, make_qmax, make_truncated_nat, parse_monoid
from laysem.reports import CheckReport, LawResult
from laysem.sorting import INFINITY, SortingSemiring, make_sorting, parse_sorting

__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "CheckReport",
    "ConstructedSemiring",
    "LawResult",
    "LayeredElement",
    "LayeredMap",
    "LayeredSemiring",
    "LaysemError",
    "SortingSemiring",
    "ValuedMonoid",
    "build_layered",
    "check_axioms",
    "check_frobenius",
    "check_surpassing",
    "make_qmax",
    "make_sorting",
    "make_truncated_nat",
    "parse_monoid",
    "parse_sorting",
]
