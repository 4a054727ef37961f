"""Sorting semirings: the index semirings L whose elements label layers."""

import logging
import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

from laysem.errors import InvalidThresholdError, NotEnumerableError, ParseError
from laysem.notation import INFINITY_TOKEN, parse_positive_int
from laysem.reports import (
    DEFAULT_BUDGET,
    DEFAULT_EXHAUSTIVE_LIMIT,
    DEFAULT_SEED,
    CheckReport,
    Domain,
    LawChecker,
)

logger = logging.getLogger(__name__)


class SortSymbol(str, Enum):
    """Distinguished non-numeric sorts."""

    INFINITY = INFINITY_TOKEN

    def __str__(self) -> str:
        return self.value


INFINITY = SortSymbol.INFINITY

Sort = Union[int, SortSymbol]


class SortingKind(str, Enum):
    """Shipped sorting semirings."""

    TRIVIAL01INF = "trivial01inf"
    NAT_INF = "nat_inf"
    TRUNCATED = "truncated"


def sort_rank(sort: Sort) -> float:
    """Numeric rank shared by every shipped L: 0 < 1 < 2 < ... < inf."""
    return math.inf if sort == INFINITY else float(sort)


@dataclass(frozen=True, eq=False)
class SortingSemiring:
    """A positive, directed, pre-ordered commutative semiring L.

    The carrier is either a finite tuple in canonical order or symbolic, in which
    case ``member_op`` decides membership and ``sampler`` draws sorts for
    sampled checks.
    """

    name: str
    add_op: Callable[[Sort, Sort], Sort]
    mul_op: Callable[[Sort, Sort], Sort]
    leq_op: Callable[[Sort, Sort], bool]
    zero: Sort = 0
    one: Sort = 1
    carrier: Optional[tuple[Sort, ...]] = None
    sampler: Optional[Callable[[random.Random], Sort]] = None
    member_op: Optional[Callable[[Sort], bool]] = None
    ghost_op: Optional[Callable[[Sort, Sort], bool]] = None

    @property
    def is_finite(self) -> bool:
        return self.carrier is not None

    def add(self, a: Sort, b: Sort) -> Sort:
        return self.add_op(a, b)

    def mul(self, a: Sort, b: Sort) -> Sort:
        return self.mul_op(a, b)

    def leq(self, a: Sort, b: Sort) -> bool:
        return self.leq_op(a, b)

    def lt(self, a: Sort, b: Sort) -> bool:
        return self.leq(a, b) and not self.leq(b, a)

    def is_positive(self, sort: Sort) -> bool:
        return self.lt(self.zero, sort)

    def contains(self, sort: Sort) -> bool:
        if self.carrier is not None:
            return sort in self.carrier
        return self.member_op is not None and self.member_op(sort)

    def elements(self) -> tuple[Sort, ...]:
        """Return the carrier in canonical order.

        Raises:
            NotEnumerableError: If the carrier is symbolic
        """
        if self.carrier is None:
            raise NotEnumerableError(f"sorting semiring {self.name} is not finite")
        return self.carrier

    def positive_sorts(self) -> tuple[Sort, ...]:
        return tuple(s for s in self.elements() if self.is_positive(s))

    def sample(self, rng: random.Random) -> Sort:
        if self.carrier is not None:
            return rng.choice(self.carrier)
        assert self.sampler is not None, f"{self.name} has no sampler"
        return self.sampler(rng)

    def sample_positive(self, rng: random.Random) -> Sort:
        while True:
            sort = self.sample(rng)
            if self.is_positive(sort):
                return sort

    def domain(self) -> Domain:
        return Domain(elements=self.carrier, sampler=None if self.carrier else self.sampler)

    @property
    def has_infinity(self) -> bool:
        return self.contains(INFINITY)

    def top(self) -> Optional[Sort]:
        """Largest sort: inf when present, else the maximum of a finite carrier."""
        if self.has_infinity:
            return INFINITY
        if self.carrier is None:
            return None
        for candidate in self.carrier:
            if all(self.leq(other, candidate) for other in self.carrier):
                return candidate
        return None

    def is_ghost_sort(self, sort: Sort, ell: Sort) -> bool:
        """True when sort = ell + k for some positive k in L."""
        if self.ghost_op is not None:
            return self.ghost_op(sort, ell)
        return any(self.add(ell, k) == sort for k in self.positive_sorts())

    def times(self, n: int) -> Sort:
        """The sort 1 + 1 + ... + 1 (n summands)."""
        total = self.one
        for _ in range(n - 1):
            total = self.add(total, self.one)
        return total

    def reachable_from_one(self, limit: int = 16) -> list[tuple[int, Sort]]:
        """Pairs (n, n*1) for the distinct sorts reachable from 1 by addition."""
        seen: list[tuple[int, Sort]] = []
        sorts: set = set()
        current = self.one
        for n in range(1, limit + 1):
            if current in sorts:
                break
            sorts.add(current)
            seen.append((n, current))
            current = self.add(current, self.one)
        return seen

    def summands_for(self, sort: Sort, limit: int = 64) -> Optional[int]:
        """Least n with n*1 = sort, or None when unreachable within limit."""
        current = self.one
        for n in range(1, limit + 1):
            if current == sort:
                return n
            nxt = self.add(current, self.one)
            if nxt == current:
                return None
            current = nxt
        return None

    def truncate(self, m: Sort) -> "SortingSemiring":
        """Cap every sort at m.

        Raises:
            InvalidThresholdError: If m is not a sort above 1
        """
        if not self.contains(m) or not self.lt(self.one, m):
            raise InvalidThresholdError(f"sort threshold {m} must exceed 1 in {self.name}")
        if m == INFINITY and self.has_infinity:
            return self
        if self.carrier is not None:
            carrier = tuple(s for s in self.carrier if self.leq(s, m))
        elif isinstance(m, int):
            carrier = tuple(range(m + 1))
        else:
            raise NotEnumerableError(f"cannot truncate {self.name} at {m}")

        def cap(s: Sort) -> Sort:
            return s if self.leq(s, m) else m

        logger.debug("truncating %s at %s", self.name, m)
        return SortingSemiring(
            name=f"{self.name}|{m}",
            add_op=lambda a, b: cap(self.add(a, b)),
            mul_op=lambda a, b: cap(self.mul(a, b)),
            leq_op=self.leq_op,
            zero=self.zero,
            one=self.one,
            carrier=carrier,
        )

    def with_infinity(self) -> "SortingSemiring":
        """Adjoin an absorbing top sort inf; returns self when already present."""
        if self.has_infinity:
            return self
        if self.carrier is None:
            raise NotEnumerableError(f"cannot adjoin inf to symbolic {self.name}")
        zero = self.zero

        def add(a: Sort, b: Sort) -> Sort:
            if a == INFINITY or b == INFINITY:
                return INFINITY
            return self.add(a, b)

        def mul(a: Sort, b: Sort) -> Sort:
            if a == INFINITY or b == INFINITY:
                other = b if a == INFINITY else a
                return zero if other == zero else INFINITY
            return self.mul(a, b)

        def leq(a: Sort, b: Sort) -> bool:
            if b == INFINITY:
                return True
            if a == INFINITY:
                return False
            return self.leq(a, b)

        return SortingSemiring(
            name=f"{self.name}+inf",
            add_op=add,
            mul_op=mul,
            leq_op=leq,
            zero=self.zero,
            one=self.one,
            carrier=self.carrier + (INFINITY,),
        )

    def __repr__(self) -> str:
        return f"SortingSemiring({self.name})"


_TRIVIAL_RANK = {0: 0, 1: 1, INFINITY: 2}


def _trivial_add(a: Sort, b: Sort) -> Sort:
    if a == 0:
        return b
    if b == 0:
        return a
    return INFINITY


def _trivial_mul(a: Sort, b: Sort) -> Sort:
    if a == 0 or b == 0:
        return 0
    if a == 1 and b == 1:
        return 1
    return INFINITY


def _nat_add(a: Sort, b: Sort) -> Sort:
    if a == INFINITY or b == INFINITY:
        return INFINITY
    return a + b  # type: ignore[operator]


def _nat_mul(a: Sort, b: Sort) -> Sort:
    if a == 0 or b == 0:
        return 0
    if a == INFINITY or b == INFINITY:
        return INFINITY
    return a * b  # type: ignore[operator]


def _nat_leq(a: Sort, b: Sort) -> bool:
    return sort_rank(a) <= sort_rank(b)


def _nat_member(sort: Sort) -> bool:
    return sort == INFINITY or (isinstance(sort, int) and not isinstance(sort, bool) and sort >= 0)


def _nat_ghost(sort: Sort, ell: Sort) -> bool:
    if ell == INFINITY:
        return sort == INFINITY
    return sort_rank(sort) > sort_rank(ell)


def _nat_sample(rng: random.Random) -> Sort:
    roll = rng.random()
    if roll < 0.1:
        return 0
    if roll < 0.2:
        return INFINITY
    return rng.randint(1, 6)


def make_sorting(kind: Union[SortingKind, str], m: Optional[int] = None) -> SortingSemiring:
    """Build one of the shipped sorting semirings.

    Args:
        kind: trivial01inf, nat_inf or truncated
        m: Saturation point for truncated

    Returns:
        The requested SortingSemiring

    Raises:
        InvalidThresholdError: If truncated is requested with m < 1
    """
    kind = SortingKind(kind)
    if kind is SortingKind.TRIVIAL01INF:
        return SortingSemiring(
            name="trivial01inf",
            add_op=_trivial_add,
            mul_op=_trivial_mul,
            leq_op=lambda a, b: _TRIVIAL_RANK[a] <= _TRIVIAL_RANK[b],
            carrier=(0, 1, INFINITY),
        )
    if kind is SortingKind.NAT_INF:
        return SortingSemiring(
            name="nat-inf",
            add_op=_nat_add,
            mul_op=_nat_mul,
            leq_op=_nat_leq,
            sampler=_nat_sample,
            member_op=_nat_member,
            ghost_op=_nat_ghost,
        )
    if m is None or m < 1:
        raise InvalidThresholdError(f"truncated sorting needs m >= 1, got {m}")
    top = m
    return SortingSemiring(
        name=f"trunc:{m}",
        add_op=lambda a, b: min(a + b, top),  # type: ignore[operator]
        mul_op=lambda a, b: min(a * b, top),  # type: ignore[operator]
        leq_op=lambda a, b: a <= b,  # type: ignore[operator]
        carrier=tuple(range(m + 1)),
    )


def parse_sorting(text: str) -> SortingSemiring:
    """Parse the flag grammar ``trivial01inf | nat-inf | trunc:<m>``.

    Raises:
        ParseError: If the text matches no sorting semiring
    """
    token = text.strip()
    if token == "trivial01inf":
        return make_sorting(SortingKind.TRIVIAL01INF)
    if token in ("nat-inf", "nat_inf", "natinf"):
        return make_sorting(SortingKind.NAT_INF)
    if token.startswith("trunc:"):
        return make_sorting(SortingKind.TRUNCATED, parse_positive_int(token[6:], "trunc"))
    raise ParseError(f"unknown sorting {text!r} (expected trivial01inf, nat-inf or trunc:<m>)")


def parse_sort(text: str, sorting: SortingSemiring) -> Sort:
    """Parse a sort token and check membership in L."""
    token = text.strip()
    sort: Sort
    if token == INFINITY_TOKEN:
        sort = INFINITY
    else:
        try:
            sort = int(token)
        except ValueError as exc:
            raise ParseError(f"invalid sort {token!r}") from exc
    if not sorting.contains(sort):
        raise ParseError(f"sort {token} is not in {sorting.name}")
    return sort


def check_sorting_semiring(
    L: SortingSemiring,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """Check the ordered-semiring laws of L.

    Args:
        L: Sorting semiring to check
        budget: Samples per law for symbolic carriers
        seed: Sampling seed
        exhaustive_limit: Largest tuple count enumerated exhaustively

    Returns:
        CheckReport with one entry per law
    """
    checker = LawChecker(budget=budget, seed=seed, exhaustive_limit=exhaustive_limit)
    domain = L.domain()
    add, mul, leq = L.add, L.mul, L.leq
    report = CheckReport(title=f"sorting semiring {L.name}")

    def directed(a: Sort, b: Sort) -> bool:
        if L.carrier is not None:
            return any(leq(a, c) and leq(b, c) for c in L.carrier)
        c = L.top() or add(a, b)
        return leq(a, c) and leq(b, c)

    laws = [
        ("add_associativity", 3, lambda a, b, c: add(add(a, b), c) == add(a, add(b, c))),
        ("add_commutativity", 2, lambda a, b: add(a, b) == add(b, a)),
        ("mul_associativity", 3, lambda a, b, c: mul(mul(a, b), c) == mul(a, mul(b, c))),
        ("mul_commutativity", 2, lambda a, b: mul(a, b) == mul(b, a)),
        ("distributivity", 3, lambda a, b, c: mul(a, add(b, c)) == add(mul(a, b), mul(a, c))),
        ("add_identity", 1, lambda a: add(a, L.zero) == a),
        ("mul_identity", 1, lambda a: mul(a, L.one) == a),
        ("zero_absorption", 1, lambda a: mul(a, L.zero) == L.zero),
        ("zero_least", 1, lambda a: leq(L.zero, a)),
        ("preorder_reflexive", 1, lambda a: leq(a, a)),
        (
            "preorder_transitive",
            3,
            lambda a, b, c: not (leq(a, b) and leq(b, c)) or leq(a, c),
        ),
        ("directedness", 2, directed),
        (
            "order_compatibility",
            3,
            lambda a, b, c: not leq(b, c) or (leq(mul(a, b), mul(a, c)) and leq(add(a, b), add(a, c))),
        ),
    ]
    for name, arity, predicate in laws:
        report.add(checker.check(name, domain, arity, predicate))
    if L.carrier is not None:
        carrier = L.carrier
        report.add(
            checker.check(
                "closure",
                domain,
                2,
                lambda a, b: add(a, b) in carrier and mul(a, b) in carrier,
            )
        )
    return report
