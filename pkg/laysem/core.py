"""Layered semirings R(L, M)_a and the axiom checker.

Elements are pairs ``<a>^l`` (value, sort). A constructed instance multiplies
componentwise, sending products whose value lies in the ideal a to sort 0, and adds
by comparing valuations: the larger value wins and equal values add their sorts.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, reduce
from typing import Any, Callable, Iterable, Iterator, Optional, Union

from laysem.errors import (
    DomainMismatchError,
    IdealTooSmallError,
    InvalidIdealError,
    InvalidTransitionError,
    NotEnumerableError,
)
from laysem.monoids import (
    EMPTY_IDEAL,
    MonoidIdeal,
    ValuedMonoid,
    ValueSymbol,
    is_prime,
    noncancellative_ideal,
    validate_ideal,
)
from laysem.notation import format_sort, format_value
from laysem.reports import (
    DEFAULT_BUDGET,
    DEFAULT_EXHAUSTIVE_LIMIT,
    DEFAULT_SEED,
    CheckReport,
    Domain,
    LawChecker,
    LawResult,
)
from laysem.sorting import INFINITY, Sort, SortingSemiring

logger = logging.getLogger(__name__)

ADD_COMPAT_NOTE = "diagonal elements with b <=nu d <nu a skipped"
MUL_COMPAT_NOTE = "pairs with ad in R0 and bd outside R0 skipped"


@dataclass(frozen=True)
class LayeredElement:
    """The element <value>^sort."""

    value: Any
    sort: Sort

    def __str__(self) -> str:
        return f"{format_value(self.value)}@{format_sort(self.sort)}"

    __repr__ = __str__


class LayeredMode(str, Enum):
    WITH_ZERO_LAYER = "with_zero_layer"
    NO_ZERO_LAYER = "no_zero_layer"


class IdealChoice(str, Enum):
    AUTO = "auto"


AUTO = IdealChoice.AUTO


class LayeredSemiring(ABC):
    """Common interface of every layered semiring.

    Subclasses supply the arithmetic, the sorting map and the carrier; the
    ν-relations, layer units, surpassing relations and powers derive from them.
    """

    name: str
    sorting: SortingSemiring

    @abstractmethod
    def add(self, x: LayeredElement, y: LayeredElement) -> LayeredElement: ...

    @abstractmethod
    def mul(self, x: LayeredElement, y: LayeredElement) -> LayeredElement: ...

    @abstractmethod
    def sort_of(self, x: LayeredElement) -> Sort: ...

    @abstractmethod
    def value_cmp(self, x: LayeredElement, y: LayeredElement) -> int:
        """Compare underlying values: -1, 0 or 1."""

    @abstractmethod
    def contains(self, x: Any) -> bool: ...

    @property
    @abstractmethod
    def one(self) -> LayeredElement: ...

    @abstractmethod
    def domain(self) -> Domain: ...

    @abstractmethod
    def _transition(self, x: LayeredElement, m: Sort) -> LayeredElement:
        """Move x to sort m; callers have validated 0 < s(x) <= m."""

    def nu_transition(self, m: Sort, x: LayeredElement) -> LayeredElement:
        """ν_{m,k}(x) for x of sort k.

        Raises:
            InvalidTransitionError: If s(x) = 0 or m < s(x)
        """
        k = self.sort_of(x)
        L = self.sorting
        if not L.is_positive(k) or not L.contains(m) or not L.leq(k, m):
            raise InvalidTransitionError(f"no transition from sort {k} to {m} for {x}")
        return self._transition(x, m)

    def nu_equiv(self, x: LayeredElement, y: LayeredElement) -> bool:
        return self.value_cmp(x, y) == 0

    def nu_leq(self, x: LayeredElement, y: LayeredElement) -> bool:
        return self.value_cmp(x, y) <= 0

    def nu_lt(self, x: LayeredElement, y: LayeredElement) -> bool:
        return self.value_cmp(x, y) < 0

    @property
    def is_finite(self) -> bool:
        return self.domain().is_finite

    def elements(self) -> tuple[LayeredElement, ...]:
        """Carrier in canonical order.

        Raises:
            NotEnumerableError: If the carrier is infinite
        """
        elements = self.domain().elements
        if elements is None:
            raise NotEnumerableError(f"{self.name} is not finite")
        return elements

    def layer(self, ell: Sort) -> tuple[LayeredElement, ...]:
        return tuple(x for x in self.elements() if self.sort_of(x) == ell)

    def is_zero_sort(self, x: LayeredElement) -> bool:
        return self.sort_of(x) == self.sorting.zero

    @cached_property
    def zero(self) -> Optional[LayeredElement]:
        """The element z with z + x = x and z * x = z, if the carrier has one."""
        if not self.is_finite:
            return None
        elements = self.elements()
        for z in elements:
            if all(self.add(z, x) == x and self.mul(z, x) == z for x in elements):
                return z
        return None

    def ghost_image(self, x: LayeredElement) -> LayeredElement:
        """x moved to inf, or to the top sort of a finite L without inf."""
        if self.is_zero_sort(x):
            return x
        top = self.sorting.top()
        if top is None:
            raise InvalidTransitionError(f"{self.sorting.name} has no top sort")
        return self.nu_transition(top, x)

    def layer_unit(self, ell: Sort) -> LayeredElement:
        """e_ell = ν_{ell,1}(1_R).

        Raises:
            InvalidTransitionError: For ell = 0
        """
        return self.nu_transition(ell, self.one)

    def tangible_lift(self, x: LayeredElement) -> Optional[LayeredElement]:
        """An element a1 of sort 1 with ν_{s(x),1}(a1) = x, if any."""
        if self.is_zero_sort(x):
            return None
        for candidate in self.layer(self.sorting.one):
            if self.nu_transition(self.sort_of(x), candidate) == x:
                return candidate
        return None

    def is_ghost(self, a: LayeredElement, ell: Sort) -> bool:
        return self.sorting.is_ghost_sort(self.sort_of(a), ell)

    def surpasses_L(self, a: LayeredElement, b: LayeredElement) -> bool:
        """a = b + c with c an s(b)-ghost, or a ≅ b with a an s(b)-ghost."""
        if a == b:
            return True
        return self.nu_leq(b, a) and self.is_ghost(a, self.sort_of(b))

    def surpasses_Lnu(self, a: LayeredElement, b: LayeredElement) -> bool:
        return self.nu_equiv(a, b) and self.surpasses_L(a, b)

    def power(self, x: LayeredElement, m: int) -> LayeredElement:
        result = x
        for _ in range(m - 1):
            result = self.mul(result, x)
        return result

    def sum(self, items: Iterable[LayeredElement]) -> LayeredElement:
        return reduce(self.add, items)

    def product(self, items: Iterable[LayeredElement]) -> LayeredElement:
        return reduce(self.mul, items, self.one)

    def sample(self, rng: Any) -> LayeredElement:
        return self.domain().draw(rng)

    def __repr__(self) -> str:
        return self.name


class ConstructedSemiring(LayeredSemiring):
    """R(L, M)_a: carrier (L* x (M minus a)) together with {0} x a.

    With ``whole_zero_layer`` every value may sit at sort 0 and sorts multiply
    freely, giving the uniform instance with an extra copy e_0 R_1.
    """

    def __init__(
        self,
        sorting: SortingSemiring,
        base: ValuedMonoid,
        ideal: MonoidIdeal,
        *,
        whole_zero_layer: bool = False,
        name: Optional[str] = None,
    ):
        self.sorting = sorting
        self.base = base
        self.ideal = ideal
        self.whole_zero_layer = whole_zero_layer
        self.name = name or f"R({sorting.name}, {base.name})"

    @property
    def mode(self) -> LayeredMode:
        if self.ideal.is_empty and not self.whole_zero_layer:
            return LayeredMode.NO_ZERO_LAYER
        return LayeredMode.WITH_ZERO_LAYER

    @property
    def one(self) -> LayeredElement:
        return LayeredElement(self.base.one, self.sorting.one)

    def element(self, value: Any, sort: Sort) -> LayeredElement:
        """Build <value>^sort, checking carrier membership.

        Raises:
            DomainMismatchError: If the pair is not in the carrier
        """
        x = LayeredElement(value, sort)
        if not self.contains(x):
            raise DomainMismatchError(f"{x} is not an element of {self.name}")
        return x

    def contains(self, x: Any) -> bool:
        if not isinstance(x, LayeredElement):
            return False
        if not self.base.contains(x.value) or not self.sorting.contains(x.sort):
            return False
        if self.whole_zero_layer:
            return True
        if x.sort == self.sorting.zero:
            return x.value in self.ideal
        return x.value not in self.ideal

    def mul(self, x: LayeredElement, y: LayeredElement) -> LayeredElement:
        product = self.base.mul(x.value, y.value)
        if product in self.ideal:
            return LayeredElement(product, self.sorting.zero)
        return LayeredElement(product, self.sorting.mul(x.sort, y.sort))

    def add(self, x: LayeredElement, y: LayeredElement) -> LayeredElement:
        order = self.base.g_cmp(x.value, y.value)
        if order > 0:
            return x
        if order < 0:
            return y
        return LayeredElement(x.value, self.sorting.add(x.sort, y.sort))

    def sort_of(self, x: LayeredElement) -> Sort:
        return x.sort

    def value_cmp(self, x: LayeredElement, y: LayeredElement) -> int:
        return self.base.g_cmp(x.value, y.value)

    def _transition(self, x: LayeredElement, m: Sort) -> LayeredElement:
        return LayeredElement(x.value, m)

    def tangible_lift(self, x: LayeredElement) -> Optional[LayeredElement]:
        if self.is_zero_sort(x):
            return None
        return LayeredElement(x.value, self.sorting.one)

    def _enumerate(self) -> Iterator[LayeredElement]:
        L = self.sorting
        for value in self.base.elements():
            if self.whole_zero_layer:
                sorts = L.elements()
            elif value in self.ideal:
                sorts = (L.zero,)
            else:
                sorts = L.positive_sorts()
            for sort in sorts:
                yield LayeredElement(value, sort)

    def _sample(self, rng: Any) -> LayeredElement:
        value = self.base.sample(rng)
        if self.whole_zero_layer:
            return LayeredElement(value, self.sorting.sample(rng))
        if value in self.ideal:
            return LayeredElement(value, self.sorting.zero)
        return LayeredElement(value, self.sorting.sample_positive(rng))

    @cached_property
    def _domain(self) -> Domain:
        if self.sorting.is_finite and self.base.is_finite:
            return Domain(elements=tuple(self._enumerate()))
        return Domain(sampler=self._sample)

    def domain(self) -> Domain:
        return self._domain

    def with_sorting(self, sorting: SortingSemiring, name: Optional[str] = None) -> "ConstructedSemiring":
        """Same base and ideal over another sorting semiring."""
        return ConstructedSemiring(
            sorting,
            self.base,
            self.ideal,
            whole_zero_layer=self.whole_zero_layer,
            name=name,
        )


class SubSemiring(LayeredSemiring):
    """A finite subset of a parent closed under + and *."""

    def __init__(self, parent: LayeredSemiring, members: Iterable[LayeredElement], name: str):
        self.parent = parent
        self.sorting = parent.sorting
        self.name = name
        member_set = set(members)
        self._elements = tuple(x for x in parent.elements() if x in member_set)
        self._members = frozenset(self._elements)

    @property
    def one(self) -> LayeredElement:
        return self.parent.one

    def add(self, x: LayeredElement, y: LayeredElement) -> LayeredElement:
        return self.parent.add(x, y)

    def mul(self, x: LayeredElement, y: LayeredElement) -> LayeredElement:
        return self.parent.mul(x, y)

    def sort_of(self, x: LayeredElement) -> Sort:
        return self.parent.sort_of(x)

    def value_cmp(self, x: LayeredElement, y: LayeredElement) -> int:
        return self.parent.value_cmp(x, y)

    def contains(self, x: Any) -> bool:
        return x in self._members

    def domain(self) -> Domain:
        return Domain(elements=self._elements)

    def _transition(self, x: LayeredElement, m: Sort) -> LayeredElement:
        return self.parent.nu_transition(m, x)


@dataclass(frozen=True, eq=False)
class LayeredMap:
    """A map phi between layered semirings with an optional sort map rho."""

    name: str
    src: LayeredSemiring
    dst: LayeredSemiring
    phi: Callable[[LayeredElement], LayeredElement]
    rho: Optional[Callable[[Sort], Sort]] = None

    def __call__(self, x: LayeredElement) -> LayeredElement:
        return self.phi(x)


def identity_map(R: LayeredSemiring) -> LayeredMap:
    return LayeredMap(name=f"id[{R.name}]", src=R, dst=R, phi=lambda x: x, rho=lambda s: s)


def compose_maps(first: LayeredMap, second: LayeredMap) -> LayeredMap:
    """second after first; the sort maps compose when both are present."""
    rho = None
    if first.rho is not None and second.rho is not None:
        rho_first, rho_second = first.rho, second.rho
        rho = lambda s: rho_second(rho_first(s))  # noqa: E731
    return LayeredMap(
        name=f"{second.name}.{first.name}",
        src=first.src,
        dst=second.dst,
        phi=lambda x: second.phi(first.phi(x)),
        rho=rho,
    )


class QuotientSemiring(LayeredSemiring):
    """Rees quotient collapsing a ν-upper ideal to one class of sort 0."""

    def __init__(
        self,
        parent: LayeredSemiring,
        in_ideal: Callable[[LayeredElement], bool],
        has_class: bool,
        name: str,
    ):
        self.parent = parent
        self.sorting = parent.sorting
        self.in_ideal = in_ideal
        self.has_class = has_class
        self.name = name
        self.top_class = LayeredElement(ValueSymbol.TOP, parent.sorting.zero)

    def collapse(self, x: LayeredElement) -> LayeredElement:
        if x == self.top_class or self.in_ideal(x):
            return self.top_class
        return x

    @property
    def one(self) -> LayeredElement:
        return self.parent.one

    def add(self, x: LayeredElement, y: LayeredElement) -> LayeredElement:
        if self.top_class in (x, y):
            return self.top_class
        return self.collapse(self.parent.add(x, y))

    def mul(self, x: LayeredElement, y: LayeredElement) -> LayeredElement:
        if self.top_class in (x, y):
            return self.top_class
        return self.collapse(self.parent.mul(x, y))

    def sort_of(self, x: LayeredElement) -> Sort:
        if x == self.top_class:
            return self.sorting.zero
        return self.parent.sort_of(x)

    def value_cmp(self, x: LayeredElement, y: LayeredElement) -> int:
        x_top, y_top = x == self.top_class, y == self.top_class
        if x_top or y_top:
            return int(x_top) - int(y_top)
        return self.parent.value_cmp(x, y)

    def contains(self, x: Any) -> bool:
        if x == self.top_class:
            return self.has_class
        return self.parent.contains(x) and not self.in_ideal(x)

    @cached_property
    def _domain(self) -> Domain:
        parent_domain = self.parent.domain()
        if parent_domain.elements is not None:
            kept = tuple(x for x in parent_domain.elements if not self.in_ideal(x))
            return Domain(elements=kept + ((self.top_class,) if self.has_class else ()))
        return Domain(sampler=lambda rng: self.collapse(parent_domain.draw(rng)))

    def domain(self) -> Domain:
        return self._domain

    def _transition(self, x: LayeredElement, m: Sort) -> LayeredElement:
        return self.collapse(self.parent.nu_transition(m, x))


def build_layered(
    L: SortingSemiring,
    base: ValuedMonoid,
    ideal: Union[MonoidIdeal, IdealChoice] = AUTO,
    *,
    name: Optional[str] = None,
) -> ConstructedSemiring:
    """Build R(L, M)_a.

    Args:
        L: Sorting semiring
        base: Valued monoid, finite or declared cancellative
        ideal: AUTO for the noncancellative ideal, or an explicit ideal containing it
        name: Optional display name

    Returns:
        ConstructedSemiring; its zero layer is empty iff the ideal is

    Raises:
        IdealTooSmallError: If a supplied ideal omits a noncancellative product
        NotAnIdealError: If a supplied ideal is not multiplicatively closed
        NotEnumerableError: If AUTO is requested for an undeclared infinite monoid
    """
    required = noncancellative_ideal(base)
    if ideal is AUTO:
        chosen = required
    else:
        assert isinstance(ideal, MonoidIdeal)
        chosen = ideal
        if base.is_finite:
            missing = [z for z in required.elements or () if z not in chosen]
            if missing:
                raise IdealTooSmallError(
                    f"ideal omits noncancellative products {missing} of {base.name}"
                )
            validate_ideal(chosen, base)
    if base.one in chosen:
        raise InvalidIdealError(f"ideal of {base.name} contains the identity")
    semiring = ConstructedSemiring(L, base, chosen, name=name)
    logger.info("built %s (%s)", semiring.name, semiring.mode.value)
    return semiring


def naive_layered(L: SortingSemiring, base: ValuedMonoid) -> ConstructedSemiring:
    """R(L*, M) with the ideal forced empty, even over a noncancellative M."""
    logger.warning("building %s without a zero layer", base.name)
    return ConstructedSemiring(L, base, EMPTY_IDEAL, name=f"naive R({L.name}, {base.name})")


def tangible_span(R: LayeredSemiring) -> "TangibleSpan":
    """Smallest sub-semiring containing R_1.

    Raises:
        NotEnumerableError: If R is infinite
    """
    elements = R.elements()
    generated = set(R.layer(R.sorting.one))
    frontier = list(generated)
    while frontier:
        fresh = []
        current = list(generated)
        for x in frontier:
            for y in current:
                for z in (R.add(x, y), R.mul(x, y)):
                    if z not in generated:
                        generated.add(z)
                        fresh.append(z)
        frontier = fresh
    span = SubSemiring(R, generated, name=f"span({R.name})")
    return TangibleSpan(span=span, tangibly_generated=len(span.elements()) == len(elements))


@dataclass
class TangibleSpan:
    span: SubSemiring
    tangibly_generated: bool


def quotient_by_upper_ideal(
    R: LayeredSemiring,
    threshold: LayeredElement,
    strict: bool = False,
    include_zero_layer: bool = True,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
) -> tuple[QuotientSemiring, LayeredMap]:
    """Collapse {r : r >=nu t} (or >nu with strict) to a single class.

    Args:
        R: Layered semiring over a positive cone
        threshold: Element t of positive sort
        strict: Use r >nu t instead of r >=nu t
        include_zero_layer: Let R_0 elements join the ideal
        budget: Samples used to validate the ideal on infinite carriers
        seed: Sampling seed

    Returns:
        The quotient and its projection

    Raises:
        InvalidIdealError: If the threshold is not of positive sort or the set is
            not closed under + and * by R
    """
    if not R.contains(threshold) or R.is_zero_sort(threshold):
        raise InvalidIdealError(f"threshold {threshold} must be an element of positive sort")

    def in_ideal(x: LayeredElement) -> bool:
        above = R.nu_lt(threshold, x) if strict else R.nu_leq(threshold, x)
        if not above:
            return False
        return include_zero_layer or not R.is_zero_sort(x)

    domain = R.domain()
    if domain.elements is not None:
        members = [x for x in domain.elements if in_ideal(x)]
        pairs: Iterable[tuple[LayeredElement, LayeredElement]] = (
            (a, c) for a in members for c in domain.elements
        )
        has_class = bool(members)
    else:
        rng = LawChecker(seed=seed).rng("quotient")
        samples = [domain.draw(rng) for _ in range(budget)]
        pairs = ((a, c) for a in samples if in_ideal(a) for c in samples[:50])
        has_class = True
    for a, c in pairs:
        if not in_ideal(R.mul(a, c)) or not in_ideal(R.add(a, c)):
            raise InvalidIdealError(
                f"ideal above {threshold} is not absorbing: {a} with {c} leaves it"
            )
    if in_ideal(R.one):
        raise InvalidIdealError(f"ideal above {threshold} contains the identity")
    quotient = QuotientSemiring(
        R, in_ideal, has_class, name=f"{R.name}/{'>' if strict else '>='}{threshold}"
    )
    projection = LayeredMap(
        name=f"project[{quotient.name}]",
        src=R,
        dst=quotient,
        phi=quotient.collapse,
        rho=lambda s: s,
    )
    return quotient, projection


def _checker(budget: int, seed: int, exhaustive_limit: int) -> LawChecker:
    return LawChecker(budget=budget, seed=seed, exhaustive_limit=exhaustive_limit)


def _sorts_from(L: SortingSemiring, k: Sort) -> list[Sort]:
    """Sorts m >= k used to instantiate transition laws."""
    if L.carrier is not None:
        return [m for m in L.carrier if L.is_positive(m) and L.leq(k, m)]
    if k == INFINITY:
        return [INFINITY]
    return [k, k + 1, k + 3, INFINITY]  # type: ignore[operator]


def semiring_laws(R: LayeredSemiring, checker: LawChecker) -> list[LawResult]:
    """Closure, associativity, commutativity, distributivity and the unit."""
    domain = R.domain()
    add, mul = R.add, R.mul
    one = R.one
    laws = [
        ("closure", 2, lambda a, b: R.contains(add(a, b)) and R.contains(mul(a, b))),
        ("add_associativity", 3, lambda a, b, c: add(add(a, b), c) == add(a, add(b, c))),
        ("add_commutativity", 2, lambda a, b: add(a, b) == add(b, a)),
        ("mul_associativity", 3, lambda a, b, c: mul(mul(a, b), c) == mul(a, mul(b, c))),
        ("mul_commutativity", 2, lambda a, b: mul(a, b) == mul(b, a)),
        (
            "distributivity",
            3,
            lambda a, b, c: mul(a, add(b, c)) == add(mul(a, b), mul(a, c)),
        ),
        ("mul_identity", 1, lambda a: mul(a, one) == a),
    ]
    return [checker.check(name, domain, arity, predicate) for name, arity, predicate in laws]


def check_semiring_laws(
    R: LayeredSemiring,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    report = CheckReport(title=f"semiring laws of {R.name}")
    for result in semiring_laws(R, _checker(budget, seed, exhaustive_limit)):
        report.add(result)
    return report


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _pointedness(R: LayeredSemiring, checker: LawChecker) -> LawResult:
    has_zero = R.zero is not None
    if not isinstance(R, ConstructedSemiring):
        return checker.fact("pointedness", True, note=f"zero element: {_yes(has_zero)}")
    base = R.base
    notes = [f"zero element: {_yes(has_zero)}"]
    if base.carrier is None:
        pointed = False
        notes.append("M pointed: no (infinite M)")
    else:
        absorbing = [z for z in base.carrier if base.is_absorbing(z)]
        minimal = [
            z for z in absorbing if all(base.g_cmp(z, a) <= 0 for a in base.carrier)
        ]
        pointed = bool(minimal)
        notes.append(f"M pointed: {_yes(pointed)}")
        for z in absorbing:
            if z not in minimal:
                notes.append(f"absorbing {format_value(z)} of M is not nu-minimal")
    return checker.fact(
        "pointedness", has_zero == pointed, witness=(R.name,), note="; ".join(notes)
    )


def _primeness(R: LayeredSemiring, checker: LawChecker) -> LawResult:
    domain = R.domain()

    def closed_pair(a: LayeredElement, b: LayeredElement) -> bool:
        return R.is_zero_sort(a) or R.is_zero_sort(b) or not R.is_zero_sort(R.mul(a, b))

    closure = checker.check("complement_closed", domain, 2, closed_pair)
    if domain.elements is not None and closure.sampled:
        closure = checker.check_over(
            "complement_closed",
            ((a, b) for a in domain.elements for b in domain.elements),
            closed_pair,
        )
    closed = closure.passed
    if not isinstance(R, ConstructedSemiring):
        return checker.fact("ideal_primeness", True, note=f"R\\R0 closed: {_yes(closed)}")
    try:
        prime = is_prime(R.ideal, R.base)
    except NotEnumerableError:
        return checker.fact(
            "ideal_primeness", True, note=f"ideal prime: undecided; R\\R0 closed: {_yes(closed)}"
        )
    return checker.fact(
        "ideal_primeness",
        prime == closed,
        witness=closure.witness or (R.name,),
        note=f"ideal prime: {_yes(prime)}; R\\R0 closed: {_yes(closed)}",
    )


def _zero_layer_generated(R: LayeredSemiring, checker: LawChecker) -> LawResult:
    if not R.is_finite:
        return checker.fact("zero_layer_generated", True, note="infinite carrier, not enumerated")
    elements = R.elements()
    tangible = [x for x in elements if not R.is_zero_sort(x)]
    products = {R.mul(a, b) for a in tangible for b in tangible}
    stray = [x for x in elements if R.is_zero_sort(x) and x not in products]
    if not stray:
        return checker.fact("zero_layer_generated", True, note="every R0 element is a product")
    return checker.fact(
        "zero_layer_generated",
        True,
        note=f"{len(stray)} R0 elements are not products of non-R0 elements",
    )


def layered_laws(R: LayeredSemiring, checker: LawChecker) -> list[LawResult]:
    """Axioms A1-A6, B and the derived layer properties."""
    L = R.sorting
    domain = R.domain()
    add, mul, s = R.add, R.mul, R.sort_of
    zero = L.zero
    positive = L.is_positive
    results: list[LawResult] = []

    results.append(
        checker.fact("A1_unit_tangible", s(R.one) == L.one, witness=(R.one,))
    )

    def a2(a: LayeredElement, b: LayeredElement) -> bool:
        return s(mul(a, b)) in (L.mul(s(a), s(b)), zero)

    def a3(a: LayeredElement, b: LayeredElement) -> bool:
        if not (positive(s(a)) and positive(s(b))):
            return True
        product = mul(a, b)
        for m in _sorts_from(L, s(a)):
            for m2 in _sorts_from(L, s(b)):
                lifted = mul(R.nu_transition(m, a), R.nu_transition(m2, b))
                if R.is_zero_sort(product):
                    if lifted != product:
                        return False
                    continue
                try:
                    expected = R.nu_transition(L.mul(m, m2), product)
                except InvalidTransitionError:
                    return False
                if lifted != expected:
                    return False
        return True

    def a4(a: LayeredElement) -> bool:
        if not positive(s(a)):
            return True
        sorts = _sorts_from(L, s(a))
        return all(
            add(R.nu_transition(m, a), R.nu_transition(m2, a))
            == R.nu_transition(L.add(m, m2), a)
            for m in sorts
            for m2 in sorts
        )

    def a5(a: LayeredElement, b: LayeredElement) -> bool:
        if not (positive(s(a)) and positive(s(b))) or R.nu_equiv(a, b):
            return True
        total = add(a, b)
        for m in _sorts_from(L, L.add(s(a), s(b))):
            if R.nu_transition(m, total) != add(R.nu_transition(m, a), R.nu_transition(m, b)):
                return False
        return True

    def a6(a: LayeredElement, b: LayeredElement) -> bool:
        if s(a) != zero:
            return True
        closed_sum = s(b) != zero or s(add(a, b)) == zero
        return closed_sum and s(mul(a, b)) == zero

    def supertropical(a: LayeredElement, b: LayeredElement) -> bool:
        if not R.nu_equiv(a, b):
            return True
        total = add(a, b)
        if s(total) != L.add(s(a), s(b)) or not R.nu_equiv(total, a):
            return False
        return s(a) != INFINITY or total == a

    def bipotent(a: LayeredElement, b: LayeredElement) -> bool:
        return R.nu_equiv(a, b) or add(a, b) in (a, b)

    def noncancellative(a: LayeredElement, b: LayeredElement, c: LayeredElement) -> bool:
        if R.nu_equiv(b, c) or not R.nu_equiv(mul(a, b), mul(a, c)):
            return True
        return s(mul(a, b)) in (zero, INFINITY)

    def congruence(a: LayeredElement, a2: LayeredElement, b: LayeredElement) -> bool:
        if not R.nu_equiv(a, a2):
            return True
        return R.nu_equiv(mul(a, b), mul(a2, b)) and R.nu_equiv(add(a, b), add(a2, b))

    def tangible_monoid(a: LayeredElement, b: LayeredElement) -> bool:
        low = (zero, L.one)
        return s(a) not in low or s(b) not in low or s(mul(a, b)) in low

    def idempotent_layers(a: LayeredElement, b: LayeredElement) -> bool:
        nonzero = {s(x) for x in (a, b) if s(x) != zero}
        if len(nonzero) != 1:
            return True
        ell = nonzero.pop()
        if L.mul(ell, ell) != ell:
            return True
        return s(mul(a, b)) in (zero, ell)

    def transitions(a: LayeredElement) -> bool:
        if not positive(s(a)):
            return True
        k = s(a)
        if R.nu_transition(k, a) != a:
            return False
        for ell in _sorts_from(L, k):
            for m in _sorts_from(L, ell):
                if R.nu_transition(m, R.nu_transition(ell, a)) != R.nu_transition(m, a):
                    return False
        return True

    laws: list[tuple[str, int, Callable[..., bool]]] = [
        ("A2_sort_products", 2, a2),
        ("A3_transition_products", 2, a3),
        ("A4_transition_sums", 1, a4),
        ("A5_transition_sums_distinct", 2, a5),
        ("A6_zero_layer_ideal", 2, a6),
        ("B_supertropicality", 2, supertropical),
        ("nu_bipotence", 2, bipotent),
        ("noncancellative_sorts", 3, noncancellative),
        ("nu_congruence", 3, congruence),
        ("tangible_submonoid", 2, tangible_monoid),
        ("idempotent_layer_monoids", 2, idempotent_layers),
        ("transition_composition", 1, transitions),
    ]
    results.extend(checker.check(name, domain, arity, law) for name, arity, law in laws)

    zero_element = R.zero
    results.append(
        checker.fact(
            "zero_in_zero_layer",
            zero_element is None or s(zero_element) == zero,
            witness=(zero_element,) if zero_element is not None else (),
            note="" if zero_element is not None else "no zero element",
        )
    )
    results.append(_pointedness(R, checker))
    results.append(_primeness(R, checker))
    results.append(_zero_layer_generated(R, checker))
    return results


def check_axioms(
    R: LayeredSemiring,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """Semiring laws plus the layered axioms and diagnoses.

    Args:
        R: Instance to check
        budget: Samples per law when enumeration is too large
        seed: Sampling seed
        exhaustive_limit: Largest tuple count enumerated exhaustively

    Returns:
        CheckReport, exhaustive wherever the carrier allows
    """
    checker = _checker(budget, seed, exhaustive_limit)
    report = CheckReport(title=f"axioms of {R.name}")
    for result in semiring_laws(R, checker) + layered_laws(R, checker):
        report.add(result)
    logger.info("checked %d laws on %s", len(report.results), R.name)
    return report


def check_surpassing(
    R: LayeredSemiring,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    strict: bool = False,
) -> CheckReport:
    """Half-congruence laws of the two surpassing relations.

    With ``strict`` the diagonal compatibilities of the L-relation are checked
    without skipping the configurations in which they are known to fail.
    """
    checker = _checker(budget, seed, exhaustive_limit)
    domain = R.domain()
    add, mul = R.add, R.mul
    report = CheckReport(title=f"surpassing relations of {R.name}")

    def between(a: LayeredElement, b: LayeredElement, d: LayeredElement) -> bool:
        return R.nu_lt(b, a) and R.nu_leq(b, d) and R.nu_lt(d, a)

    def drops_to_zero_layer(a: LayeredElement, b: LayeredElement, d: LayeredElement) -> bool:
        return R.is_zero_sort(mul(a, d)) and not R.is_zero_sort(mul(b, d))

    for tag, relation in (("L", R.surpasses_L), ("Lnu", R.surpasses_Lnu)):
        rel = relation
        restricted = tag == "L" and not strict

        def add_compat(a: Any, b: Any, d: Any, rel: Callable = rel, skip: bool = restricted) -> bool:
            if not rel(a, b) or (skip and between(a, b, d)):
                return True
            return rel(add(a, d), add(b, d))

        def mul_compat(a: Any, b: Any, d: Any, rel: Callable = rel, skip: bool = restricted) -> bool:
            if not rel(a, b) or (skip and drops_to_zero_layer(a, b, d)):
                return True
            return rel(mul(a, d), mul(b, d))

        report.add(checker.check(f"surpass_{tag}_reflexive", domain, 1, lambda a, rel=rel: rel(a, a)))
        report.add(
            checker.check(
                f"surpass_{tag}_transitive",
                domain,
                3,
                lambda a, b, c, rel=rel: not (rel(a, b) and rel(b, c)) or rel(a, c),
            )
        )
        report.add(
            checker.check(
                f"surpass_{tag}_add_compat",
                domain,
                3,
                add_compat,
                note=ADD_COMPAT_NOTE if restricted else "",
            )
        )
        report.add(
            checker.check(
                f"surpass_{tag}_mul_compat",
                domain,
                3,
                mul_compat,
                note=MUL_COMPAT_NOTE if restricted else "",
            )
        )

    def sum_is_ghost(a: LayeredElement, b: LayeredElement) -> bool:
        if not R.surpasses_L(a, b) or not R.sorting.is_positive(R.sort_of(b)):
            return True
        return R.is_ghost(add(a, b), R.sort_of(b))

    report.add(checker.check("surpass_L_sum_ghost", domain, 2, sum_is_ghost))
    return report


def check_frobenius(
    R: LayeredSemiring,
    powers: Iterable[int] = (2, 3, 4),
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """(a+b)^m surpasses a^m + b^m in the (L, ν) sense for each m."""
    checker = _checker(budget, seed, exhaustive_limit)
    domain = R.domain()
    report = CheckReport(title=f"Frobenius property of {R.name}")
    for m in powers:
        report.add(
            checker.check(
                f"frobenius_m{m}",
                domain,
                2,
                lambda a, b, m=m: R.surpasses_Lnu(
                    R.power(R.add(a, b), m), R.add(R.power(a, m), R.power(b, m))
                ),
            )
        )
    return report
