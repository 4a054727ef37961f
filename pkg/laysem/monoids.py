"""Valued monoids (M, G, v), their ideals and morphisms."""

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional

from laysem.errors import (
    InvalidThresholdError,
    NotAnIdealError,
    NotEnumerableError,
    ParseError,
)
from laysem.notation import parse_fraction, parse_positive_int
from laysem.reports import (
    DEFAULT_BUDGET,
    DEFAULT_EXHAUSTIVE_LIMIT,
    DEFAULT_SEED,
    CheckReport,
    Domain,
    LawChecker,
)

logger = logging.getLogger(__name__)


class ValueSymbol(str, Enum):
    """Sentinel values adjoined by derived constructions."""

    BOTTOM = "-inf"
    TOP = "top"

    def __str__(self) -> str:
        return self.value


def _identity(value: Any) -> Any:
    return value


@dataclass(frozen=True, eq=False)
class ValuedMonoid:
    """A commutative monoid M with an m-valuation v onto an ordered monoid G.

    G is never materialized: it is the image of ``valuation`` compared with
    ``g_leq`` and multiplied with ``g_mul_op`` (defaulting to the monoid product,
    which is right whenever v is the identity).
    """

    name: str
    mul_op: Callable[[Any, Any], Any]
    one: Any
    g_leq: Callable[[Any, Any], bool]
    valuation: Callable[[Any], Any] = _identity
    g_mul_op: Optional[Callable[[Any, Any], Any]] = None
    carrier: Optional[tuple[Any, ...]] = None
    sampler: Optional[Callable[[random.Random], Any]] = None
    member_op: Optional[Callable[[Any], bool]] = None
    coerce_op: Optional[Callable[[Fraction], Any]] = None
    cancellative: bool = False
    declared_ideal: Optional[Callable[[Any], bool]] = None
    positive: bool = False

    @property
    def is_finite(self) -> bool:
        return self.carrier is not None

    def mul(self, a: Any, b: Any) -> Any:
        return self.mul_op(a, b)

    def v(self, a: Any) -> Any:
        return self.valuation(a)

    def g_mul(self, x: Any, y: Any) -> Any:
        return (self.g_mul_op or self.mul_op)(x, y)

    def g_compare(self, x: Any, y: Any) -> int:
        """Compare two G-values: -1, 0 or 1."""
        below = self.g_leq(x, y)
        above = self.g_leq(y, x)
        if below and above:
            return 0
        return -1 if below else 1

    def g_cmp(self, a: Any, b: Any) -> int:
        """Compare v(a) with v(b)."""
        return self.g_compare(self.v(a), self.v(b))

    def contains(self, a: Any) -> bool:
        if self.carrier is not None:
            return a in self.carrier
        return self.member_op is not None and self.member_op(a)

    def elements(self) -> tuple[Any, ...]:
        """Return the carrier in canonical order.

        Raises:
            NotEnumerableError: If M is infinite
        """
        if self.carrier is None:
            raise NotEnumerableError(f"monoid {self.name} is not finite")
        return self.carrier

    def sample(self, rng: random.Random) -> Any:
        if self.carrier is not None:
            return rng.choice(self.carrier)
        assert self.sampler is not None, f"{self.name} has no sampler"
        return self.sampler(rng)

    def domain(self) -> Domain:
        return Domain(elements=self.carrier, sampler=None if self.carrier else self.sampler)

    def coerce(self, value: Fraction) -> Any:
        """Turn a parsed rational into a carrier value.

        Raises:
            ParseError: If the value is not in M
        """
        converted = self.coerce_op(value) if self.coerce_op else value
        if not self.contains(converted):
            raise ParseError(f"value {value} is not in monoid {self.name}")
        return converted

    def is_absorbing(self, a: Any) -> bool:
        return all(self.mul(a, b) == a for b in self.elements())

    def truncate(self, q: Any) -> "ValuedMonoid":
        """ν-truncation of the positive cone at q.

        The carrier becomes {a : 1 <= a < q} together with q, and products whose
        value reaches v(q) saturate to q.

        Raises:
            InvalidThresholdError: If q is not in M or not above the identity
        """
        if not self.contains(q) or self.g_cmp(q, self.one) <= 0:
            raise InvalidThresholdError(f"threshold {q} must exceed the identity of {self.name}")
        base = self

        def in_cone(a: Any) -> bool:
            return base.contains(a) and (
                a == q or (base.g_cmp(a, base.one) >= 0 and base.g_cmp(a, q) < 0)
            )

        def saturate(a: Any, b: Any) -> Any:
            product = base.mul(a, b)
            return q if base.g_cmp(product, q) >= 0 else product

        carrier = None
        sampler = None
        if self.carrier is not None:
            carrier = tuple(a for a in self.carrier if in_cone(a) and a != q) + (q,)
        else:

            def sampler(rng: random.Random) -> Any:
                if rng.random() < 0.15:
                    return q
                for _ in range(50):
                    candidate = base.sample(rng)
                    if in_cone(candidate):
                        return candidate
                return q

        logger.debug("nu-truncating %s at %s", self.name, q)
        return ValuedMonoid(
            name=f"{self.name}|{q}",
            mul_op=saturate,
            one=self.one,
            g_leq=self.g_leq,
            valuation=self.valuation,
            g_mul_op=self.g_mul_op,
            carrier=carrier,
            sampler=sampler,
            member_op=in_cone,
            coerce_op=self.coerce_op,
            cancellative=False,
            declared_ideal=lambda a: base.g_cmp(a, q) >= 0,
            positive=True,
        )

    def positive_cone(self) -> "ValuedMonoid":
        """The submonoid {a : v(a) >= v(1)}."""
        if self.positive:
            return self
        base = self

        def in_cone(a: Any) -> bool:
            return base.contains(a) and base.g_cmp(a, base.one) >= 0

        carrier = None
        sampler = None
        if self.carrier is not None:
            carrier = tuple(a for a in self.carrier if in_cone(a))
        else:

            def sampler(rng: random.Random) -> Any:
                for _ in range(50):
                    candidate = base.sample(rng)
                    if in_cone(candidate):
                        return candidate
                return base.one

        return ValuedMonoid(
            name=f"{self.name}+",
            mul_op=self.mul_op,
            one=self.one,
            g_leq=self.g_leq,
            valuation=self.valuation,
            g_mul_op=self.g_mul_op,
            carrier=carrier,
            sampler=sampler,
            member_op=in_cone,
            coerce_op=self.coerce_op,
            cancellative=self.cancellative,
            positive=True,
        )

    def __repr__(self) -> str:
        return f"ValuedMonoid({self.name})"


@dataclass(frozen=True, eq=False)
class MonoidIdeal:
    """A multiplicatively closed subset, by predicate plus cached elements."""

    predicate: Callable[[Any], bool]
    elements: Optional[tuple[Any, ...]] = None

    def __contains__(self, value: Any) -> bool:
        return self.predicate(value)

    @property
    def is_empty(self) -> bool:
        return self.elements is not None and not self.elements

    @classmethod
    def from_elements(cls, values: Iterable[Any]) -> "MonoidIdeal":
        members = tuple(dict.fromkeys(values))
        lookup = frozenset(members)
        return cls(predicate=lambda value: value in lookup, elements=members)

    def __repr__(self) -> str:
        if self.elements is None:
            return "MonoidIdeal(<predicate>)"
        return f"MonoidIdeal({list(self.elements)})"


EMPTY_IDEAL = MonoidIdeal(predicate=lambda value: False, elements=())


@dataclass(frozen=True, eq=False)
class TripleMorphism:
    """A pair (phi_M, phi_G) between valued monoids."""

    name: str
    src: ValuedMonoid
    dst: ValuedMonoid
    phi_M: Callable[[Any], Any]
    phi_G: Callable[[Any], Any]

    def __call__(self, a: Any) -> Any:
        return self.phi_M(a)


@dataclass
class AbsorbingReport:
    """Absorbing structure of a finite monoid."""

    partially_absorbing: list[Any] = field(default_factory=list)
    absorbing: list[Any] = field(default_factory=list)
    singleton_is_absorbing: bool = True


def make_qmax() -> ValuedMonoid:
    """The max-plus monoid (Q, +, 0) ordered by <=, with v the identity."""

    def sample(rng: random.Random) -> Fraction:
        return Fraction(rng.randint(-8, 8), rng.choice((1, 1, 1, 2, 3)))

    return ValuedMonoid(
        name="qmax",
        mul_op=lambda a, b: a + b,
        one=Fraction(0),
        g_leq=lambda x, y: x <= y,
        sampler=sample,
        member_op=lambda a: isinstance(a, (Fraction, int)) and not isinstance(a, bool),
        coerce_op=Fraction,
        cancellative=True,
    )


def make_truncated_nat(q: int) -> ValuedMonoid:
    """The monoid {0, ..., q} under addition saturating at q.

    Raises:
        InvalidThresholdError: If q < 1
    """
    if q < 1:
        raise InvalidThresholdError(f"trunc-nat needs q >= 1, got {q}")

    def coerce(value: Fraction) -> Any:
        if value.denominator != 1:
            raise ParseError(f"value {value} is not an integer in trunc-nat:{q}")
        return int(value)

    return ValuedMonoid(
        name=f"trunc-nat:{q}",
        mul_op=lambda a, b: min(a + b, q),
        one=0,
        g_leq=lambda x, y: x <= y,
        carrier=tuple(range(q + 1)),
        coerce_op=coerce,
        positive=True,
    )


def make_trivial_monoid() -> ValuedMonoid:
    """The one-element monoid {0}."""
    return ValuedMonoid(
        name="trivial",
        mul_op=lambda a, b: 0,
        one=0,
        g_leq=lambda x, y: x <= y,
        carrier=(0,),
        coerce_op=lambda value: int(value) if value.denominator == 1 else value,
        positive=True,
    )


def parse_monoid(text: str) -> ValuedMonoid:
    """Parse the flag grammar ``qmax | trunc-nat:<q>``.

    Raises:
        ParseError: If the text matches no monoid
    """
    token = text.strip()
    if token == "qmax":
        return make_qmax()
    if token.startswith("trunc-nat:"):
        return make_truncated_nat(parse_positive_int(token[len("trunc-nat:"):], "trunc-nat"))
    raise ParseError(f"unknown monoid {text!r} (expected qmax or trunc-nat:<q>)")


def parse_monoid_value(text: str, monoid: ValuedMonoid) -> Any:
    return monoid.coerce(parse_fraction(text))


def noncancellative_ideal(M: ValuedMonoid) -> MonoidIdeal:
    """Ideal of v-noncancellative products.

    z belongs to it when v(z) = v(ab) = v(ac) for some a, b, c with v(b) != v(c).

    Args:
        M: Finite or cancellative-declared valued monoid

    Returns:
        The ideal, with explicit elements when M is finite

    Raises:
        NotEnumerableError: If M is infinite and declares neither cancellativity
            nor an ideal
    """
    if M.cancellative:
        return EMPTY_IDEAL
    if M.carrier is None:
        if M.declared_ideal is not None:
            return MonoidIdeal(predicate=M.declared_ideal)
        raise NotEnumerableError(
            f"monoid {M.name} is infinite and not declared cancellative"
        )
    noncancellative_values = []
    for a in M.carrier:
        factors_by_value: dict[Any, Any] = {}
        for b in M.carrier:
            product_value = M.v(M.mul(a, b))
            seen = factors_by_value.setdefault(product_value, M.v(b))
            if M.g_compare(seen, M.v(b)) != 0:
                noncancellative_values.append(product_value)
    members = [z for z in M.carrier if any(M.g_compare(M.v(z), g) == 0 for g in noncancellative_values)]
    logger.debug("noncancellative ideal of %s: %s", M.name, members)
    return MonoidIdeal.from_elements(members)


def validate_ideal(ideal: MonoidIdeal, M: ValuedMonoid) -> None:
    """Check multiplicative closure on a finite monoid.

    Raises:
        NotAnIdealError: With the first (a, b) whose product leaves the ideal
    """
    for a in ideal.elements or ():
        for b in M.elements():
            if M.mul(a, b) not in ideal:
                raise NotAnIdealError(f"{a} is in the ideal but {a}*{b} = {M.mul(a, b)} is not")


def is_prime(ideal: MonoidIdeal, M: ValuedMonoid) -> bool:
    """True when ab in the ideal forces a or b into it.

    Raises:
        NotEnumerableError: For a nonempty ideal of an infinite monoid
    """
    if ideal.is_empty:
        return True
    for a in M.elements():
        for b in M.elements():
            if M.mul(a, b) in ideal and a not in ideal and b not in ideal:
                return False
    return True


def nu_closure(ideal: MonoidIdeal, M: ValuedMonoid) -> MonoidIdeal:
    """All b with v(b) = v(a) for some a in the ideal.

    Ideals of infinite monoids are returned unchanged; the shipped ones are
    already unions of v-classes.
    """
    if ideal.is_empty or M.carrier is None:
        return ideal
    members = ideal.elements or ()
    return MonoidIdeal.from_elements(
        b for b in M.carrier if any(M.g_cmp(a, b) == 0 for a in members)
    )


def absorbing_analysis(M: ValuedMonoid) -> AbsorbingReport:
    """List partially absorbing and absorbing elements of a finite monoid.

    An element a is partially absorbing when ab = a for some b other than the
    identity. A unique partially absorbing element must be absorbing.

    Raises:
        NotEnumerableError: If M is infinite
    """
    carrier = M.elements()
    partial = [a for a in carrier if any(M.mul(a, b) == a for b in carrier if b != M.one)]
    absorbing = [a for a in carrier if M.is_absorbing(a)]
    singleton_is_absorbing = len(partial) != 1 or partial[0] in absorbing
    return AbsorbingReport(
        partially_absorbing=partial,
        absorbing=absorbing,
        singleton_is_absorbing=singleton_is_absorbing,
    )


def identity_triple(M: ValuedMonoid) -> TripleMorphism:
    return TripleMorphism(name=f"id[{M.name}]", src=M, dst=M, phi_M=_identity, phi_G=_identity)


def saturating_projection(src: ValuedMonoid, dst: ValuedMonoid) -> TripleMorphism:
    """a -> min(a, q') from one truncated-nat monoid onto a smaller one."""
    cap = max(dst.elements())

    def project(a: Any) -> Any:
        return min(a, cap)

    return TripleMorphism(
        name=f"{src.name}->{dst.name}", src=src, dst=dst, phi_M=project, phi_G=project
    )


def compose_triple(first: TripleMorphism, second: TripleMorphism) -> TripleMorphism:
    """second after first."""
    return TripleMorphism(
        name=f"{second.name}.{first.name}",
        src=first.src,
        dst=second.dst,
        phi_M=lambda a: second.phi_M(first.phi_M(a)),
        phi_G=lambda g: second.phi_G(first.phi_G(g)),
    )


def check_triple_morphism(
    f: TripleMorphism,
    src: Optional[ValuedMonoid] = None,
    dst: Optional[ValuedMonoid] = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """Check multiplicativity, unit and order preservation, and v' o phi_M = phi_G o v."""
    src = src or f.src
    dst = dst or f.dst
    checker = LawChecker(budget=budget, seed=seed, exhaustive_limit=exhaustive_limit)
    domain = src.domain()
    phi_M, phi_G = f.phi_M, f.phi_G
    report = CheckReport(title=f"triple morphism {f.name}")

    report.add(checker.fact("phi_M_unit", phi_M(src.one) == dst.one, witness=(src.one,)))
    report.add(
        checker.fact(
            "phi_G_unit", phi_G(src.v(src.one)) == dst.v(dst.one), witness=(src.v(src.one),)
        )
    )
    report.add(checker.check("maps_into_target", domain, 1, lambda a: dst.contains(phi_M(a))))
    report.add(
        checker.check(
            "phi_M_multiplicative",
            domain,
            2,
            lambda a, b: phi_M(src.mul(a, b)) == dst.mul(phi_M(a), phi_M(b)),
        )
    )
    report.add(
        checker.check(
            "phi_G_multiplicative",
            domain,
            2,
            lambda a, b: dst.g_compare(
                phi_G(src.g_mul(src.v(a), src.v(b))),
                dst.g_mul(phi_G(src.v(a)), phi_G(src.v(b))),
            )
            == 0,
        )
    )
    report.add(
        checker.check(
            "phi_G_order_preserving",
            domain,
            2,
            lambda a, b: not src.g_leq(src.v(a), src.v(b))
            or dst.g_leq(phi_G(src.v(a)), phi_G(src.v(b))),
        )
    )
    report.add(
        checker.check(
            "compatibility",
            domain,
            1,
            lambda a: dst.g_compare(dst.v(phi_M(a)), phi_G(src.v(a))) == 0,
        )
    )
    return report
