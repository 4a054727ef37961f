"""Finite Puiseux series, layered tropicalization and the layering functors.

Series carry exact rational exponents and coefficients. The valuation is minus the
least exponent of the support, so a series that blows up faster as t -> 0 has the
larger value, matching the max-plus order of qmax.
"""

import itertools
import logging
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

from laysem.core import (
    ConstructedSemiring,
    LayeredElement,
    LayeredMap,
    LayeredSemiring,
    build_layered,
)
from laysem.errors import DomainMismatchError, NotARootError, ParseError, ZeroSeriesError
from laysem.monoids import (
    TripleMorphism,
    ValuedMonoid,
    compose_triple,
    identity_triple,
    make_qmax,
    make_truncated_nat,
    noncancellative_ideal,
    nu_closure,
    saturating_projection,
)
from laysem.morphisms import (
    RingDomain,
    Supervaluation,
    SupervaluationVariant,
    check_supervaluation,
)
from laysem.notation import format_value
from laysem.reports import (
    DEFAULT_BUDGET,
    DEFAULT_EXHAUSTIVE_LIMIT,
    DEFAULT_SEED,
    CheckReport,
    Domain,
    LawChecker,
)
from laysem.sorting import Sort, SortingKind, SortingSemiring, make_sorting

logger = logging.getLogger(__name__)

_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<coeff>\d+(?:/\d+)?)\s*\*\s*t\s*\^\s*\(\s*(?P<exp>[+-]?\s*\d+(?:/\d+)?)\s*\)"
)
_MONOMIAL = re.compile(r"^\s*lambda\s*\^\s*(?P<degree>\d+)\s*:(?P<series>.*)$")


@dataclass(frozen=True)
class PuiseuxSeries:
    """sum c_tau t^tau with finite support; terms sorted by exponent, no zero coefficients."""

    terms: tuple[tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def from_terms(cls, terms: Union[Mapping[Any, Any], Iterable[tuple[Any, Any]]]) -> "PuiseuxSeries":
        """Collect (exponent, coefficient) pairs, merging equal exponents."""
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        support: dict[Fraction, Fraction] = {}
        for exponent, coefficient in pairs:
            key = Fraction(exponent)
            support[key] = support.get(key, Fraction(0)) + Fraction(coefficient)
        return cls(tuple(sorted((e, c) for e, c in support.items() if c != 0)))

    @classmethod
    def zero(cls) -> "PuiseuxSeries":
        return cls()

    @classmethod
    def constant(cls, c: Any) -> "PuiseuxSeries":
        return cls.from_terms([(0, c)])

    @classmethod
    def monomial(cls, c: Any, exponent: Any) -> "PuiseuxSeries":
        return cls.from_terms([(exponent, c)])

    @classmethod
    def parse(cls, text: str, line: Optional[int] = None) -> "PuiseuxSeries":
        """Parse ``±<p/q>*t^(<r/s>)`` terms; a lone ``0`` is the zero series.

        Raises:
            ParseError: On malformed input
        """
        source = text.strip()
        if source == "0":
            return cls.zero()
        if not source:
            raise ParseError("empty series", line)
        terms = []
        position = 0
        while position < len(text):
            if not text[position:].strip():
                break
            match = _TERM.match(text, position)
            if match is None or (terms and match.group("sign") is None):
                raise ParseError(f"malformed series term near {text[position:].strip()!r}", line)
            sign = -1 if match.group("sign") == "-" else 1
            coefficient = sign * Fraction(match.group("coeff"))
            exponent = Fraction(match.group("exp").replace(" ", ""))
            terms.append((exponent, coefficient))
            position = match.end()
        return cls.from_terms(terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def val(self) -> Fraction:
        """Minus the least exponent of the support.

        Raises:
            ZeroSeriesError: For the zero series
        """
        if not self.terms:
            raise ZeroSeriesError("the valuation of the zero series is undefined")
        return -self.terms[0][0]

    def __add__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return PuiseuxSeries.from_terms(self.terms + other.terms)

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return self + (-other)

    def __mul__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return PuiseuxSeries.from_terms(
            (e1 + e2, c1 * c2) for (e1, c1), (e2, c2) in itertools.product(self.terms, other.terms)
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for index, (exponent, coefficient) in enumerate(self.terms):
            body = f"{format_value(abs(coefficient))}*t^({format_value(exponent)})"
            if index == 0:
                parts.append(f"-{body}" if coefficient < 0 else body)
            else:
                parts.append(f"{'-' if coefficient < 0 else '+'} {body}")
        return " ".join(parts)


def puiseux_add(p: PuiseuxSeries, q: PuiseuxSeries) -> PuiseuxSeries:
    return p + q


def puiseux_mul(p: PuiseuxSeries, q: PuiseuxSeries) -> PuiseuxSeries:
    return p * q


def puiseux_neg(p: PuiseuxSeries) -> PuiseuxSeries:
    return -p


def val(p: PuiseuxSeries) -> Fraction:
    return p.val()


def random_series(rng: random.Random, max_terms: int = 3) -> PuiseuxSeries:
    """A nonzero series with exponent denominators <= 6 and coefficients p/q, |p|, q <= 20."""
    while True:
        terms = []
        for _ in range(rng.randint(1, max_terms)):
            exponent = Fraction(rng.randint(-12, 12), rng.randint(1, 6))
            numerator = rng.choice([n for n in range(-20, 21) if n])
            terms.append((exponent, Fraction(numerator, rng.randint(1, 20))))
        series = PuiseuxSeries.from_terms(terms)
        if not series.is_zero:
            return series


def puiseux_field() -> RingDomain:
    """Finite Puiseux series over Q, sampled with random_series."""

    def sample(rng: random.Random) -> PuiseuxSeries:
        if rng.random() < 0.05:
            return PuiseuxSeries.zero()
        return random_series(rng)

    return RingDomain(
        name="K",
        sampler=sample,
        add=puiseux_add,
        mul=puiseux_mul,
        neg=puiseux_neg,
        zero=PuiseuxSeries.zero(),
        one=PuiseuxSeries.constant(1),
    )


def default_target() -> ConstructedSemiring:
    """R(nat-inf, qmax)."""
    return build_layered(make_sorting(SortingKind.NAT_INF), make_qmax())


def psi_ell(R: LayeredSemiring, ell: Sort, p: PuiseuxSeries) -> LayeredElement:
    """<val(p)>^ell, moved to sort 0 when val(p) lies in the ideal of R.

    Raises:
        ZeroSeriesError: For the zero series
        DomainMismatchError: If the image is not an element of R
    """
    value = p.val()
    sort = ell
    if isinstance(R, ConstructedSemiring) and value in R.ideal and not R.whole_zero_layer:
        sort = R.sorting.zero
    image = LayeredElement(value, sort)
    if not R.contains(image):
        raise DomainMismatchError(f"{image} is not an element of {R.name}")
    return image


def psi_supervaluation(R: Optional[LayeredSemiring] = None, ell: Sort = 1) -> Supervaluation:
    target = R if R is not None else default_target()
    return Supervaluation(
        name=f"psi{ell}",
        domain=puiseux_field(),
        phi=lambda p: psi_ell(target, ell, p),
        target=target,
    )


@dataclass(frozen=True)
class PuiseuxPolynomial:
    """Univariate polynomial in lambda with Puiseux coefficients; zero coefficients dropped."""

    coefficients: Mapping[int, PuiseuxSeries] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {k: c for k, c in self.coefficients.items() if not c.is_zero}
        object.__setattr__(self, "coefficients", dict(sorted(cleaned.items())))

    @property
    def degree(self) -> int:
        return max(self.coefficients, default=-1)

    def evaluate(self, x: PuiseuxSeries) -> PuiseuxSeries:
        result = PuiseuxSeries.zero()
        for k in range(self.degree, -1, -1):
            result = result * x + self.coefficients.get(k, PuiseuxSeries.zero())
        return result

    def __mul__(self, other: "PuiseuxPolynomial") -> "PuiseuxPolynomial":
        product: dict[int, PuiseuxSeries] = {}
        for (i, a), (j, b) in itertools.product(self.coefficients.items(), other.coefficients.items()):
            product[i + j] = product.get(i + j, PuiseuxSeries.zero()) + a * b
        return PuiseuxPolynomial(product)

    @classmethod
    def from_roots(cls, roots: Sequence[PuiseuxSeries]) -> "PuiseuxPolynomial":
        """prod (lambda - r) over the roots."""
        result = cls({0: PuiseuxSeries.constant(1)})
        for root in roots:
            result = result * cls({1: PuiseuxSeries.constant(1), 0: -root})
        return result

    def render(self) -> str:
        return "\n".join(
            f"lambda^{k} : {self.coefficients[k]}" for k in sorted(self.coefficients, reverse=True)
        )


def parse_polynomial(text: str) -> PuiseuxPolynomial:
    """Parse ``lambda^<k> : <series>`` lines; blank lines and ``#`` comments are skipped.

    Raises:
        ParseError: With the 1-based line number of the first bad line
    """
    coefficients: dict[int, PuiseuxSeries] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        match = _MONOMIAL.match(line)
        if match is None:
            raise ParseError(f"expected 'lambda^<k> : <series>', got {raw.strip()!r}", number)
        degree = int(match.group("degree"))
        if degree in coefficients:
            raise ParseError(f"duplicate monomial lambda^{degree}", number)
        coefficients[degree] = PuiseuxSeries.parse(match.group("series"), line=number)
    if not any(not c.is_zero for c in coefficients.values()):
        raise ParseError("the polynomial is zero")
    return PuiseuxPolynomial(coefficients)


def parse_roots(text: str) -> list[PuiseuxSeries]:
    roots = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            roots.append(PuiseuxSeries.parse(line, line=number))
    return roots


def load_polynomial(path: Union[str, Path]) -> PuiseuxPolynomial:
    return parse_polynomial(Path(path).read_text(encoding="utf-8"))


def load_roots(path: Union[str, Path]) -> list[PuiseuxSeries]:
    return parse_roots(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class LayeredPolynomial:
    """Exponent -> layered coefficient over a target semiring."""

    coefficients: Mapping[int, LayeredElement]
    target: LayeredSemiring

    def render(self) -> str:
        return "\n".join(
            f"lambda^{k} : {self.coefficients[k]}" for k in sorted(self.coefficients, reverse=True)
        )


def tropicalize_poly(R: Optional[LayeredSemiring], f: PuiseuxPolynomial) -> LayeredPolynomial:
    """Apply psi_1 coefficientwise."""
    target = R if R is not None else default_target()
    coefficients = {k: psi_ell(target, target.sorting.one, c) for k, c in f.coefficients.items()}
    return LayeredPolynomial(coefficients=coefficients, target=target)


def eval_layered_poly(F: LayeredPolynomial, x: LayeredElement) -> LayeredElement:
    R = F.target
    monomials = [c if k == 0 else R.mul(c, R.power(x, k)) for k, c in F.coefficients.items()]
    return R.sum(monomials)


def _is_ghost_sort(L: SortingSemiring, sort: Sort) -> bool:
    return L.leq(L.add(L.one, L.one), sort)


def is_corner_root(F: LayeredPolynomial, x: LayeredElement) -> bool:
    """True when the evaluation has sort at least 1 + 1."""
    return _is_ghost_sort(F.target.sorting, F.target.sort_of(eval_layered_poly(F, x)))


def kapranov_check(
    f: PuiseuxPolynomial,
    roots: Sequence[PuiseuxSeries],
    R: Optional[LayeredSemiring] = None,
) -> CheckReport:
    """Each root of f must tropicalize to a corner root of trop(f).

    Raises:
        NotARootError: If some listed root does not annihilate f exactly
        ZeroSeriesError: If a listed root is the zero series
    """
    for index, root in enumerate(roots):
        residual = f.evaluate(root)
        if not residual.is_zero:
            raise NotARootError(f"{root} is not a root: f({root}) = {residual}")
        if root.is_zero:
            raise ZeroSeriesError(
                f"root {index} is the zero series and has no tropicalization; "
                "divide f by lambda and drop it from the roots"
            )
    F = tropicalize_poly(R, f)
    checker = LawChecker()
    report = CheckReport(title=f"corner roots over {F.target.name}")
    for index, root in enumerate(roots):
        image = psi_ell(F.target, F.target.sorting.one, root)
        value = eval_layered_poly(F, image)
        report.add(
            checker.fact(
                f"corner_root_{index}",
                _is_ghost_sort(F.target.sorting, F.target.sort_of(value)),
                witness=(image, value),
                note=f"root {root} -> {value}",
            )
        )
    return report


def random_roots(rng: random.Random, max_degree: int = 4) -> list[PuiseuxSeries]:
    """1..max_degree nonzero roots; from_roots turns them into a monic polynomial."""
    return [random_series(rng) for _ in range(rng.randint(1, max_degree))]


def check_kapranov_polynomials(
    R: Optional[LayeredSemiring] = None,
    budget: int = 100,
    seed: int = DEFAULT_SEED,
    max_degree: int = 4,
) -> CheckReport:
    """Every root of a seeded random monic polynomial tropicalizes to a corner root."""
    target = R if R is not None else default_target()
    checker = LawChecker(
        budget=budget, seed=seed, render=lambda roots: " ; ".join(str(r) for r in roots)
    )
    rng = checker.rng("kapranov_polynomials")
    cases = [(tuple(random_roots(rng, max_degree)),) for _ in range(budget)]

    def corners(roots: tuple[PuiseuxSeries, ...]) -> bool:
        return kapranov_check(PuiseuxPolynomial.from_roots(roots), roots, target).passed

    report = CheckReport(title=f"Kapranov polynomials over {target.name}")
    report.add(
        checker.check_over(
            "kapranov_polynomials",
            cases,
            corners,
            note=f"monic, degree <= {max_degree}",
            sampled=True,
        )
    )
    return report


def check_kapranov_map(
    R: Optional[LayeredSemiring] = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
) -> CheckReport:
    """ZO supervaluation laws of psi_1 and psi(a) + psi(b) |=_L psi(a + b)."""
    phi = psi_supervaluation(R)
    target = phi.target
    field_ = phi.domain
    report = check_supervaluation(phi, SupervaluationVariant.ZO, budget=budget, seed=seed)
    report.title = f"Kapranov map into {target.name}"
    checker = LawChecker(budget=budget, seed=seed)
    report.add(
        checker.check(
            "kapranov_surpassing",
            Domain(sampler=field_.sample_unit),
            2,
            lambda a, b: (a + b).is_zero
            or target.surpasses_L(target.add(phi(a), phi(b)), phi(a + b)),
        )
    )
    return report


def check_vanishing_sums(
    R: Optional[LayeredSemiring] = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
) -> CheckReport:
    """Nonzero series summing to zero have a ghost layered sum of images."""
    phi = psi_supervaluation(R)
    target = phi.target
    checker = LawChecker(budget=budget, seed=seed)
    rng = checker.rng("vanishing_sum_ghost")
    families = []
    while len(families) < budget:
        family = [random_series(rng) for _ in range(rng.randint(1, 3))]
        closing = -sum(family, PuiseuxSeries.zero())
        if not closing.is_zero:
            families.append((tuple(family + [closing]),))
    report = CheckReport(title=f"vanishing sums over {target.name}")
    report.add(
        checker.check_over(
            "vanishing_sum_ghost",
            families,
            lambda family: _is_ghost_sort(
                target.sorting, target.sort_of(target.sum(phi(a) for a in family))
            ),
            sampled=True,
        )
    )
    return report


@dataclass(frozen=True, eq=False)
class FunctorImage:
    """An object R(L, M) produced by a functor, with the monoid it came from."""

    semiring: ConstructedSemiring
    monoid: ValuedMonoid
    sorting: SortingSemiring


def layering_functor_object(L: SortingSemiring, M: ValuedMonoid) -> FunctorImage:
    """R(L, M) with the nu-closure of the noncancellative ideal."""
    ideal = nu_closure(noncancellative_ideal(M), M)
    return FunctorImage(build_layered(L, M, ideal, name=f"F({M.name})"), M, L)


def tropicalization_functor_object(L: SortingSemiring, M: ValuedMonoid) -> FunctorImage:
    return FunctorImage(build_layered(L, M, name=f"Trop({M.name})"), M, L)


def _sort_for(dst: ConstructedSemiring, value: Any, sort: Sort) -> Sort:
    if value in dst.ideal and not dst.whole_zero_layer:
        return dst.sorting.zero
    return sort


def layering_functor_morphism(
    L: SortingSemiring,
    phi: TripleMorphism,
    src: Optional[ConstructedSemiring] = None,
    dst: Optional[ConstructedSemiring] = None,
) -> LayeredMap:
    """F(phi): fixed on the tangible submonoid and extended to every sort.

    On R_0 and R_1 an element <a>^l goes to <phi(a)>^l, or to sort 0 when phi(a) is
    in the target ideal. A sort k = 1 + ... + 1 is reached as (phi(1) + ... +
    phi(1)) * F(phi)(<a>^1); sorts not of that form are reached by transition.
    """
    source = src or layering_functor_object(L, phi.src).semiring
    target = dst or layering_functor_object(L, phi.dst).semiring
    tangible = source.sorting.one

    def on_tangible(x: LayeredElement) -> LayeredElement:
        image = phi(x.value)
        return LayeredElement(image, _sort_for(target, image, x.sort))

    def apply(x: LayeredElement) -> LayeredElement:
        if x.sort in (source.sorting.zero, tangible):
            return on_tangible(x)
        lifted = on_tangible(LayeredElement(x.value, tangible))
        count = source.sorting.summands_for(x.sort)
        if count is not None:
            unit = target.sum([on_tangible(source.one)] * count)
            return target.mul(unit, lifted)
        if target.is_zero_sort(lifted):
            return lifted
        return target.nu_transition(x.sort, lifted)

    return LayeredMap(name=f"F({phi.name})", src=source, dst=target, phi=apply, rho=lambda s: s)


def tropicalization_functor_morphism(
    L: SortingSemiring,
    phi: TripleMorphism,
    src: Optional[ConstructedSemiring] = None,
    dst: Optional[ConstructedSemiring] = None,
) -> LayeredMap:
    """Trop(phi): <a>^l -> <phi(a)>^k, k = 0 when phi(a) is a noncancellative product, else l."""
    source = src or tropicalization_functor_object(L, phi.src).semiring
    target = dst or tropicalization_functor_object(L, phi.dst).semiring

    def apply(x: LayeredElement) -> LayeredElement:
        image = phi(x.value)
        return LayeredElement(image, _sort_for(target, image, x.sort))

    return LayeredMap(
        name=f"Trop({phi.name})", src=source, dst=target, phi=apply, rho=lambda s: s
    )


_FUNCTORS = {
    "layering": (layering_functor_object, layering_functor_morphism),
    "tropicalization": (tropicalization_functor_object, tropicalization_functor_morphism),
}


def check_functor_laws(
    functor: str = "layering",
    L: Optional[SortingSemiring] = None,
    chain: Sequence[int] = (7, 5, 3),
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """Identity and composition laws on a chain of saturating projections.

    Raises:
        KeyError: For an unknown functor name
    """
    make_object, make_morphism = _FUNCTORS[functor]
    sorting = L or make_sorting(SortingKind.TRUNCATED, 3)
    monoids = [make_truncated_nat(q) for q in chain]
    objects = [make_object(sorting, M).semiring for M in monoids]
    checker = LawChecker(exhaustive_limit=exhaustive_limit)
    report = CheckReport(title=f"{functor} functor on {' -> '.join(M.name for M in monoids)}")

    for M, R in zip(monoids, objects):
        image = make_morphism(sorting, identity_triple(M), R, R)
        report.add(
            checker.check_over(
                f"{functor}_identity[{M.name}]",
                ((x,) for x in R.elements()),
                lambda x, image=image: image(x) == x,
            )
        )
    steps = [saturating_projection(a, b) for a, b in zip(monoids, monoids[1:])]
    for index in range(len(steps) - 1):
        first, second = steps[index], steps[index + 1]
        start, middle, end = objects[index], objects[index + 1], objects[index + 2]
        f = make_morphism(sorting, first, start, middle)
        g = make_morphism(sorting, second, middle, end)
        gf = make_morphism(sorting, compose_triple(first, second), start, end)
        report.add(
            checker.check_over(
                f"{functor}_composition[{first.name};{second.name}]",
                ((x,) for x in start.elements()),
                lambda x, f=f, g=g, gf=gf: gf(x) == g(f(x)),
            )
        )
    return report


def forgetful_round_trip(image: FunctorImage) -> tuple[ValuedMonoid, bool]:
    """Recover (M, v) from R_0 and R_1 and compare it with the original monoid."""
    R = image.semiring
    M = image.monoid
    low = (R.sorting.zero, R.sorting.one)
    lift = {x.value: x for x in R.elements() if x.sort in low}
    values = tuple(lift)
    recovered = ValuedMonoid(
        name=f"forget({R.name})",
        mul_op=lambda a, b: R.mul(lift[a], lift[b]).value,
        one=R.one.value,
        g_leq=M.g_leq,
        valuation=M.valuation,
        carrier=values,
    )
    isomorphic = set(values) == set(M.elements()) and all(
        recovered.mul(a, b) == M.mul(a, b) and (recovered.g_cmp(a, b) == R.value_cmp(lift[a], lift[b]))
        for a, b in itertools.product(values, repeat=2)
    )
    logger.debug("forgetful round trip of %s: isomorphic=%s", R.name, isomorphic)
    return recovered, isomorphic
