"""Maps between layered semirings and the checkers for each level of the hierarchy.

Maps are opaque callables plus their source and target; a checker only evaluates
them. Every checker returns a CheckReport, exhaustive when the source is small
enough and sampled otherwise.
"""

import itertools
import logging
import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Iterator, Optional, Sequence

from laysem.core import (
    ConstructedSemiring,
    LayeredElement,
    LayeredMap,
    LayeredSemiring,
    build_layered,
    identity_map,
    naive_layered,
)
from laysem.errors import DomainMismatchError, NotDominatedError, NotEnumerableError
from laysem.monoids import make_trivial_monoid
from laysem.reports import (
    DEFAULT_BUDGET,
    DEFAULT_EXHAUSTIVE_LIMIT,
    DEFAULT_SEED,
    CheckReport,
    Domain,
    LawChecker,
    LawResult,
)
from laysem.sorting import Sort, SortingKind, SortingSemiring, make_sorting, sort_rank

logger = logging.getLogger(__name__)

MAX_ENUMERATED_CARRIER = 6


class SupervaluationVariant(str, Enum):
    FULL = "full"
    DAGGER = "dagger"
    ZO = "ZO"


class TransmissionVariant(str, Enum):
    PLAIN = "plain"
    ZO = "ZO"


@dataclass(frozen=True, eq=False)
class RingDomain:
    """A ring W given by its operations and a sampler."""

    name: str
    sampler: Callable[[random.Random], Any]
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    neg: Callable[[Any], Any]
    zero: Any
    one: Any

    def is_unit(self, a: Any) -> bool:
        return a != self.zero

    def sample_unit(self, rng: random.Random) -> Any:
        while True:
            a = self.sampler(rng)
            if self.is_unit(a):
                return a


@dataclass(frozen=True, eq=False)
class Supervaluation:
    """Φ: W -> R into a layered semiring."""

    name: str
    domain: RingDomain
    phi: Callable[[Any], LayeredElement]
    target: LayeredSemiring

    def __call__(self, a: Any) -> LayeredElement:
        return self.phi(a)


@dataclass(frozen=True, eq=False)
class Transmission:
    """α: (R, M) -> R' defined on a multiplicative submonoid M of R."""

    name: str
    alpha: Callable[[LayeredElement], LayeredElement]
    contains: Callable[[LayeredElement], bool]
    src: LayeredSemiring
    dst: LayeredSemiring
    domain: Domain

    def __call__(self, x: LayeredElement) -> LayeredElement:
        return self.alpha(x)


def rational_field() -> RingDomain:
    """Q with samples p/q, |p| <= 20, 1 <= q <= 20."""

    def sample(rng: random.Random) -> Fraction:
        if rng.random() < 0.05:
            return Fraction(0)
        return Fraction(rng.randint(-20, 20), rng.randint(1, 20))

    return RingDomain(
        name="Q",
        sampler=sample,
        add=lambda a, b: a + b,
        mul=lambda a, b: a * b,
        neg=lambda a: -a,
        zero=Fraction(0),
        one=Fraction(1),
    )


def _checker(budget: int, seed: int, exhaustive_limit: int) -> LawChecker:
    return LawChecker(budget=budget, seed=seed, exhaustive_limit=exhaustive_limit)


def trivial_supervaluation(W: RingDomain, L: Optional[SortingSemiring] = None) -> Supervaluation:
    """Every unit goes to the tangible identity of R(L, {0})."""
    target = build_layered(L or make_sorting(SortingKind.NAT_INF), make_trivial_monoid())
    one = target.one

    def phi(a: Any) -> LayeredElement:
        if not W.is_unit(a):
            raise DomainMismatchError("the trivial supervaluation is defined on units only")
        return one

    return Supervaluation(name="trivial", domain=W, phi=phi, target=target)


def _hom_laws(f: LayeredMap, checker: LawChecker, additive: bool = True) -> list[LawResult]:
    src, dst, phi = f.src, f.dst, f.phi
    domain = src.domain()
    results = [
        checker.fact("hom_unit", phi(src.one) == dst.one, witness=(src.one,)),
        checker.check("maps_into_target", domain, 1, lambda a: dst.contains(phi(a))),
        checker.check(
            "hom_multiplicative",
            domain,
            2,
            lambda a, b: phi(src.mul(a, b)) == dst.mul(phi(a), phi(b)),
        ),
    ]
    if additive:
        results.append(
            checker.check(
                "hom_additive",
                domain,
                2,
                lambda a, b: phi(src.add(a, b)) == dst.add(phi(a), phi(b)),
            )
        )
    return results


def check_semiring_hom(
    f: LayeredMap,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """Unit, multiplicativity and additivity of f."""
    report = CheckReport(title=f"semiring homomorphism {f.name}")
    for result in _hom_laws(f, _checker(budget, seed, exhaustive_limit)):
        report.add(result)
    return report


def _require_rho(f: LayeredMap) -> Callable[[Sort], Sort]:
    if f.rho is None:
        raise DomainMismatchError(f"map {f.name} carries no sort map")
    return f.rho


def _rho_laws(f: LayeredMap, checker: LawChecker) -> list[LawResult]:
    rho = _require_rho(f)
    L: SortingSemiring = f.src.sorting
    L2: SortingSemiring = f.dst.sorting
    domain = L.domain()
    return [
        checker.fact(
            "rho_unit", rho(L.one) == L2.one and rho(L.zero) == L2.zero, witness=(L.one,)
        ),
        checker.check(
            "rho_order_preserving",
            domain,
            2,
            lambda k, ell: not L.leq(k, ell) or L2.leq(rho(k), rho(ell)),
        ),
        checker.check(
            "rho_additive", domain, 2, lambda k, ell: rho(L.add(k, ell)) == L2.add(rho(k), rho(ell))
        ),
        checker.check(
            "rho_multiplicative",
            domain,
            2,
            lambda k, ell: rho(L.mul(k, ell)) == L2.mul(rho(k), rho(ell)),
        ),
    ]


def _reachable_units(L: SortingSemiring) -> list[Sort]:
    return [sort for _, sort in L.reachable_from_one()]


def check_layered_hom(
    f: LayeredMap,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """Semiring homomorphism laws plus the sort conditions on (φ, ρ).

    Raises:
        DomainMismatchError: If f has no sort map
    """
    checker = _checker(budget, seed, exhaustive_limit)
    src, dst, phi = f.src, f.dst, f.phi
    rho = _require_rho(f)
    L2 = dst.sorting
    domain = src.domain()
    units = _reachable_units(src.sorting)
    report = CheckReport(title=f"layered homomorphism {f.name}")
    for result in _hom_laws(f, checker) + _rho_laws(f, checker):
        report.add(result)

    def sort_condition(a: LayeredElement) -> bool:
        target = dst.sort_of(phi(a))
        return target == L2.zero or L2.leq(rho(src.sort_of(a)), target)

    report.add(checker.check("M2_sort_condition", domain, 1, sort_condition))
    report.add(
        checker.check_over(
            "layer_units_preserved",
            ((ell,) for ell in units),
            lambda ell: phi(src.layer_unit(ell)) == dst.layer_unit(rho(ell)),
        )
    )
    report.add(
        checker.check(
            "layer_unit_products",
            domain,
            1,
            lambda a: all(
                phi(src.mul(src.layer_unit(ell), a)) == dst.mul(phi(src.layer_unit(ell)), phi(a))
                for ell in units
            ),
        )
    )
    return report


def check_zero_excepted(
    f: LayeredMap,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """Multiplicative monoid map, additive whenever both summands have positive sort."""
    checker = _checker(budget, seed, exhaustive_limit)
    src, dst, phi = f.src, f.dst, f.phi
    positive = src.sorting.is_positive
    report = CheckReport(title=f"0-excepted homomorphism {f.name}")
    for result in _hom_laws(f, checker, additive=False):
        report.add(result)
    report.add(
        checker.check(
            "additive_off_zero_layer",
            src.domain(),
            2,
            lambda a, b: not (positive(src.sort_of(a)) and positive(src.sort_of(b)))
            or phi(src.add(a, b)) == dst.add(phi(a), phi(b)),
        )
    )
    return report


def _nu_monotone(f: LayeredMap, checker: LawChecker) -> LawResult:
    src, dst, phi = f.src, f.dst, f.phi
    return checker.check(
        "nu_monotone",
        src.domain(),
        2,
        lambda a, b: not src.nu_leq(b, a) or dst.nu_leq(phi(b), phi(a)),
    )


def check_surpassing_map(
    f: LayeredMap,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """φ(a+b) surpasses φ(a)+φ(b) in the (L, ν) sense; surpassing maps are ν-monotone."""
    checker = _checker(budget, seed, exhaustive_limit)
    src, dst, phi = f.src, f.dst, f.phi
    report = CheckReport(title=f"surpassing map {f.name}")
    for result in _hom_laws(f, checker, additive=False):
        report.add(result)
    report.add(
        checker.check(
            "surpassing",
            src.domain(),
            2,
            lambda a, b: dst.surpasses_Lnu(phi(src.add(a, b)), dst.add(phi(a), phi(b))),
        )
    )
    report.add(_nu_monotone(f, checker))
    return report


def check_surpassed_map(
    f: LayeredMap,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """φ(a)+φ(b) surpasses φ(a+b) in the (L, ν) sense."""
    checker = _checker(budget, seed, exhaustive_limit)
    src, dst, phi = f.src, f.dst, f.phi
    report = CheckReport(title=f"surpassed map {f.name}")
    for result in _hom_laws(f, checker, additive=False):
        report.add(result)
    report.add(
        checker.check(
            "surpassed",
            src.domain(),
            2,
            lambda a, b: dst.surpasses_Lnu(dst.add(phi(a), phi(b)), phi(src.add(a, b))),
        )
    )
    return report


def _transition_sorts(L: SortingSemiring, k: Sort) -> list[Sort]:
    if L.carrier is not None:
        return [m for m in L.carrier if L.is_positive(m) and L.leq(k, m)]
    return [m for m in (k, L.add(k, L.one), L.top()) if m is not None]


def reconstruct_from_tangible(f: LayeredMap, a: LayeredElement) -> Optional[LayeredElement]:
    """Rebuild φ(a) as (φ(1) + ... + φ(1)) φ(a_1), or None when a has no such form."""
    src, dst, phi = f.src, f.dst, f.phi
    if src.is_zero_sort(a):
        return phi(a)
    lift = src.tangible_lift(a)
    count = src.sorting.summands_for(src.sort_of(a))
    if lift is None or count is None:
        return None
    unit_image = dst.sum([phi(src.one)] * count)
    return dst.mul(unit_image, phi(lift))


def check_layered_morphism(
    f: LayeredMap,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """0-excepted laws plus M1-M3 and determination by the tangible submonoid.

    Raises:
        DomainMismatchError: If f has no sort map
    """
    checker = _checker(budget, seed, exhaustive_limit)
    src, dst, phi = f.src, f.dst, f.phi
    rho = _require_rho(f)
    L, L2 = src.sorting, dst.sorting
    domain = src.domain()
    report = check_zero_excepted(f, budget, seed, exhaustive_limit)
    report.title = f"layered morphism {f.name}"

    def m1(a: LayeredElement) -> bool:
        target = dst.sort_of(phi(a))
        return target == L2.zero or L2.leq(rho(src.sort_of(a)), target)

    def m2(a: LayeredElement) -> bool:
        k = src.sort_of(a)
        if not L.is_positive(k):
            return True
        image = phi(a)
        for m in _transition_sorts(L, k):
            moved = phi(src.nu_transition(m, a))
            image_sort = dst.sort_of(image)
            if L2.is_positive(image_sort) and L2.leq(image_sort, rho(m)):
                if moved != dst.nu_transition(rho(m), image):
                    return False
            elif not dst.nu_equiv(moved, image):
                return False
        return True

    def determined(a: LayeredElement) -> bool:
        rebuilt = reconstruct_from_tangible(f, a)
        return rebuilt is None or rebuilt == phi(a)

    report.add(checker.check("M1_sort_bound", domain, 1, m1))
    report.add(checker.check("M2_transitions", domain, 1, m2))
    report.add(
        checker.check(
            "M3_nu_equivalence",
            domain,
            2,
            lambda a, b: not src.nu_equiv(a, b) or dst.nu_equiv(phi(a), phi(b)),
        )
    )
    report.add(
        checker.check(
            "determination", domain, 1, determined, note="unreachable sorts skipped"
        )
    )
    return report


def frobenius_map(R: LayeredSemiring, m: int) -> LayeredMap:
    """a -> a^m, with sort map k -> k^m."""
    L = R.sorting

    def rho(k: Sort) -> Sort:
        result = k
        for _ in range(m - 1):
            result = L.mul(result, k)
        return result

    return LayeredMap(
        name=f"frobenius:{m}", src=R, dst=R, phi=lambda x: R.power(x, m), rho=rho
    )


def sort_collapse_map(
    src: ConstructedSemiring, dst: ConstructedSemiring, rho: Callable[[Sort], Sort]
) -> LayeredMap:
    """<a>^k -> <a>^rho(k), landing in sort 0 when a lies in the target ideal."""
    zero = dst.sorting.zero

    def phi(x: LayeredElement) -> LayeredElement:
        if x.value in dst.ideal and not dst.whole_zero_layer:
            return LayeredElement(x.value, zero)
        return LayeredElement(x.value, rho(x.sort))

    return LayeredMap(name=f"rho[{src.sorting.name}->{dst.sorting.name}]", src=src, dst=dst, phi=phi, rho=rho)


def zero_layer_inclusion(L: SortingSemiring, M: Any) -> LayeredMap:
    """R(L*, M) -> R(L, M)_a, sending the noncancellative values to sort 0."""
    src = naive_layered(L, M)
    dst = build_layered(L, M)
    return sort_collapse_map(src, dst, lambda s: s)


def ghost_value_collapse(R: ConstructedSemiring) -> LayeredMap:
    """Sends every element above sort 1 to the value 1_M, keeping its sort."""
    one = R.base.one
    tangible = R.sorting.one

    def phi(x: LayeredElement) -> LayeredElement:
        if x.sort in (R.sorting.zero, tangible):
            return x
        return LayeredElement(one, x.sort)

    return LayeredMap(name="ghost-value-collapse", src=R, dst=R, phi=phi, rho=lambda s: s)


def check_supervaluation(
    phi: Supervaluation,
    variant: SupervaluationVariant = SupervaluationVariant.FULL,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
) -> CheckReport:
    """LV1-LV4 on sampled ring elements.

    The dagger variant lives on units only and drops LV4. ZO checks the dagger
    laws, LV4 when the target has a zero, and that images stay in R_0 and R_1.
    """
    variant = SupervaluationVariant(variant)
    checker = LawChecker(budget=budget, seed=seed)
    W, R = phi.domain, phi.target
    units_only = variant is not SupervaluationVariant.FULL
    draw = W.sample_unit if units_only else W.sampler
    sampled = Domain(sampler=draw)
    report = CheckReport(title=f"{variant.value} supervaluation {phi.name}")

    def in_scope(*items: Any) -> bool:
        return not units_only or all(W.is_unit(item) for item in items)

    report.add(checker.fact("LV1_unit", phi(W.one) == R.one, witness=(W.one,)))
    report.add(
        checker.check(
            "LV2_multiplicative",
            sampled,
            2,
            lambda a, b: phi(W.mul(a, b)) == R.mul(phi(a), phi(b)),
        )
    )
    report.add(
        checker.check(
            "LV3_subadditive",
            sampled,
            2,
            lambda a, b: not in_scope(W.add(a, b))
            or R.nu_leq(phi(W.add(a, b)), R.add(phi(a), phi(b))),
        )
    )
    if variant is SupervaluationVariant.FULL or (
        variant is SupervaluationVariant.ZO and R.zero is not None
    ):
        zero_image = phi(W.zero)
        report.add(checker.fact("LV4_zero", zero_image == R.zero, witness=(zero_image,)))
    if variant is SupervaluationVariant.ZO:
        low = (R.sorting.zero, R.sorting.one)
        report.add(
            checker.check("ZO_range", sampled, 1, lambda a: R.sort_of(phi(a)) in low)
        )
    report.add(
        checker.check(
            "invertible_tangible",
            Domain(sampler=W.sample_unit),
            1,
            lambda a: R.sort_of(phi(a)) == R.sorting.one,
        )
    )
    return report


def _pair_pool(phi: Supervaluation, budget: int, seed: int, units_only: bool) -> list[Any]:
    rng = LawChecker(seed=seed).rng("domination")
    size = max(2, math.isqrt(budget))
    draw = phi.domain.sample_unit if units_only else phi.domain.sampler
    return [draw(rng) for _ in range(size)]


def check_domination(
    phi_v: Supervaluation,
    phi_w: Supervaluation,
    variant: SupervaluationVariant = SupervaluationVariant.FULL,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
) -> CheckReport:
    """D1-D4 over all pairs from a seeded pool of ring elements.

    Sorts are compared by their shared rank 0 < 1 < 2 < ... < inf. The dagger
    variant omits D3 and checks D4 unconditionally.
    """
    variant = SupervaluationVariant(variant)
    dagger = variant is SupervaluationVariant.DAGGER
    checker = LawChecker(budget=budget, seed=seed)
    R, R2 = phi_v.target, phi_w.target
    pool = _pair_pool(phi_v, budget, seed, units_only=variant is not SupervaluationVariant.FULL)
    pairs = list(itertools.product(pool, repeat=2))
    singles = [(a,) for a in pool]
    report = CheckReport(
        title=f"{phi_v.name} dominates {phi_w.name}",
        scope_notes=[f"pool of {len(pool)} sampled elements"],
    )
    report.add(
        checker.check_over(
            "D1_fibres",
            pairs,
            lambda a, b: phi_v(a) != phi_v(b) or phi_w(a) == phi_w(b),
            sampled=True,
        )
    )
    report.add(
        checker.check_over(
            "D2_nu_order",
            pairs,
            lambda a, b: not R.nu_leq(phi_v(a), phi_v(b)) or R2.nu_leq(phi_w(a), phi_w(b)),
            sampled=True,
        )
    )
    if not dagger:
        report.add(
            checker.check_over(
                "D3_zero_layer",
                singles,
                lambda a: not R.is_zero_sort(phi_v(a)) or R2.is_zero_sort(phi_w(a)),
                sampled=True,
            )
        )

    def d4(a: Any) -> bool:
        if not dagger and R2.is_zero_sort(phi_w(a)):
            return True
        return sort_rank(R.sort_of(phi_v(a))) <= sort_rank(R2.sort_of(phi_w(a)))

    report.add(checker.check_over("D4_sorts", singles, d4, sampled=True))
    return report


def induced_transmission(
    phi_v: Supervaluation,
    phi_w: Supervaluation,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
) -> Transmission:
    """α with α(Φv(a)) = Φw(a), tabulated on sampled elements, products and sums.

    Well-definedness is certified on the sample only.

    Raises:
        NotDominatedError: If two elements with the same Φv image disagree under Φw
    """
    W = phi_v.domain
    rng = LawChecker(seed=seed).rng("induced")
    pool = [W.sample_unit(rng) for _ in range(max(2, math.isqrt(budget)))]
    candidates = list(pool)
    for a, b in itertools.product(pool[:20], repeat=2):
        candidates.append(W.mul(a, b))
        total = W.add(a, b)
        if W.is_unit(total):
            candidates.append(total)
    candidates.append(W.one)
    table: dict[LayeredElement, LayeredElement] = {}
    for a in candidates:
        key, value = phi_v(a), phi_w(a)
        known = table.setdefault(key, value)
        if known != value:
            raise NotDominatedError(
                f"{phi_v.name} does not dominate {phi_w.name}: {key} maps to {known} and {value}"
            )
    keys = tuple(table)
    logger.debug("induced transmission tabulated on %d elements", len(keys))

    def alpha(x: LayeredElement) -> LayeredElement:
        try:
            return table[x]
        except KeyError:
            raise DomainMismatchError(f"{x} is outside the tabulated image of {phi_v.name}")

    return Transmission(
        name=f"alpha[{phi_w.name},{phi_v.name}]",
        alpha=alpha,
        contains=table.__contains__,
        src=phi_v.target,
        dst=phi_w.target,
        domain=Domain(elements=keys),
    )


def as_transmission(f: LayeredMap) -> Transmission:
    """f viewed as a transmission defined on all of its source."""
    return Transmission(
        name=f.name, alpha=f.phi, contains=f.src.contains, src=f.src, dst=f.dst, domain=f.src.domain()
    )


def identity_transmission(R: LayeredSemiring) -> Transmission:
    return as_transmission(identity_map(R))


def _nu_preserving(alpha: Transmission, checker: LawChecker) -> LawResult:
    src, dst = alpha.src, alpha.dst
    return checker.check(
        "nu_preserving",
        alpha.domain,
        2,
        lambda a, b: not src.nu_leq(a, b) or dst.nu_leq(alpha(a), alpha(b)),
    )


def _strictly_nu_preserving(alpha: Transmission, checker: LawChecker) -> LawResult:
    src, dst = alpha.src, alpha.dst
    return checker.check(
        "strictly_nu_preserving",
        alpha.domain,
        2,
        lambda a, b: not src.nu_lt(a, b)
        or dst.is_zero_sort(alpha(a))
        or dst.nu_lt(alpha(a), alpha(b)),
    )


def check_transmission(
    alpha: Transmission,
    variant: TransmissionVariant = TransmissionVariant.PLAIN,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """TM1-TM3, ν-preservation and their agreement.

    TM3 is checked whenever a, b and a+b lie in the submonoid; its verdict must match
    the ν-preservation verdict.
    """
    variant = TransmissionVariant(variant)
    checker = _checker(budget, seed, exhaustive_limit)
    src, dst = alpha.src, alpha.dst
    inside = alpha.contains
    report = CheckReport(title=f"{variant.value} transmission {alpha.name}")
    report.add(checker.fact("TM1_unit", alpha(src.one) == dst.one, witness=(src.one,)))
    report.add(
        checker.check(
            "TM2_multiplicative",
            alpha.domain,
            2,
            lambda a, b: not inside(src.mul(a, b))
            or alpha(src.mul(a, b)) == dst.mul(alpha(a), alpha(b)),
        )
    )
    tm3 = report.add(
        checker.check(
            "TM3_sums",
            alpha.domain,
            2,
            lambda a, b: not inside(src.add(a, b))
            or dst.nu_equiv(alpha(src.add(a, b)), dst.add(alpha(a), alpha(b))),
        )
    )
    preserving = report.add(_nu_preserving(alpha, checker))
    report.add(
        checker.fact(
            "patch_equivalence",
            tm3.passed == preserving.passed,
            witness=(f"TM3={tm3.passed}", f"nu_preserving={preserving.passed}"),
        )
    )
    if variant is TransmissionVariant.ZO:
        low = (dst.sorting.zero, dst.sorting.one)
        report.add(
            checker.check(
                "ZO_range",
                alpha.domain,
                1,
                lambda a: src.sort_of(a) != src.sorting.one or dst.sort_of(alpha(a)) in low,
            )
        )
    return report


def check_nu_preserving(
    alpha: Transmission,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    report = CheckReport(title=f"nu-preservation of {alpha.name}")
    report.add(_nu_preserving(alpha, _checker(budget, seed, exhaustive_limit)))
    return report


def check_strictly_nu_preserving(
    alpha: Transmission,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    checker = _checker(budget, seed, exhaustive_limit)
    report = CheckReport(title=f"strict nu-preservation of {alpha.name}")
    report.add(_nu_preserving(alpha, checker))
    report.add(_strictly_nu_preserving(alpha, checker))
    return report


def check_homomorphic_transmission(
    alpha: Transmission,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """α(a+b) = α(a)+α(b) inside the submonoid, compared with strict ν-preservation.

    The ``homomorphic`` and ``strictly_nu_preserving`` entries report the two
    verdicts; ``homomorphic_iff_strict`` fails when they disagree.
    """
    checker = _checker(budget, seed, exhaustive_limit)
    src, dst = alpha.src, alpha.dst
    inside = alpha.contains
    report = CheckReport(title=f"homomorphic transmission {alpha.name}")
    homomorphic = report.add(
        checker.check(
            "homomorphic",
            alpha.domain,
            2,
            lambda a, b: not inside(src.add(a, b))
            or alpha(src.add(a, b)) == dst.add(alpha(a), alpha(b)),
        )
    )
    strict = report.add(_strictly_nu_preserving(alpha, checker))
    report.add(
        checker.fact(
            "homomorphic_iff_strict",
            homomorphic.passed == strict.passed,
            witness=(f"homomorphic={homomorphic.passed}", f"strict={strict.passed}"),
        )
    )
    return report


def compose_with_supervaluation(alpha: Transmission, phi_v: Supervaluation) -> Supervaluation:
    """α ∘ Φv, a supervaluation dominated by Φv.

    Raises:
        DomainMismatchError: If α is not defined on the target of Φv, or at evaluation
            time on an image outside its submonoid
    """
    if alpha.src is not phi_v.target:
        raise DomainMismatchError(
            f"{alpha.name} starts at {alpha.src.name}, not at {phi_v.target.name}"
        )

    def composite(a: Any) -> LayeredElement:
        image = phi_v(a)
        if not alpha.contains(image):
            raise DomainMismatchError(f"{image} is outside the domain of {alpha.name}")
        return alpha(image)

    return Supervaluation(
        name=f"{alpha.name}.{phi_v.name}", domain=phi_v.domain, phi=composite, target=alpha.dst
    )


def enumerate_monoid_maps(
    src: LayeredSemiring, dst: LayeredSemiring, max_size: int = MAX_ENUMERATED_CARRIER
) -> Iterator[Transmission]:
    """Every unit-preserving multiplicative map src -> dst, as a transmission on src.

    Raises:
        NotEnumerableError: If either carrier exceeds max_size elements
    """
    sources, targets = src.elements(), dst.elements()
    if len(sources) > max_size or len(targets) > max_size:
        raise NotEnumerableError(
            f"carriers of size {len(sources)} and {len(targets)} exceed {max_size}"
        )
    order = sorted(sources, key=lambda x: x != src.one)

    def consistent(table: dict[LayeredElement, LayeredElement]) -> bool:
        for a, b in itertools.product(table, repeat=2):
            product = src.mul(a, b)
            if product in table and table[product] != dst.mul(table[a], table[b]):
                return False
        return True

    def extend(table: dict[LayeredElement, LayeredElement], index: int) -> Iterator[dict]:
        if index == len(order):
            yield dict(table)
            return
        x = order[index]
        choices: Sequence[LayeredElement] = (dst.one,) if x == src.one else targets
        for image in choices:
            table[x] = image
            if consistent(table):
                yield from extend(table, index + 1)
            del table[x]

    for number, table in enumerate(extend({}, 0)):
        frozen = dict(table)
        yield Transmission(
            name=f"map#{number}",
            alpha=frozen.__getitem__,
            contains=frozen.__contains__,
            src=src,
            dst=dst,
            domain=src.domain(),
        )


def permanent(R: LayeredSemiring, matrix: Sequence[Sequence[LayeredElement]]) -> LayeredElement:
    """Sum over permutations of the entry products."""
    n = len(matrix)
    terms = (
        R.product(matrix[i][sigma[i]] for i in range(n))
        for sigma in itertools.permutations(range(n))
    )
    return R.sum(terms)


def matrix_product(
    R: LayeredSemiring,
    A: Sequence[Sequence[LayeredElement]],
    B: Sequence[Sequence[LayeredElement]],
) -> list[list[LayeredElement]]:
    n = len(A)
    return [[R.sum(R.mul(A[i][k], B[k][j]) for k in range(n)) for j in range(n)] for i in range(n)]


def matrix_frobenius_check(
    R: LayeredSemiring,
    n: int = 2,
    m: int = 2,
    budget: int = 500,
    seed: int = DEFAULT_SEED,
) -> CheckReport:
    """(AB)_ij^m surpasses sum_k a_ik^m b_kj^m for sampled n x n matrices."""
    checker = LawChecker(budget=budget, seed=seed)
    rng = checker.rng("matrix_frobenius")
    domain = R.domain()

    def random_matrix() -> list[list[LayeredElement]]:
        return [[domain.draw(rng) for _ in range(n)] for _ in range(n)]

    cases = [(random_matrix(), random_matrix()) for _ in range(budget)]

    def entrywise(A: list, B: list) -> bool:
        AB = matrix_product(R, A, B)
        for i, j in itertools.product(range(n), repeat=2):
            lhs = R.power(AB[i][j], m)
            rhs = R.sum(R.mul(R.power(A[i][k], m), R.power(B[k][j], m)) for k in range(n))
            if not R.surpasses_L(lhs, rhs):
                return False
        return True

    report = CheckReport(title=f"matrix Frobenius m={m} on {n}x{n} matrices over {R.name}")
    report.add(
        checker.check_over(f"matrix_frobenius_m{m}", cases, entrywise, sampled=True)
    )
    return report

