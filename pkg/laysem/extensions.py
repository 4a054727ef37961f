"""Derived constructions: relayering, truncations, zero adjunctions and ghost layers."""

import logging
from functools import cached_property
from typing import Any, Callable, Iterable, Optional, Union

from laysem.core import (
    ConstructedSemiring,
    LayeredElement,
    LayeredMap,
    LayeredSemiring,
    build_layered,
    compose_maps,
    semiring_laws,
)
from laysem.errors import (
    AlreadyPointedError,
    DomainMismatchError,
    NotAnIdealError,
    NotUniformError,
)
from laysem.monoids import EMPTY_IDEAL, ValuedMonoid, ValueSymbol
from laysem.reports import (
    DEFAULT_BUDGET,
    DEFAULT_EXHAUSTIVE_LIMIT,
    DEFAULT_SEED,
    CheckReport,
    Domain,
    LawChecker,
)
from laysem.sorting import INFINITY, Sort, SortingKind, SortingSemiring, make_sorting

logger = logging.getLogger(__name__)

IdealSpec = Union[Iterable[LayeredElement], Callable[[LayeredElement], bool]]


class RelayeredSemiring(LayeredSemiring):
    """R_a: the same carrier and operations with a moved into sort 0."""

    def __init__(
        self,
        parent: LayeredSemiring,
        in_ideal: Callable[[LayeredElement], bool],
        name: str,
    ):
        self.parent = parent
        self.sorting = parent.sorting
        self.in_ideal = in_ideal
        self.name = name

    @property
    def one(self) -> LayeredElement:
        return self.parent.one

    def add(self, x: LayeredElement, y: LayeredElement) -> LayeredElement:
        return self.parent.add(x, y)

    def mul(self, x: LayeredElement, y: LayeredElement) -> LayeredElement:
        return self.parent.mul(x, y)

    def sort_of(self, x: LayeredElement) -> Sort:
        if self.in_ideal(x):
            return self.sorting.zero
        return self.parent.sort_of(x)

    def value_cmp(self, x: LayeredElement, y: LayeredElement) -> int:
        return self.parent.value_cmp(x, y)

    def contains(self, x: Any) -> bool:
        return self.parent.contains(x)

    def domain(self) -> Domain:
        return self.parent.domain()

    def _transition(self, x: LayeredElement, m: Sort) -> LayeredElement:
        return self.parent.nu_transition(m, x)


def relayer(
    R: LayeredSemiring,
    ideal: IdealSpec,
    use_nu_closure: bool = False,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
) -> LayeredSemiring:
    """Move a multiplicatively closed subset of R into the zero layer.

    Args:
        R: Layered semiring
        ideal: Explicit elements, or a membership predicate
        use_nu_closure: Replace the ideal by all elements ν-equivalent to a member
        budget: Samples used to validate a predicate ideal on an infinite carrier
        seed: Sampling seed

    Returns:
        The relayered semiring, or R itself for an empty ideal

    Raises:
        NotAnIdealError: With the first product that leaves the ideal
    """
    domain = R.domain()
    if callable(ideal):
        predicate = ideal
        members = (
            tuple(x for x in domain.elements if predicate(x)) if domain.elements is not None else None
        )
    else:
        members = tuple(ideal)
        lookup = frozenset(members)
        predicate = lookup.__contains__
    if members is not None and not members:
        logger.info("empty ideal, %s unchanged", R.name)
        return R
    if use_nu_closure:
        assert members is not None, "nu-closure needs an enumerable ideal"
        closed = frozenset(x for x in R.elements() if any(R.nu_equiv(a, x) for a in members))
        members = tuple(x for x in R.elements() if x in closed)
        predicate = closed.__contains__

    if domain.elements is not None:
        assert members is not None
        pairs: Iterable[tuple[LayeredElement, LayeredElement]] = (
            (a, r) for a in members for r in domain.elements
        )
    else:
        rng = LawChecker(seed=seed).rng("relayer")
        samples = [domain.draw(rng) for _ in range(budget)]
        pairs = ((a, r) for a in samples if predicate(a) for r in samples[:50])
    for a, r in pairs:
        if not predicate(R.mul(a, r)):
            raise NotAnIdealError(f"{a} is in the ideal but {a} * {r} = {R.mul(a, r)} is not")
    return RelayeredSemiring(R, predicate, name=f"{R.name}_a")


def nu_truncate(L: SortingSemiring, M: ValuedMonoid, q: Any) -> ConstructedSemiring:
    """R(L, M|q): values at or above q collapse to the infinite element <q>^0.

    Raises:
        InvalidThresholdError: If q does not exceed the identity of M
    """
    return build_layered(L, M.truncate(q))


def L_truncate(R: ConstructedSemiring, m: Sort) -> ConstructedSemiring:
    """R over L|m: sorts saturate at the special layer m.

    Raises:
        InvalidThresholdError: If m does not exceed 1 in L
    """
    return R.with_sorting(R.sorting.truncate(m))


def nu_truncation_map(R: ConstructedSemiring, q: Any) -> LayeredMap:
    """Projection <a>^k -> <a>^k for a < q and <q>^0 otherwise.

    A base that is not a positive cone is first restricted to its positive cone.
    """
    src = R
    if not R.base.positive:
        src = ConstructedSemiring(R.sorting, R.base.positive_cone(), R.ideal)
    dst = nu_truncate(src.sorting, src.base, q)
    base, zero = src.base, src.sorting.zero
    cap = LayeredElement(q, zero)

    def phi(x: LayeredElement) -> LayeredElement:
        if base.g_cmp(x.value, q) >= 0:
            return cap
        return x

    return LayeredMap(name=f"trunc-nu:{q}", src=src, dst=dst, phi=phi, rho=lambda s: s)


def sort_truncation_map(R: ConstructedSemiring, m: Sort) -> LayeredMap:
    """Projection capping sorts at m."""
    dst = L_truncate(R, m)
    L = R.sorting

    def cap(s: Sort) -> Sort:
        return s if L.leq(s, m) else m

    return LayeredMap(
        name=f"trunc-sort:{m}",
        src=R,
        dst=dst,
        phi=lambda x: LayeredElement(x.value, cap(x.sort)),
        rho=cap,
    )


def truncation_projection(
    R: ConstructedSemiring,
    nu: Optional[Any] = None,
    sort: Optional[Sort] = None,
    sort_first: bool = False,
) -> LayeredMap:
    """Compose the requested truncations in the given order."""
    steps: list[Callable[[ConstructedSemiring], LayeredMap]] = []
    if nu is not None:
        steps.append(lambda S: nu_truncation_map(S, nu))
    if sort is not None:
        step = lambda S: sort_truncation_map(S, sort)  # noqa: E731
        if sort_first:
            steps.insert(0, step)
        else:
            steps.append(step)
    projection: Optional[LayeredMap] = None
    current = R
    for make_step in steps:
        stage = make_step(current)
        projection = stage if projection is None else compose_maps(projection, stage)
        assert isinstance(stage.dst, ConstructedSemiring)
        current = stage.dst
    if projection is None:
        return LayeredMap(name=f"id[{R.name}]", src=R, dst=R, phi=lambda x: x, rho=lambda s: s)
    return projection


def truncate_instance(
    L: SortingSemiring,
    M: ValuedMonoid,
    nu: Optional[Any] = None,
    sort: Optional[Sort] = None,
    sort_first: bool = False,
) -> ConstructedSemiring:
    """Build R(L, M) and apply both truncations in an explicit order."""
    logger.info(
        "truncating R(%s, %s): nu=%s sort=%s order=%s",
        L.name,
        M.name,
        nu,
        sort,
        "sort-first" if sort_first else "nu-first",
    )
    dst = truncation_projection(build_layered(L, M), nu, sort, sort_first).dst
    assert isinstance(dst, ConstructedSemiring)
    return dst


class PointedSemiring(LayeredSemiring):
    """R with an adjoined absorbing zero of sort 0."""

    def __init__(self, parent: LayeredSemiring):
        self.parent = parent
        self.sorting = parent.sorting
        self.name = f"{parent.name}+0"
        self.zero_element = LayeredElement(ValueSymbol.BOTTOM, parent.sorting.zero)

    @property
    def zero(self) -> Optional[LayeredElement]:  # type: ignore[override]
        return self.zero_element

    @property
    def one(self) -> LayeredElement:
        return self.parent.one

    def add(self, x: LayeredElement, y: LayeredElement) -> LayeredElement:
        if x == self.zero_element:
            return y
        if y == self.zero_element:
            return x
        return self.parent.add(x, y)

    def mul(self, x: LayeredElement, y: LayeredElement) -> LayeredElement:
        if self.zero_element in (x, y):
            return self.zero_element
        return self.parent.mul(x, y)

    def sort_of(self, x: LayeredElement) -> Sort:
        if x == self.zero_element:
            return self.sorting.zero
        return self.parent.sort_of(x)

    def value_cmp(self, x: LayeredElement, y: LayeredElement) -> int:
        x_zero, y_zero = x == self.zero_element, y == self.zero_element
        if x_zero or y_zero:
            return int(y_zero) - int(x_zero)
        return self.parent.value_cmp(x, y)

    def contains(self, x: Any) -> bool:
        return x == self.zero_element or self.parent.contains(x)

    def nu_to_zero(self, x: LayeredElement) -> LayeredElement:
        """The transition into the zero layer sends every element to 0_R."""
        return self.zero_element

    @cached_property
    def _domain(self) -> Domain:
        parent_domain = self.parent.domain()
        if parent_domain.elements is not None:
            return Domain(elements=(self.zero_element,) + parent_domain.elements)

        def sample(rng: Any) -> LayeredElement:
            if rng.random() < 0.1:
                return self.zero_element
            return parent_domain.draw(rng)

        return Domain(sampler=sample)

    def domain(self) -> Domain:
        return self._domain

    def _transition(self, x: LayeredElement, m: Sort) -> LayeredElement:
        return self.parent.nu_transition(m, x)


def adjoin_zero(R: LayeredSemiring) -> PointedSemiring:
    """Adjoin 0_R as the whole zero layer.

    Raises:
        AlreadyPointedError: If R already has a zero element or a zero layer
    """
    if isinstance(R, ConstructedSemiring):
        occupied = not R.ideal.is_empty or R.whole_zero_layer
    else:
        occupied = R.is_finite and any(R.is_zero_sort(x) for x in R.elements())
    if occupied or R.zero is not None:
        raise AlreadyPointedError(f"{R.name} already has a zero layer")
    return PointedSemiring(R)


def adjoin_zero_layer(R: ConstructedSemiring) -> ConstructedSemiring:
    """Adjoin the copy e_0 R_1 of the tangible layer as R_0.

    Raises:
        NotUniformError: If R has an ideal in sort 0, so transitions are not bijective
    """
    if not R.ideal.is_empty or R.whole_zero_layer:
        raise NotUniformError(f"{R.name} is not uniform")
    return ConstructedSemiring(
        R.sorting, R.base, EMPTY_IDEAL, whole_zero_layer=True, name=f"{R.name}+e0"
    )


def rho_collapse(sort: Sort) -> Sort:
    """0 -> 0, 1 -> 1, every other sort -> inf."""
    if sort in (0, 1):
        return sort
    return INFINITY


class GhostedSemiring(ConstructedSemiring):
    """U(R) = R together with a ghost copy R_inf; e = <1>^inf."""

    def __init__(self, R: ConstructedSemiring):
        super().__init__(
            R.sorting.with_infinity(),
            R.base,
            R.ideal,
            whole_zero_layer=R.whole_zero_layer,
            name=f"U({R.name})",
        )
        self.tangible = R

    @property
    def ghost_unit(self) -> LayeredElement:
        return LayeredElement(self.base.one, INFINITY)

    def nu(self, x: LayeredElement) -> LayeredElement:
        if x.sort in (self.sorting.zero, INFINITY):
            return x
        return LayeredElement(x.value, INFINITY)

    def is_ghost_element(self, x: LayeredElement) -> bool:
        return x.sort in (self.sorting.zero, INFINITY)

    def to_standard(self) -> tuple[ConstructedSemiring, LayeredMap]:
        collapse = standard_collapse_map(self)
        assert isinstance(collapse.dst, ConstructedSemiring)
        return collapse.dst, collapse


class GhostLayer(LayeredSemiring):
    """G(U) = R_inf with R_0, a semiring with unit e."""

    def __init__(self, U: GhostedSemiring):
        self.parent = U
        self.sorting = U.sorting
        self.name = f"G({U.name})"

    @property
    def one(self) -> LayeredElement:
        return self.parent.ghost_unit

    def add(self, x: LayeredElement, y: LayeredElement) -> LayeredElement:
        return self.parent.add(x, y)

    def mul(self, x: LayeredElement, y: LayeredElement) -> LayeredElement:
        return self.parent.mul(x, y)

    def sort_of(self, x: LayeredElement) -> Sort:
        return x.sort

    def value_cmp(self, x: LayeredElement, y: LayeredElement) -> int:
        return self.parent.value_cmp(x, y)

    def contains(self, x: Any) -> bool:
        return self.parent.contains(x) and self.parent.is_ghost_element(x)

    @cached_property
    def _domain(self) -> Domain:
        U = self.parent
        if U.is_finite:
            return Domain(elements=tuple(x for x in U.elements() if U.is_ghost_element(x)))
        return Domain(sampler=lambda rng: U.nu(U.sample(rng)))

    def domain(self) -> Domain:
        return self._domain

    def _transition(self, x: LayeredElement, m: Sort) -> LayeredElement:
        return self.parent.nu_transition(m, x)


def build_U(R: ConstructedSemiring) -> GhostedSemiring:
    return GhostedSemiring(R)


def ghost_map(U: GhostedSemiring) -> LayeredMap:
    """ν: U -> G(U)."""
    return LayeredMap(name="ghost", src=U, dst=GhostLayer(U), phi=U.nu, rho=rho_collapse)


def degenerate_standard(R: ConstructedSemiring) -> ConstructedSemiring:
    """The standard supertropical instance over {0, 1, inf} with the same values."""
    return R.with_sorting(
        make_sorting(SortingKind.TRIVIAL01INF), name=f"R_1,inf({R.base.name})"
    )


def standard_collapse_map(R: ConstructedSemiring) -> LayeredMap:
    """<a>^k -> <a>^rho(k) with rho collapsing every sort above 1 to inf."""
    dst = degenerate_standard(R)
    return LayeredMap(
        name="collapse",
        src=R,
        dst=dst,
        phi=lambda x: LayeredElement(x.value, rho_collapse(x.sort)),
        rho=rho_collapse,
    )


def check_ghost(
    U: GhostedSemiring,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> CheckReport:
    """Semiring laws of U, the ghost map ν and the standard degeneration.

    Args:
        U: Ghosted semiring
        budget: Samples per law when not exhaustive
        seed: Sampling seed
        exhaustive_limit: Largest tuple count enumerated exhaustively

    Returns:
        CheckReport over U and its collapse onto the {0, 1, inf} instance
    """
    checker = LawChecker(budget=budget, seed=seed, exhaustive_limit=exhaustive_limit)
    report = CheckReport(title=f"ghost layer of {U.name}")
    domain = U.domain()
    nu, e = U.nu, U.ghost_unit
    D, collapse = U.to_standard()
    D_domain = D.domain()
    ghost_sort = INFINITY

    for result in semiring_laws(U, checker):
        report.add(result)

    def standard_case(a: LayeredElement, b: LayeredElement) -> bool:
        order = D.value_cmp(a, b)
        expected = a if order > 0 else b if order < 0 else D.mul(D.layer_unit(ghost_sort), a)
        return D.add(a, b) == expected

    def standard_nu_equivalent(x: LayeredElement, y: LayeredElement) -> bool:
        folded = D.add(collapse(x), collapse(y))
        return U.base.g_cmp(folded.value, U.add(x, y).value) == 0

    laws: list[tuple[str, Domain, int, Callable[..., bool]]] = [
        ("nu_idempotent", domain, 1, lambda x: nu(nu(x)) == nu(x)),
        ("nu_multiplicative", domain, 2, lambda x, y: nu(U.mul(x, y)) == U.mul(nu(x), nu(y))),
        ("nu_additive", domain, 2, lambda x, y: nu(U.add(x, y)) == U.add(nu(x), nu(y))),
        ("nu_is_ghost_unit_product", domain, 1, lambda x: nu(x) == U.mul(e, x)),
        (
            "ghost_layer_bipotent",
            domain,
            2,
            lambda x, y: x.sort != ghost_sort
            or y.sort != ghost_sort
            or U.add(x, y) in (x, y),
        ),
        (
            "ghost_ideal",
            domain,
            2,
            lambda x, y: not U.is_ghost_element(x) or U.is_ghost_element(U.mul(x, y)),
        ),
        (
            "ghosts_are_images",
            domain,
            1,
            lambda x: x.sort != ghost_sort
            or nu(LayeredElement(x.value, U.sorting.one)) == x
            and U.contains(LayeredElement(x.value, U.sorting.one)),
        ),
        ("standard_sum_table", D_domain, 2, standard_case),
        (
            "standard_bipotent",
            D_domain,
            2,
            lambda a, b: D.nu_equiv(a, b) or D.add(a, b) in (a, b),
        ),
        ("standard_nu_equivalent", domain, 2, standard_nu_equivalent),
        (
            "collapse_additive",
            domain,
            2,
            lambda x, y: collapse(U.add(x, y)) == D.add(collapse(x), collapse(y)),
        ),
        (
            "collapse_multiplicative",
            domain,
            2,
            lambda x, y: collapse(U.mul(x, y)) == D.mul(collapse(x), collapse(y)),
        ),
    ]
    for name, law_domain, arity, predicate in laws:
        report.add(checker.check(name, law_domain, arity, predicate))
    return report


def require_constructed(R: LayeredSemiring) -> ConstructedSemiring:
    if not isinstance(R, ConstructedSemiring):
        raise DomainMismatchError(f"{R.name} is not built from a valued monoid")
    return R
