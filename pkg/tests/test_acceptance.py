"""End-to-end suites over the reference instances."""

import itertools

import pytest

from laysem.core import (
    ConstructedSemiring,
    LayeredMap,
    build_layered,
    check_axioms,
    check_frobenius,
    check_surpassing,
)
from laysem.extensions import sort_truncation_map, standard_collapse_map, truncate_instance
from laysem.morphisms import (
    SupervaluationVariant,
    TransmissionVariant,
    as_transmission,
    check_domination,
    check_homomorphic_transmission,
    check_supervaluation,
    check_transmission,
    compose_with_supervaluation,
    induced_transmission,
)
from laysem.monoids import ValuedMonoid, make_qmax
from laysem.reports import CheckReport
from laysem.sorting import SortingKind, SortingSemiring, make_sorting, parse_sorting
from laysem.tropical import (
    check_functor_laws,
    check_kapranov_map,
    check_kapranov_polynomials,
    default_target,
    kapranov_check,
    load_polynomial,
    load_roots,
    psi_supervaluation,
)
from tests.fixtures.instance_loader import InstanceLoader


@pytest.mark.acceptance
class TestReferenceInstances:
    """Every finite reference instance is a layered semiring, checked exhaustively."""

    @pytest.mark.parametrize("case_id", ["r21", "r5", "r13"])
    def test_axioms_hold(self, loader: InstanceLoader, case_id: str):
        """Test the axiom, surpassing and Frobenius suites together.

        Args:
            loader: InstanceLoader
            case_id: Entry of instances.yaml
        """
        R = loader.case(case_id).build()
        report = CheckReport(title=case_id)
        for part in (check_axioms(R), check_surpassing(R), check_frobenius(R)):
            report.extend(part)

        assert report.passed, f"{case_id}:\n{report.render()}"
        assert not report.sampled

    def test_golden_report_from_library(self, loader: InstanceLoader):
        """Test that the rendered suites reproduce the golden file without the CLI."""
        R = loader.case("r21").build()
        report = CheckReport(title="r21")
        for part in (check_axioms(R), check_surpassing(R), check_frobenius(R)):
            report.extend(part)

        assert report.render().splitlines() == loader.golden("check_axioms_trunc4_truncnat5.txt")

    def test_sampled_instance_is_reproducible(self, natinf_qmax):
        first = check_axioms(natinf_qmax, budget=200, seed=11).render()
        second = check_axioms(natinf_qmax, budget=200, seed=11).render()

        assert first == second
        assert "[sampled]" in first


@pytest.mark.acceptance
class TestTruncationOrder:
    """Both truncation orders agree on R(nat-inf, qmax)."""

    def test_orders_agree_on_names(self):
        L, M = make_sorting(SortingKind.NAT_INF), make_qmax()

        nu_first = truncate_instance(L, M, nu=4, sort=3)
        sort_first = truncate_instance(L, M, nu=4, sort=3, sort_first=True)

        assert nu_first.name == sort_first.name == "R(nat-inf|3, qmax+|4)"

    def test_orders_agree_on_tables(self, trunc4: SortingSemiring, trunc_nat5: ValuedMonoid):
        """Test that both orders on R(trunc:4, trunc-nat:5) give the same 7-element semiring."""
        nu_first = truncate_instance(trunc4, trunc_nat5, nu=3, sort=2)
        sort_first = truncate_instance(trunc4, trunc_nat5, nu=3, sort=2, sort_first=True)
        carrier = nu_first.elements()

        assert carrier == sort_first.elements()
        assert len(carrier) == 7
        for x, y in itertools.product(carrier, repeat=2):
            assert nu_first.add(x, y) == sort_first.add(x, y), f"{x} + {y}"
            assert nu_first.mul(x, y) == sort_first.mul(x, y), f"{x} * {y}"


@pytest.mark.acceptance
class TestTropicalization:
    """Kapranov and the supervaluation round trip over R(nat-inf, qmax)."""

    def test_quadratic_roots_are_corners(self, loader: InstanceLoader):
        f = load_polynomial(loader.path("quadratic.poly"))
        report = kapranov_check(f, load_roots(loader.path("quadratic.roots")))

        assert report.passed, report.render()
        assert report.laws() == ["corner_root_0", "corner_root_1"]

    def test_kapranov_map(self):
        assert check_kapranov_map(budget=500).passed

    def test_random_monic_polynomials(self):
        """Test 100 seeded products of up to four linear factors."""
        report = check_kapranov_polynomials(budget=100)
        result = report.get("kapranov_polynomials")

        assert report.passed, report.render()
        assert result.examined == 100
        assert result.sampled

    def test_supervaluation_round_trip(self):
        """Test that collapse . psi is dominated by psi through a homomorphic transmission."""
        R = default_target()
        phi_v = psi_supervaluation(R)
        phi_w = compose_with_supervaluation(as_transmission(standard_collapse_map(R)), phi_v)
        alpha = induced_transmission(phi_v, phi_w)

        assert check_domination(phi_v, phi_w, SupervaluationVariant.ZO).passed
        assert check_transmission(alpha, TransmissionVariant.ZO).passed
        assert check_homomorphic_transmission(alpha).passed

    @pytest.mark.parametrize("functor", ["layering", "tropicalization"])
    def test_functors_on_longer_chain(self, functor: str):
        report = check_functor_laws(functor, chain=(9, 7, 5, 3, 2))

        assert report.passed, report.render()
        assert len(report.laws()) == 5 + 3


ROUND_TRIP_SORTINGS = ("nat-inf", "trunc:3", "trunc:4", "trunc:5", "trunc:6")
ROUND_TRIP_COLLAPSES = ("collapse", "trunc-sort:2")
ROUND_TRIP_SEEDS = (3, 17, 101, 1729, 2**32 + 7)


def _collapse(R: ConstructedSemiring, name: str) -> LayeredMap:
    if name == "collapse":
        return standard_collapse_map(R)
    return sort_truncation_map(R, int(name.partition(":")[2]))


@pytest.mark.acceptance
class TestSupervaluationRoundTrips:
    """psi_1 dominates every sort collapse of itself through a homomorphic transmission."""

    @pytest.mark.parametrize(
        "sorting,collapse,seed",
        list(itertools.product(ROUND_TRIP_SORTINGS, ROUND_TRIP_COLLAPSES, ROUND_TRIP_SEEDS)),
    )
    def test_dominated_pair(self, sorting: str, collapse: str, seed: int):
        """Test phi_v = psi_1 into R(L, qmax) against phi_w = rho . phi_v.

        Args:
            sorting: Sorting semiring of the target
            collapse: Sort map applied after psi_1
            seed: Sampling seed shared by every check
        """
        R = build_layered(parse_sorting(sorting), make_qmax())
        phi_v = psi_supervaluation(R)
        phi_w = compose_with_supervaluation(as_transmission(_collapse(R, collapse)), phi_v)
        budget = 150

        for phi in (phi_v, phi_w):
            report = check_supervaluation(phi, SupervaluationVariant.ZO, budget=budget, seed=seed)
            assert report.passed, f"{phi.name}:\n{report.render()}"

        domination = check_domination(
            phi_v, phi_w, SupervaluationVariant.ZO, budget=budget, seed=seed
        )
        assert domination.passed, domination.render()

        alpha = induced_transmission(phi_v, phi_w, budget=budget, seed=seed)
        transmission = check_transmission(alpha, TransmissionVariant.ZO, budget=budget, seed=seed)
        assert transmission.passed, transmission.render()

        homomorphic = check_homomorphic_transmission(alpha, budget=budget, seed=seed)
        assert homomorphic.get("homomorphic_iff_strict").passed, homomorphic.render()
        assert homomorphic.get("homomorphic").passed, homomorphic.render()
