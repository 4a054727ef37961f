"""Tests for layered morphisms, supervaluations and transmissions."""

from fractions import Fraction

import pytest

from laysem.core import ConstructedSemiring, LayeredElement, LayeredMap, build_layered, identity_map
from laysem.errors import DomainMismatchError, NotDominatedError, NotEnumerableError
from laysem.extensions import rho_collapse, standard_collapse_map
from laysem.monoids import ValuedMonoid
from laysem.morphisms import (
    SupervaluationVariant,
    TransmissionVariant,
    as_transmission,
    check_domination,
    check_homomorphic_transmission,
    check_layered_hom,
    check_layered_morphism,
    check_semiring_hom,
    check_supervaluation,
    check_surpassing_map,
    check_transmission,
    compose_with_supervaluation,
    enumerate_monoid_maps,
    frobenius_map,
    ghost_value_collapse,
    identity_transmission,
    induced_transmission,
    matrix_frobenius_check,
    permanent,
    rational_field,
    sort_collapse_map,
    trivial_supervaluation,
    zero_layer_inclusion,
)
from laysem.sorting import SortingKind, SortingSemiring, make_sorting
from laysem.tropical import default_target, psi_supervaluation, puiseux_field
from tests.fixtures.instance_loader import el, els


@pytest.mark.morphisms
class TestLayeredMorphisms:
    """Test the homomorphism, morphism and surpassing-map checkers."""

    def test_identity_is_layered_morphism(self, r21: ConstructedSemiring):
        report = check_layered_morphism(identity_map(r21))

        assert report.passed, report.render()
        assert "M3_nu_equivalence" in report.laws()

    def test_frobenius_is_surpassing_not_additive(self, r21: ConstructedSemiring):
        """Test that a -> a^2 surpasses the sum of squares without being additive."""
        square = frobenius_map(r21, 2)

        surpassing = check_surpassing_map(square)
        assert surpassing.passed, surpassing.render()

        hom = check_semiring_hom(square)
        assert not hom.get("hom_additive").passed
        a = el(r21, "1@1")
        assert square(r21.add(a, a)) == LayeredElement(2, 4)
        assert r21.add(square(a), square(a)) == LayeredElement(2, 2)

    def test_zero_layer_inclusion(self, trunc4: SortingSemiring, trunc_nat5: ValuedMonoid):
        """Test that R(L*, M) -> R(L, M)_a sends <5>^k to <5>^0."""
        inclusion = zero_layer_inclusion(trunc4, trunc_nat5)

        assert inclusion(LayeredElement(5, 3)) == LayeredElement(5, 0)
        report = check_layered_hom(inclusion)
        assert report.passed, report.render()

    def test_sort_collapse_onto_standard(self, r21: ConstructedSemiring, trunc_nat5: ValuedMonoid):
        dst = build_layered(make_sorting(SortingKind.TRIVIAL01INF), trunc_nat5)
        collapse = sort_collapse_map(r21, dst, rho_collapse)

        report = check_layered_hom(collapse)
        assert report.passed, report.render()

    def test_ghost_value_collapse_breaks_nu_classes(self, r21: ConstructedSemiring):
        """Test that <2>^1 and <2>^2 land in different nu-classes."""
        collapse = ghost_value_collapse(r21)
        report = check_layered_morphism(collapse)

        assert not report.get("M3_nu_equivalence").passed
        assert not r21.nu_equiv(*(collapse(x) for x in els(r21, "2@1", "2@2")))

    def test_sampled_collapse_map(self, natinf_qmax: ConstructedSemiring):
        collapse = standard_collapse_map(natinf_qmax)
        report = check_layered_hom(collapse, budget=300)

        assert report.passed, report.render()
        assert report.sampled

    def test_missing_sort_map(self, r21: ConstructedSemiring):
        bare = LayeredMap(name="bare", src=r21, dst=r21, phi=lambda x: x)

        with pytest.raises(DomainMismatchError):
            check_layered_hom(bare)


@pytest.mark.morphisms
class TestSupervaluations:
    """Test LV1-LV4, domination and the induced transmissions."""

    def test_psi_is_zo_supervaluation(self):
        """Test that psi_1 into R(nat-inf, qmax) satisfies the ZO laws; LV4 needs a zero."""
        report = check_supervaluation(psi_supervaluation(), SupervaluationVariant.ZO, budget=300)

        assert report.passed, report.render()
        assert "LV4_zero" not in report.laws()
        assert "ZO_range" in report.laws()

    def test_trivial_dagger_supervaluation(self):
        report = check_supervaluation(
            trivial_supervaluation(rational_field()), SupervaluationVariant.DAGGER, budget=300
        )

        assert report.passed, report.render()
        assert "LV4_zero" not in report.laws()

    def test_trivial_rejects_zero(self):
        trivial = trivial_supervaluation(rational_field())

        with pytest.raises(DomainMismatchError):
            trivial(Fraction(0))

    def test_psi_dominates_trivial(self):
        psi = psi_supervaluation()
        trivial = trivial_supervaluation(psi.domain)

        forward = check_domination(psi, trivial, SupervaluationVariant.ZO, budget=400)
        assert forward.passed, forward.render()

        backward = check_domination(trivial, psi, SupervaluationVariant.ZO, budget=400)
        assert not backward.get("D1_fibres").passed

    def test_induced_transmission_to_trivial(self):
        """Test that the induced map collapses every value onto 1 and is not homomorphic."""
        psi = psi_supervaluation()
        alpha = induced_transmission(psi, trivial_supervaluation(psi.domain), budget=400)
        report = check_homomorphic_transmission(alpha)

        assert not report.get("homomorphic").passed
        assert not report.get("strictly_nu_preserving").passed
        assert report.get("homomorphic_iff_strict").passed

    def test_undominated_pair(self):
        psi = psi_supervaluation()

        with pytest.raises(NotDominatedError):
            induced_transmission(trivial_supervaluation(psi.domain), psi, budget=400)

    def test_collapse_round_trip(self):
        """Test that Phi_w = collapse . Phi_v is dominated and induces a homomorphic map."""
        R = default_target()
        phi_v = psi_supervaluation(R)
        phi_w = compose_with_supervaluation(as_transmission(standard_collapse_map(R)), phi_v)

        domination = check_domination(phi_v, phi_w, SupervaluationVariant.ZO, budget=400)
        assert domination.passed, domination.render()

        alpha = induced_transmission(phi_v, phi_w, budget=400)
        transmission = check_transmission(alpha, TransmissionVariant.ZO)
        assert transmission.passed, transmission.render()

        homomorphic = check_homomorphic_transmission(alpha)
        assert homomorphic.get("homomorphic").passed
        assert homomorphic.get("strictly_nu_preserving").passed

    def test_composition_needs_matching_target(self, r21: ConstructedSemiring):
        with pytest.raises(DomainMismatchError):
            compose_with_supervaluation(
                as_transmission(standard_collapse_map(r21)), psi_supervaluation()
            )

    def test_puiseux_field_units(self):
        K = puiseux_field()

        assert not K.is_unit(K.zero)
        assert K.is_unit(K.one)


@pytest.mark.morphisms
class TestTransmissions:
    """Test TM1-TM3 and the enumeration of small monoid maps."""

    def test_identity_transmission(self, r21: ConstructedSemiring):
        report = check_transmission(identity_transmission(r21))

        assert report.passed, report.render()
        assert report.laws() == [
            "TM1_unit",
            "TM2_multiplicative",
            "TM3_sums",
            "nu_preserving",
            "patch_equivalence",
        ]

    def test_enumerate_three_element_maps(self, r3: ConstructedSemiring):
        """Test that R(trunc:1, trunc-nat:2) has three endomorphisms of its monoid."""
        maps = list(enumerate_monoid_maps(r3, r3))

        assert len(maps) == 3
        assert all(alpha(r3.one) == r3.one for alpha in maps)

    def test_patch_equivalence_on_all_maps(self, r5: ConstructedSemiring):
        """Test that TM3 and nu-preservation agree on every monoid map of R(trunc:2, trunc-nat:2)."""
        maps = list(enumerate_monoid_maps(r5, r5))

        assert any(all(alpha(x) == x for x in r5.elements()) for alpha in maps)
        for alpha in maps:
            report = check_transmission(alpha)
            assert report.get("patch_equivalence").passed, f"{alpha.name}: {report.render()}"

    def test_enumeration_size_limit(self, r21: ConstructedSemiring):
        with pytest.raises(NotEnumerableError):
            list(enumerate_monoid_maps(r21, r21))

    def test_star_import_exposes_checkers(self):
        """Test that a wildcard import brings in the checkers."""
        namespace: dict = {}
        exec("from laysem.morphisms import *", namespace)

        expected = {
            "check_transmission",
            "check_supervaluation",
            "induced_transmission",
            "permanent",
        }
        assert expected <= set(namespace)


@pytest.mark.morphisms
class TestMatrices:
    """Test permanents and the matrix Frobenius property."""

    def test_permanent(self, natinf_qmax: ConstructedSemiring):
        """Test that equal competing products add their sorts."""
        matrix = [
            [LayeredElement(Fraction(1), 1), LayeredElement(Fraction(2), 1)],
            [LayeredElement(Fraction(3), 1), LayeredElement(Fraction(4), 1)],
        ]

        assert permanent(natinf_qmax, matrix) == LayeredElement(Fraction(5), 2)

    def test_matrix_frobenius(self, r21: ConstructedSemiring):
        report = matrix_frobenius_check(r21, budget=100)

        assert report.passed, report.render()
        assert report.laws() == ["matrix_frobenius_m2"]

    @pytest.mark.parametrize("m", [2, 3])
    def test_matrix_frobenius_over_qmax(self, natinf_qmax: ConstructedSemiring, m: int):
        """Test 500 seeded 2x2 matrix pairs over R(nat-inf, qmax).

        Args:
            natinf_qmax: Infinite instance
            m: Frobenius exponent
        """
        report = matrix_frobenius_check(natinf_qmax, m=m, budget=500)
        result = report.get(f"matrix_frobenius_m{m}")

        assert report.passed, report.render()
        assert result.sampled
        assert result.examined == 500
