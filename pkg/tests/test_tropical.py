"""Tests for Puiseux series, layered tropicalization and the layering functors."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from laysem.core import ConstructedSemiring, LayeredElement, build_layered
from laysem.errors import DomainMismatchError, NotARootError, ParseError, ZeroSeriesError
from laysem.extensions import adjoin_zero_layer
from laysem.monoids import TripleMorphism, make_trivial_monoid, make_truncated_nat
from laysem.morphisms import check_semiring_hom, check_zero_excepted
from laysem.sorting import SortingKind, make_sorting
from laysem.tropical import (
    PuiseuxPolynomial,
    PuiseuxSeries,
    check_functor_laws,
    check_kapranov_map,
    check_kapranov_polynomials,
    check_vanishing_sums,
    eval_layered_poly,
    forgetful_round_trip,
    is_corner_root,
    kapranov_check,
    layering_functor_object,
    parse_polynomial,
    parse_roots,
    psi_ell,
    random_roots,
    tropicalization_functor_morphism,
    tropicalization_functor_object,
    tropicalize_poly,
    val,
)
from tests.fixtures.instance_loader import InstanceLoader
from tests.fixtures.strategies import series


def _t(exponent: int, c: int = 1) -> PuiseuxSeries:
    return PuiseuxSeries.monomial(c, exponent)


@pytest.mark.tropical
class TestPuiseuxSeries:
    """Test the series arithmetic and the valuation."""

    def test_parse_and_render(self):
        p = PuiseuxSeries.parse("1*t^(-1) - 1/2*t^(2)")

        assert str(p) == "1*t^(-1) - 1/2*t^(2)"
        assert val(p) == 1

    @pytest.mark.parametrize("text", ["1*t^(1) 2*t^(2)", "t^(1)", "", "1*t^(x)"])
    def test_malformed_series(self, text: str):
        """Test that later terms need a sign and every term needs a coefficient."""
        with pytest.raises(ParseError):
            PuiseuxSeries.parse(text)

    def test_zero_series_has_no_valuation(self):
        zero = PuiseuxSeries.parse("0")

        assert zero.is_zero
        with pytest.raises(ZeroSeriesError):
            val(zero)

    def test_arithmetic(self):
        """Test (1 + t)(1 - t) = 1 - t^2 with cancelling middle terms."""
        one = PuiseuxSeries.constant(1)

        product = (one + _t(1)) * (one - _t(1))

        assert product == PuiseuxSeries.from_terms([(0, 1), (2, -1)])
        assert (_t(1) - _t(1)).is_zero

    @settings(max_examples=200, deadline=None)
    @given(p=series(), q=series())
    def test_valuation_is_multiplicative(self, p: PuiseuxSeries, q: PuiseuxSeries):
        assert val(p * q) == val(p) + val(q)

    @settings(max_examples=200, deadline=None)
    @given(p=series(), q=series())
    def test_valuation_of_sum_is_bounded(self, p: PuiseuxSeries, q: PuiseuxSeries):
        """Test that val(p + q) <= max(val p, val q) whenever p + q is nonzero."""
        total = p + q
        if not total.is_zero:
            assert val(total) <= max(val(p), val(q))


@pytest.mark.tropical
class TestPolynomials:
    """Test polynomial files, tropicalization and corner roots."""

    def test_from_roots_matches_file(self, loader: InstanceLoader):
        """Test that (lambda - t^-1)(lambda + t^-1) is the shipped quadratic."""
        f = parse_polynomial(loader.path("quadratic.poly").read_text())

        assert PuiseuxPolynomial.from_roots([_t(-1), _t(-1, -1)]) == f
        assert f.degree == 2
        assert f.evaluate(_t(-1)).is_zero

    def test_tropicalize(self, loader: InstanceLoader):
        f = parse_polynomial(loader.path("quadratic.poly").read_text())
        F = tropicalize_poly(None, f)

        assert F.render() == "lambda^2 : 0@1\nlambda^0 : 2@1"

    @pytest.mark.parametrize(
        "point,value,corner",
        [(Fraction(1), LayeredElement(Fraction(2), 2), True), (Fraction(5), LayeredElement(Fraction(10), 1), False)],
    )
    def test_corner_roots(self, loader: InstanceLoader, point: Fraction, value, corner: bool):
        """Test that two tying monomials give a ghost evaluation.

        Args:
            loader: InstanceLoader
            point: Tangible value substituted for lambda
            value: Expected evaluation
            corner: Whether the evaluation lands in a ghost sort
        """
        F = tropicalize_poly(None, parse_polynomial(loader.path("quadratic.poly").read_text()))
        x = LayeredElement(point, 1)

        assert eval_layered_poly(F, x) == value
        assert is_corner_root(F, x) is corner

    def test_kapranov(self, loader: InstanceLoader):
        f = parse_polynomial(loader.path("quadratic.poly").read_text())
        roots = parse_roots(loader.path("quadratic.roots").read_text())
        report = kapranov_check(f, roots)

        assert report.passed, report.render()
        assert report.get("corner_root_0").note == "root 1*t^(-1) -> 2@2"

    def test_non_root_is_rejected(self, loader: InstanceLoader):
        f = parse_polynomial(loader.path("quadratic.poly").read_text())

        with pytest.raises(NotARootError):
            kapranov_check(f, [PuiseuxSeries.parse("2*t^(-1)")])

    def test_zero_root_is_named(self):
        """Test that lambda(lambda - t) reports its zero root by position."""
        roots = [_t(1), PuiseuxSeries.zero()]
        f = PuiseuxPolynomial.from_roots(roots)

        with pytest.raises(ZeroSeriesError, match="root 1 is the zero series"):
            kapranov_check(f, roots)

    def test_random_roots_shape(self):
        """Test that generated roots give monic polynomials of degree at most 4."""
        rng = random.Random(5)
        for _ in range(50):
            roots = random_roots(rng)
            f = PuiseuxPolynomial.from_roots(roots)

            assert 1 <= f.degree == len(roots) <= 4
            assert f.coefficients[f.degree] == PuiseuxSeries.constant(1)
            assert all(f.evaluate(root).is_zero for root in roots)
            assert all(e.denominator <= 6 for root in roots for e, _ in root.terms)

    def test_random_polynomials_have_corner_roots(self):
        report = check_kapranov_polynomials(budget=40, seed=3)

        assert report.passed, report.render()
        assert report.laws() == ["kapranov_polynomials"]

    def test_duplicate_monomial(self, loader: InstanceLoader):
        with pytest.raises(ParseError) as exc_info:
            parse_polynomial(loader.path("duplicate.poly").read_text())

        assert exc_info.value.line == 2

    @pytest.mark.parametrize("text", ["lambda^1 : 0", "# only a comment\n", "lambda : 1*t^(0)"])
    def test_bad_polynomials(self, text: str):
        with pytest.raises(ParseError):
            parse_polynomial(text)


@pytest.mark.tropical
class TestPsi:
    """Test psi_ell and the Kapranov supervaluation."""

    def test_psi_into_r21(self, r21: ConstructedSemiring):
        """Test that valuations landing in the ideal move to sort 0."""
        assert psi_ell(r21, 1, _t(-2)) == LayeredElement(2, 1)
        assert psi_ell(r21, 3, _t(-2)) == LayeredElement(2, 3)
        assert psi_ell(r21, 1, _t(-5)) == LayeredElement(5, 0)

    def test_psi_outside_target(self, r21: ConstructedSemiring):
        with pytest.raises(DomainMismatchError):
            psi_ell(r21, 1, _t(1))

    def test_psi_of_zero(self, natinf_qmax: ConstructedSemiring):
        with pytest.raises(ZeroSeriesError):
            psi_ell(natinf_qmax, 1, PuiseuxSeries.zero())

    def test_kapranov_map(self):
        report = check_kapranov_map(budget=300)

        assert report.passed, report.render()
        assert "kapranov_surpassing" in report.laws()

    def test_vanishing_sums_are_ghost(self):
        report = check_vanishing_sums(budget=200)

        assert report.passed, report.render()
        assert report.get("vanishing_sum_ghost").examined == 200


@pytest.mark.tropical
class TestFunctors:
    """Test the layering and tropicalization functors."""

    @pytest.mark.parametrize("functor", ["layering", "tropicalization"])
    def test_functor_laws(self, functor: str):
        """Test identities and composition on trunc-nat:7 -> trunc-nat:5 -> trunc-nat:3.

        Args:
            functor: Functor name
        """
        report = check_functor_laws(functor)

        assert report.passed, report.render()
        assert f"{functor}_identity[trunc-nat:5]" in report.laws()

    def test_unknown_functor(self):
        with pytest.raises(KeyError):
            check_functor_laws("forgetful")

    def test_collapsing_triple_is_only_zero_excepted(self):
        """Test that collapsing trunc-nat:1 onto {0} fails additivity at 0@1 + 1@0."""
        L = make_sorting(SortingKind.TRUNCATED, 3)
        collapse = TripleMorphism(
            name="collapse",
            src=make_truncated_nat(1),
            dst=make_trivial_monoid(),
            phi_M=lambda a: 0,
            phi_G=lambda a: 0,
        )
        src = tropicalization_functor_object(L, collapse.src).semiring
        dst = adjoin_zero_layer(build_layered(L, collapse.dst))
        image = tropicalization_functor_morphism(L, collapse, src, dst)

        excepted = check_zero_excepted(image)
        assert excepted.passed, excepted.render()

        hom = check_semiring_hom(image)
        assert not hom.get("hom_additive").passed

    def test_forgetful_round_trip(self):
        image = layering_functor_object(make_sorting(SortingKind.TRUNCATED, 3), make_truncated_nat(5))
        recovered, isomorphic = forgetful_round_trip(image)

        assert isomorphic
        assert recovered.elements() == (0, 1, 2, 3, 4, 5)
