import math

import numpy as np
import pytest

from src.errors import SingularIntegrandError
from src.geometry import CarlesonBox, HalfPlanePoint, Interval, upper_box
from src.quadrature import (
    IntegralEstimate,
    QuadratureSpec,
    WeightParameter,
    bergman_norm,
    cell_rule,
    descendant_union_measure,
    half_sine_moment,
    integrate_disk,
    integrate_halfplane,
    integrate_region,
    integrate_region_box,
    measure_alpha,
    pullback_measure,
    rectangle_measure,
    sampled_decay_exponent,
)
from src.symbols import SymbolExpression, mobius

ALPHAS = [-0.5, 0.0, 1.0, 2.5]


def _inverse_square(z):
    return np.abs(z + 1j) ** -2.0


def _near_pole(z):
    return np.abs(z - (0.5 - 0.05j)) ** -2.0


class TestClosedForms:
    def test_unit_box(self):
        assert measure_alpha(CarlesonBox(Interval(0, 1)), 0.0) == pytest.approx(1.0 / math.pi)

    def test_box_alpha_one(self):
        assert measure_alpha(CarlesonBox(Interval(0, 2)), 1.0) == pytest.approx(16.0 / math.pi)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_box_scaling(self, alpha):
        box = CarlesonBox(Interval(0, 8))
        expected = 2.0**alpha / math.pi * 8.0 ** (alpha + 2.0)
        assert measure_alpha(box, alpha) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_descendants_carry_fixed_fraction(self, alpha):
        box = CarlesonBox(Interval(-1, 4))
        ratio = descendant_union_measure(box, alpha) / measure_alpha(box, alpha)
        assert ratio == pytest.approx(2.0 ** -(alpha + 1.0), rel=1e-12)

    def test_rectangle_clipped_to_halfplane(self):
        assert rectangle_measure(0.0, 1.0, -3.0, 1.0, 0.0) == pytest.approx(1.0 / math.pi)
        assert rectangle_measure(0.0, 1.0, 2.0, 1.0, 0.0) == 0.0

    def test_whitney_rectangle(self):
        top = upper_box(Interval(0, 1))
        assert measure_alpha(top, 0.0) == pytest.approx(0.5 / math.pi)

    def test_alpha_must_exceed_minus_one(self):
        with pytest.raises(ValueError):
            measure_alpha(CarlesonBox(Interval(0, 1)), -1.0)
        with pytest.raises(ValueError):
            WeightParameter(alpha=-1.0)

    def test_half_sine_moment(self):
        assert half_sine_moment(0.0) == pytest.approx(math.pi)
        assert half_sine_moment(1.0) == pytest.approx(2.0)


class TestEstimates:
    def test_combine(self):
        a = IntegralEstimate(value=1.0, error_bound=0.1, cells_used=3)
        b = IntegralEstimate(value=2.0, error_bound=0.2, cells_used=4, converged=False)
        total = a.combine(b)
        assert total.value == 3.0
        assert total.error_bound == pytest.approx(0.3)
        assert total.cells_used == 7
        assert not total.converged

    def test_scaled_and_relative_error(self):
        estimate = IntegralEstimate(value=2.0, error_bound=0.02).scaled(-3.0)
        assert estimate.value == -6.0
        assert estimate.error_bound == pytest.approx(0.06)
        assert estimate.relative_error == pytest.approx(0.01)
        assert IntegralEstimate.exact(0.0).relative_error == 0.0

    def test_spec_window(self):
        spec = QuadratureSpec().around(3.0, 0.5)
        assert spec.x_lo == 3.0 - 65536.0
        assert spec.x_hi == 3.0 + 65536.0
        assert spec.tightened().rel_tol == pytest.approx(5e-7)
        with pytest.raises(ValueError):
            QuadratureSpec(x_lo=1.0, x_hi=0.0)


class TestCubature:
    @pytest.mark.parametrize("alpha", [0.0, 0.5, 3.0])
    def test_cell_rule_weights_sum_to_measure(self, alpha):
        x0, x1 = np.array([0.0, 0.0]), np.array([1.0, 2.0])
        y0, y1 = np.array([0.0, 0.5]), np.array([1.0, 2.0])
        _, weights = cell_rule(x0, x1, y0, y1, alpha)
        totals = weights.sum(axis=(1, 2))
        assert totals[0] == pytest.approx(rectangle_measure(0.0, 1.0, 0.0, 1.0, alpha), rel=1e-12)
        assert totals[1] == pytest.approx(rectangle_measure(0.0, 2.0, 0.5, 2.0, alpha), rel=1e-6)

    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("length", [0.25, 1.0, 8.0])
    def test_box_measure_by_quadrature(self, spec, ones, alpha, length):
        box = CarlesonBox(Interval(0, length))
        estimate = integrate_region_box(ones, box, alpha, spec)
        assert estimate.converged
        assert estimate.value == pytest.approx(measure_alpha(box, alpha), rel=1e-6)

    def test_polynomial_moment(self, spec):
        estimate = integrate_region(lambda z: z.real**2 * z.imag, 0.0, 1.0, 0.0, 2.0, 0.0, spec)
        assert estimate.value == pytest.approx((1.0 / 3.0) * 2.0 / math.pi, rel=1e-10)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_positive_integrand_has_positive_estimate(self, spec, alpha):
        estimate = integrate_region(_near_pole, 0.0, 1.0, 0.0, 1.0, alpha, spec)
        assert estimate.value > 0.0
        assert estimate.error_bound >= 0.0
        assert estimate.tail_estimate == 0.0

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_additive_over_a_split(self, spec, alpha):
        whole = integrate_region(_inverse_square, 0.0, 2.0, 0.0, 2.0, alpha, spec)
        left = integrate_region(_inverse_square, 0.0, 1.0, 0.0, 2.0, alpha, spec)
        right = integrate_region(_inverse_square, 1.0, 2.0, 0.0, 2.0, alpha, spec)
        assert whole.value == pytest.approx(left.value + right.value, rel=1e-6)

    def test_halving_the_tolerance_tightens_the_bound(self):
        specs = [QuadratureSpec(rel_tol=1e-4 * 0.5**k) for k in range(4)]
        estimates = [integrate_region(_near_pole, 0.0, 1.0, 0.0, 1.0, 0.0, s) for s in specs]
        finest = estimates[-1]
        for s, estimate in zip(specs, estimates):
            assert estimate.converged
            assert estimate.error_bound <= s.tolerance_for(estimate.value) * (1.0 + 1e-9)
            assert abs(estimate.value - finest.value) <= estimate.error_bound + finest.error_bound

    def test_disk_inside_halfplane(self, spec, ones):
        estimate = integrate_disk(ones, 2j, 1.0, 0.0, spec)
        assert estimate.value == pytest.approx(1.0, rel=1e-10)

    def test_half_disk_on_axis(self, spec, ones):
        estimate = integrate_disk(ones, 0.0, 1.0, 0.0, spec)
        assert estimate.value == pytest.approx(0.5, rel=1e-10)

    def test_singular_integrand_is_reported(self, spec):
        with pytest.raises(SingularIntegrandError):
            integrate_region(lambda z: np.full(z.shape, np.nan), 0.0, 1.0, 0.0, 1.0, 0.0, spec)

    def test_declared_pole_is_excluded(self):
        spec = QuadratureSpec(poles=[(0.5, 0.5)], pole_radius=1e-3, max_cells=4000)
        pole = 0.5 + 0.5j

        def integrand(z):
            return np.where(np.abs(z - pole) < 1e-3, np.inf, 1.0)

        estimate = integrate_region(integrand, 0.0, 1.0, 0.0, 1.0, 0.0, spec)
        assert estimate.value == pytest.approx(1.0 / math.pi, rel=1e-3)


class TestHalfPlane:
    def test_power_law_integral(self, spec):
        estimate = integrate_halfplane(
            lambda z: np.abs(z + 1j) ** -4.0, 0.0, spec.around(0.0, 1.0), tail_exponent=4.0
        )
        assert not estimate.divergent
        assert estimate.value == pytest.approx(0.25, rel=1e-5)

    def test_shifted_power_law_integral(self, spec):
        estimate = integrate_halfplane(
            lambda z: np.abs(z + 2j) ** -4.0, 0.0, spec.around(0.0, 2.0), tail_exponent=4.0
        )
        assert estimate.value == pytest.approx(1.0 / 16.0, rel=1e-5)
        assert estimate.tail_estimate > 0.0

    def test_slow_decay_is_divergent(self, spec):
        estimate = integrate_halfplane(
            lambda z: np.abs(z + 1j) ** -2.0, 0.0, spec, tail_exponent=2.0
        )
        assert estimate.divergent
        assert not estimate.converged
        assert math.isinf(estimate.error_bound)

    def test_bergman_norm(self, spec):
        estimate = bergman_norm(
            lambda z: (z + 1j) ** -2, 2.0, 0.0, spec.around(0.0, 1.0), tail_exponent=4.0
        )
        assert estimate.value == pytest.approx(0.5, rel=1e-5)
        with pytest.raises(ValueError):
            bergman_norm(lambda z: z, 0.5, 0.0, spec)


class TestPullback:
    def test_translation_of_tent(self, spec, one):
        tent = CarlesonBox.tent(HalfPlanePoint(0.0, 2.0))
        phi = SymbolExpression.parse("z + i")
        estimate = pullback_measure(tent, one, phi, 2.0, 0.0, spec)
        assert estimate.value == pytest.approx(2.0 / math.pi)
        assert estimate.error_bound == 0.0

    @pytest.mark.parametrize("height", [0.5, 1.0])
    def test_low_tents_are_missed(self, spec, one, height):
        tent = CarlesonBox.tent(HalfPlanePoint(0.0, height))
        phi = SymbolExpression.parse("z + i")
        assert pullback_measure(tent, one, phi, 2.0, 0.0, spec).value == 0.0

    def test_identity_gives_the_measure(self, spec, one, identity_phi):
        box = CarlesonBox(Interval(-1, 3))
        estimate = pullback_measure(box, one, identity_phi, 2.0, 1.0, spec)
        assert estimate.value == pytest.approx(measure_alpha(box, 1.0))

    def test_multiplier_weight(self, spec, identity_phi):
        box = CarlesonBox(Interval(0, 1))
        u = SymbolExpression.parse("2")
        estimate = pullback_measure(box, u, identity_phi, 3.0, 0.0, spec)
        assert estimate.value == pytest.approx(8.0 / math.pi)

    def test_dilation(self, spec, one):
        box = CarlesonBox(Interval(-1, 2))
        estimate = pullback_measure(box, one, SymbolExpression.parse("2*z"), 1.0, 0.0, spec)
        assert estimate.value == pytest.approx(1.0 / math.pi)

    def test_mobius_indicator_matches_change_of_variables(self, spec, one):
        region = upper_box(Interval.from_endpoints(-1, 1))
        estimate = pullback_measure(region, one, mobius(0.0, -1.0, 1.0, 0.0), 2.0, 0.0, spec)
        expected = integrate_region_box(lambda w: np.abs(w) ** -4.0, region, 0.0, spec)
        assert estimate.value == pytest.approx(expected.value, rel=1e-2)


class TestDecay:
    def test_power_law(self):
        assert sampled_decay_exponent(lambda z: np.abs(z + 1j) ** -3.0) == pytest.approx(
            3.0, abs=1e-2
        )

    def test_bounded_pullback_does_not_decay(self):
        decay = sampled_decay_exponent(lambda z: np.abs(-1.0 / z + 1j) ** -4.0)
        assert decay == pytest.approx(0.0, abs=1e-2)

    def test_underflow_is_undetermined(self):
        assert sampled_decay_exponent(lambda z: np.abs(np.exp(1j * z))) is None
