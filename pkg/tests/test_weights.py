import math

import pytest

from src.carleson import ApexLattice, TestFunction
from src.geometry import CarlesonBox, HalfPlanePoint, Interval
from src.symbols import WeightExpression
from src.weights import (
    BWeightParams,
    ClassVerdict,
    b_class_constant,
    b_class_value,
    conjugate,
    carleson_ratio_profile,
    weight_measure,
    weighted_carleson_profile,
    weighted_estimate_check,
    weighted_pullback_measure,
    weighted_sparse_form,
)


@pytest.fixture
def disk_params(one, identity_phi, disk_omega) -> BWeightParams:
    return BWeightParams(q=1.2, u=one, phi=identity_phi, omega=disk_omega)


@pytest.fixture
def flat_params(one, identity_phi) -> BWeightParams:
    return BWeightParams(q=2.0, u=one, phi=identity_phi, omega=WeightExpression.parse("1"))


class TestParams:
    def test_conjugate(self):
        assert conjugate(2.0) == 2.0
        assert conjugate(1.2) == pytest.approx(6.0)
        assert math.isinf(conjugate(1.0))

    def test_default_s(self, disk_params):
        assert disk_params.q_prime == pytest.approx(6.0)
        assert disk_params.s == pytest.approx(3.5)
        assert disk_params.s_prime == pytest.approx(1.4)

    @pytest.mark.parametrize("s", [1.0, 6.5, 7.0])
    def test_s_outside_window(self, one, identity_phi, disk_omega, s):
        with pytest.raises(ValueError):
            BWeightParams(q=1.2, s=s, u=one, phi=identity_phi, omega=disk_omega)

    def test_q_above_one(self, one, identity_phi, disk_omega):
        with pytest.raises(ValueError):
            BWeightParams(q=1.0, s=2.0, u=one, phi=identity_phi, omega=disk_omega)

    def test_powered(self, disk_params):
        powered = disk_params.with_weight(disk_params.omega, weight_decay=2.0).powered()
        assert powered.weight_decay == pytest.approx(2.8)
        assert powered.omega == disk_params.omega.power(disk_params.s_prime)
        assert disk_params.powered().weight_decay is None


class TestClass:
    def test_value_on_disk_weight(self, spec, disk_params):
        value = b_class_value(disk_params, HalfPlanePoint(0.0, 2.0), spec).value
        assert 1.0 / 9.0 <= value <= 0.25

    def test_constant_weight_diverges(self, spec, flat_params):
        estimate = b_class_value(flat_params, HalfPlanePoint(0.0, 1.0), spec)
        assert estimate.divergent
        certificate = b_class_constant(flat_params, ApexLattice(x=[0.0], y=[1.0]), spec, 0)
        assert certificate.divergent
        assert certificate.verdict == ClassVerdict.NOT_IN_CLASS

    def test_zero_weight(self, spec, flat_params):
        params = flat_params.with_weight(WeightExpression.parse("0"))
        assert b_class_value(params, HalfPlanePoint(0.0, 1.0), spec).value == 0.0

    def test_weight_measure(self, spec):
        box = CarlesonBox(Interval(0, 1))
        estimate = weight_measure(WeightExpression.parse("3"), box, 0.0, spec)
        assert estimate.value == pytest.approx(3.0 / math.pi)
        assert estimate.error_bound == 0.0

    def test_not_carleson(self, spec, disk_omega):
        profile = carleson_ratio_profile(disk_omega, 0.0, spec=spec)
        assert profile.step_factors == pytest.approx([2.0, 2.0, 2.0], rel=1e-2)
        assert profile.inverse_scaling


class TestEstimates:
    def test_flat_weight_profile(self, spec, flat_params):
        apexes = [HalfPlanePoint(0.0, 1.0), HalfPlanePoint(2.0, 0.5)]
        profile = weighted_carleson_profile(flat_params, apexes, spec)
        assert profile.ratios == pytest.approx([1.0, 1.0])
        assert profile.supremum == pytest.approx(1.0)

    def test_pullback_under_translation(self, spec, flat_params, shift_phi):
        params = flat_params.model_copy(update={"phi": shift_phi})
        tent = CarlesonBox.tent(HalfPlanePoint(0.0, 2.0))
        assert weighted_pullback_measure(tent, params, spec).value == pytest.approx(2.0 / math.pi)
        low = CarlesonBox.tent(HalfPlanePoint(0.0, 0.5))
        assert weighted_pullback_measure(low, params, spec).value == 0.0

    def test_sparse_form_ignores_symbols(self, ones, unit_box, flat_params):
        assert flat_params.s == pytest.approx(1.5)
        result = weighted_sparse_form(ones, flat_params, [unit_box])
        assert result.value == pytest.approx(1.0 / math.pi)

    @pytest.mark.slow
    def test_estimate_with_certified_weight(self, spec, one, identity_phi):
        params = BWeightParams(
            q=1.2, u=one, phi=identity_phi, omega=WeightExpression.parse("indisk(z)")
        )
        certificate = b_class_constant(params.powered(), ApexLattice(x=[0.0], y=[1.0]), spec, 0)
        assert certificate.verdict == ClassVerdict.IN_CLASS
        table = weighted_estimate_check([TestFunction.at(1j, 1.2)], params, spec, certificate)
        assert table.class_verdict == ClassVerdict.IN_CLASS
        assert len(table.rows) == 1
        row = table.rows[0]
        assert row.rhs is not None and row.rhs > 0.0
        assert row.ratio == pytest.approx(row.lhs / row.rhs)
