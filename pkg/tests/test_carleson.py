import math

import pytest

from src.carleson import (
    ApexLattice,
    CompactnessVerdict,
    LinearCombination,
    TestFunction,
    Verdict,
    boundedness_certificate,
    boundedness_sweep,
    carleson_intensity,
    dilated_measure,
    dominance_constant,
    escape_sequences,
    eval_test_function,
    mean_value_check,
    norm_constant,
    reproducing_check,
    test_function_norm,
    testing_condition_value,
    translation_intensity,
    translation_testing_value,
    vanishing_profile,
)
from src.errors import ScenarioValidationError
from src.geometry import HalfPlanePoint, Interval, upper_box
from src.symbols import constant, mobius

SMALL = ApexLattice(x=[0.0], y=[0.5, 1.0, 2.0])


class TestOracles:
    def test_norm_constant(self):
        assert norm_constant(0.0) == pytest.approx(0.25)

    @pytest.mark.parametrize("y", [0.25, 1.0, 3.0])
    def test_translation_value(self, y):
        assert translation_testing_value(0.0, y, 0.0) == pytest.approx(norm_constant(0.0))
        expected = y**2 / (4.0 * (1.0 + y) ** 2)
        assert translation_testing_value(0.0, y, 1.0) == pytest.approx(expected)

    def test_growth_diverges_for_small_ratio(self):
        assert math.isinf(translation_testing_value(0.0, 1.0, 0.0, ratio=0.5))

    def test_translation_intensity(self):
        assert translation_intensity(0.0, 2.0, 1.0) == pytest.approx(0.5)
        assert translation_intensity(0.0, 1.0, 1.0) == 0.0

    @pytest.mark.parametrize("y", [1.5, 2.0, 8.0, 100.0])
    def test_intensity_dominated_by_testing(self, y):
        bound = dominance_constant(0.0) * translation_testing_value(0.0, y, 1.0)
        assert translation_intensity(0.0, y, 1.0) <= bound


class TestFunctions:
    def test_validation(self):
        with pytest.raises(ValueError):
            TestFunction.at(1j, 0.5)
        with pytest.raises(ValueError):
            TestFunction.at(1j, 2.0, alpha=-1.0)

    def test_value_at_apex(self):
        f = TestFunction.at(1j, 2.0)
        assert f.exponent == 2.0
        assert eval_test_function(f, 1j) == pytest.approx(-0.25)
        assert eval_test_function(f, HalfPlanePoint(0.0, 1.0)) == pytest.approx(-0.25)

    def test_linear_combination(self):
        f = TestFunction.at(1j, 2.0)
        g = TestFunction.at(2 + 1j, 4.0)
        combination = LinearCombination(((2.0, f), (1j, g)))
        expected = 2.0 * eval_test_function(f, 1j) + 1j * eval_test_function(g, 1j)
        assert complex(combination(1j)) == pytest.approx(expected)
        assert combination.decay() == g.decay()
        with pytest.raises(ValueError):
            LinearCombination(())

    @pytest.mark.parametrize("alpha", [0.0, 1.0])
    @pytest.mark.parametrize("apex", [1j, 3 + 0.25j])
    def test_norm_is_apex_independent(self, spec, alpha, apex):
        estimate = test_function_norm(TestFunction.at(apex, 2.0, alpha), spec)
        assert estimate.value == pytest.approx(norm_constant(alpha), rel=1e-4)


class TestTesting:
    @pytest.mark.parametrize("apex", [HalfPlanePoint(0.0, 1.0), HalfPlanePoint(3.0, 0.25)])
    def test_identity_value(self, spec, one, identity_phi, apex):
        estimate = testing_condition_value(one, identity_phi, 2.0, 2.0, 0.0, apex, spec)
        assert estimate.value == pytest.approx(0.25, rel=1e-4)

    @pytest.mark.parametrize("y", [0.5, 2.0])
    def test_translation_value(self, spec, one, shift_phi, y):
        apex = HalfPlanePoint(0.0, y)
        estimate = testing_condition_value(one, shift_phi, 2.0, 2.0, 0.0, apex, spec)
        assert estimate.value == pytest.approx(translation_testing_value(0.0, y, 1.0), rel=1e-4)

    def test_zero_multiplier(self, spec, identity_phi):
        apex = HalfPlanePoint(0.0, 1.0)
        assert testing_condition_value(constant(0), identity_phi, 2, 2, 0, apex, spec).value == 0

    def test_exponent_order(self, spec, one, identity_phi):
        with pytest.raises(ScenarioValidationError):
            testing_condition_value(one, identity_phi, 3.0, 2.0, 0.0, HalfPlanePoint(0, 1), spec)

    def test_intensity(self, spec, one, identity_phi, shift_phi):
        apex = HalfPlanePoint(0.0, 2.0)
        assert carleson_intensity(one, identity_phi, 2, 2, 0, apex, spec).value == pytest.approx(1)
        assert carleson_intensity(one, shift_phi, 2, 2, 0, apex, spec).value == pytest.approx(0.5)

    def test_mobius_value_diverges(self, spec, one):
        phi = mobius(0.0, -1.0, 1.0, 0.0)
        estimate = testing_condition_value(one, phi, 2.0, 2.0, 0.0, HalfPlanePoint(0.0, 1.0), spec)
        assert estimate.divergent
        assert not estimate.converged


class TestLattice:
    def test_sorted_and_validated(self):
        lattice = ApexLattice(x=[2.0, -1.0], y=[4.0, 1.0])
        assert lattice.x == [-1.0, 2.0]
        assert lattice.y == [1.0, 4.0]
        with pytest.raises(ValueError):
            ApexLattice(y=[0.0, 1.0])
        with pytest.raises(ValueError):
            ApexLattice(x=[])

    def test_refined(self):
        refined = ApexLattice(x=[0.0, 1.0], y=[1.0, 2.0]).refined()
        assert refined.x == [0.0, 0.5, 1.0]
        assert refined.y == pytest.approx([0.5, 1.0, math.sqrt(2.0), 2.0, 4.0])
        assert refined.size == 15

    def test_default_lattice(self):
        lattice = ApexLattice()
        assert lattice.size == 5 * 21
        assert lattice.points()[0] == HalfPlanePoint(-10.0, 2.0**-10)

    def test_escape_sequences(self):
        sequences = escape_sequences(3)
        assert set(sequences) == {"boundary", "upward", "tangential"}
        assert [a.y for a in sequences["boundary"]] == [0.5, 0.25, 0.125]
        assert [a.x for a in sequences["tangential"]] == [1.0, 2.0, 3.0]


class TestCertificates:
    def test_identity_is_bounded(self, spec, one, identity_phi):
        certificate = boundedness_certificate(one, identity_phi, 2.0, 2.0, 0.0, SMALL, spec, 0)
        assert certificate.verdict == Verdict.BOUNDED
        assert certificate.supremum == pytest.approx(0.25, rel=1e-4)
        assert len(certificate.values) == 3
        assert certificate.lattice == SMALL

    def test_mobius_is_unbounded(self, spec, one):
        phi = mobius(0.0, -1.0, 1.0, 0.0)
        certificate = boundedness_certificate(one, phi, 2.0, 2.0, 0.0, SMALL, spec, 0)
        assert certificate.verdict == Verdict.UNBOUNDED
        assert math.isinf(certificate.supremum)

    def test_sweep(self, spec, one, identity_phi):
        sweep = boundedness_sweep(one, identity_phi, 2.0, 2.0, 0.0, [2.0], SMALL, spec, 0)
        assert sweep.all_bounded
        assert sweep.certificates[0].alpha_prime == pytest.approx(0.0)
        with pytest.raises(ValueError):
            boundedness_sweep(one, identity_phi, 2.0, 3.0, 0.0, [4.0], SMALL, spec, 0)

    @pytest.mark.slow
    def test_growth_is_unbounded(self, spec, one, identity_phi):
        certificate = boundedness_certificate(one, identity_phi, 2.0, 4.0, 0.0, SMALL, spec, 1)
        assert certificate.verdict == Verdict.UNBOUNDED
        assert not certificate.stable
        assert certificate.refinement_suprema[0] > certificate.supremum

    def test_translation_is_not_compact(self, spec, one, shift_phi):
        sequences = escape_sequences(6)
        del sequences["tangential"]
        profile = vanishing_profile(one, shift_phi, 2.0, 2.0, 0.0, sequences, spec)
        assert profile.verdict == CompactnessVerdict.NOT_COMPACT
        by_name = {s.name: s for s in profile.sequences}
        assert by_name["boundary"].vanishes
        assert by_name["boundary"].decay_rate > 1.5
        assert not by_name["upward"].vanishes


class TestRepresentation:
    def test_mean_value_on_constant(self, spec, ones):
        check = mean_value_check(ones, upper_box(Interval(0, 1)), 0.0, spec)
        assert check.sup_value == 1.0
        assert check.ratio == pytest.approx(4.0 / 9.0, rel=1e-6)

    def test_dilated_measure(self):
        assert dilated_measure(upper_box(Interval(0, 1)), 0.0) == pytest.approx(1.125 / math.pi)

    @pytest.mark.slow
    def test_representation_constant_is_uniform(self, spec):
        check = reproducing_check(TestFunction.at(1j, 2.0), [1j, 0.5 + 2j], 0.0, spec)
        assert check.dispersion < 1e-3
