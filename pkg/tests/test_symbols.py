import numpy as np
import pytest

from src.errors import SelfMapViolationError, SymbolSyntaxError
from src.symbols import (
    SampleLattice,
    SymbolExpression,
    WeightExpression,
    affine,
    constant,
    identity,
    mobius,
    parse,
    require_self_map,
    to_text,
    translation,
    verify_self_map,
)


class TestParser:
    @pytest.mark.parametrize(
        "text, z, expected",
        [
            ("2*z + i", 1j, 3j),
            ("z^2 - 1", 2j, -5.0),
            ("-(z + 1)/2", 1.0 + 1j, -1.0 - 0.5j),
            ("exp(0*z)", 3j, 1.0),
            ("1.5e1", 0.0, 15.0),
            ("z^-1", 2j, -0.5j),
        ],
    )
    def test_evaluate(self, text, z, expected):
        assert SymbolExpression.parse(text).eval(z) == pytest.approx(expected)

    def test_vectorised(self):
        phi = SymbolExpression.parse("z + i")
        z = np.array([[0.0, 1.0], [1j, 2 + 1j]])
        np.testing.assert_allclose(phi.evaluate(z), z + 1j)

    def test_error_offset(self):
        with pytest.raises(SymbolSyntaxError) as info:
            SymbolExpression.parse("z +")
        assert info.value.offset == 3
        assert "(at byte 3)" in str(info.value)

    def test_offset_counts_bytes(self):
        with pytest.raises(SymbolSyntaxError) as info:
            SymbolExpression.parse("z +\u00a0w")
        assert info.value.offset == 5

    @pytest.mark.parametrize("text", ["", "z +* 1", "(z", "sin(z)", "z^", "z $ 1", "z z"])
    def test_rejects(self, text):
        with pytest.raises(SymbolSyntaxError):
            SymbolExpression.parse(text)

    def test_weight_functions_need_weight_context(self):
        with pytest.raises(SymbolSyntaxError):
            SymbolExpression.parse("abs(z)")
        assert WeightExpression.parse("abs(z)").eval(3 + 4j) == pytest.approx(5.0)
        assert isinstance(parse("abs(z)", "weight"), WeightExpression)

    def test_canonical_text_parses_back(self):
        expression = SymbolExpression.parse("2*z^2 + i/z - exp(z)")
        again = SymbolExpression.parse(to_text(expression.node))
        assert again == expression
        assert hash(again) == hash(expression)


class TestStructure:
    def test_constant(self):
        c = constant(2 + 1j)
        assert c.is_constant()
        assert c.constant_value() == 2 + 1j
        with pytest.raises(ValueError):
            identity().constant_value()

    def test_affine_coefficients(self):
        assert translation(1j).affine_coefficients() == (pytest.approx(1.0), pytest.approx(1j))
        slope, offset = affine(2.0, 3 + 1j).affine_coefficients()
        assert slope == pytest.approx(2.0)
        assert offset == pytest.approx(3 + 1j)
        assert mobius(0.0, -1.0, 1.0, 0.0).affine_coefficients() is None

    def test_catalog_validation(self):
        with pytest.raises(ValueError):
            affine(-1.0, 0.0)
        with pytest.raises(ValueError):
            affine(1.0, -1j)
        with pytest.raises(ValueError):
            mobius(1.0, 0.0, 0.0, -1.0)

    def test_cauchy_riemann(self):
        points = [0.5 + 1j, -2 + 0.3j, 1 + 4j]
        assert SymbolExpression.parse("exp(z) / (z + i)").cr_residual(points) < 1e-6
        assert WeightExpression.parse("conj(z)").cr_residual(points) > 0.5

    def test_disk_support(self, disk_omega):
        center, radius = disk_omega.disk_support()
        assert center == 0
        assert radius == pytest.approx(1.0)
        assert disk_omega.power(1.4).disk_support() == (center, radius)
        assert WeightExpression.parse("abs(z)").disk_support() is None

    def test_weight_values(self, disk_omega):
        assert disk_omega.eval(0.5j) == pytest.approx(2.0)
        assert disk_omega.eval(2j) == 0.0
        assert disk_omega.power(2.0).eval(0.5j) == pytest.approx(4.0)

    def test_negative_samples(self):
        points = SampleLattice(x=[-1.0, 1.0], y=[1.0]).points()
        assert WeightExpression.parse("abs(z)").negative_samples(points) == []
        assert WeightExpression.parse("re(z)").negative_samples(points) == [-1 + 1j]


class TestSelfMap:
    @pytest.mark.parametrize("text", ["z", "z + i", "2*z + 3", "-1/z", "z^0.5"])
    def test_self_maps(self, text):
        report = require_self_map(SymbolExpression.parse(text))
        assert report.passed
        assert report.min_imag > 0.0

    def test_violations(self):
        report = verify_self_map(SymbolExpression.parse("z - 2*i"))
        assert not report.passed
        assert all(y <= 2.0 for _, y, _ in report.violations)
        assert report.min_imag < 0.0

    def test_require_raises(self):
        with pytest.raises(SelfMapViolationError) as info:
            require_self_map(SymbolExpression.parse("-z"))
        assert info.value.violations
        assert isinstance(info.value, ValueError)

    def test_poles_are_violations(self):
        lattice = SampleLattice(x=[0.0], y=[1.0, 2.0])
        report = verify_self_map(SymbolExpression.parse("1/(z - i) + 2*i"), lattice)
        assert (0.0, 1.0) in [(x, y) for x, y, _ in report.violations]
