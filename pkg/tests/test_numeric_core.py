"""
🧪 Unit Tests за numeric_core
"""
import math
from fractions import Fraction

import numpy as np
import pytest

from exceptions import ValidationError
from numeric_core import (
    ExactScalar,
    MultiIndex,
    exact_rank,
    gauss_legendre,
    graded_lex,
    numerical_rank,
    parse_exact,
    singular_values,
    spectrum_report,
)


class TestMultiIndex:
    """Тестове за MultiIndex"""

    def test_order_and_dimension(self):
        """Тест: |α| и d"""
        alpha = MultiIndex.of(2, 0, 3)
        assert alpha.order == 5
        assert alpha.dimension == 3

    def test_negative_component_rejected(self):
        """Тест: Отрицателни компоненти са невалидни"""
        with pytest.raises(ValidationError):
            MultiIndex.of(1, -1)

    def test_minus_returns_none_below_zero(self):
        """Тест: α − β извън Z₊^d дава None"""
        assert MultiIndex.of(1, 2).minus(MultiIndex.of(2, 0)) is None
        assert MultiIndex.of(3, 2).minus(MultiIndex.of(1, 2)) == MultiIndex.of(2, 0)

    def test_along_direction(self):
        """Тест: α + tγ"""
        assert MultiIndex.of(1, 0).along(MultiIndex.of(1, 2), 3) == MultiIndex.of(4, 6)

    def test_dimension_mismatch(self):
        """Тест: Различни размерности хвърлят грешка"""
        with pytest.raises(ValidationError):
            MultiIndex.of(1) + MultiIndex.of(1, 1)

    def test_falling_factorial(self):
        """Тест: α!/(α−a)!"""
        assert MultiIndex.of(4).falling_factorial(MultiIndex.of(2)) == 12
        assert MultiIndex.of(1).falling_factorial(MultiIndex.of(2)) == 0

    def test_graded_lex_order(self):
        """Тест: Градуиран лексикографски ред"""
        order = graded_lex(2, 2)
        assert [tuple(a) for a in order] == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


class TestExactScalar:
    """Тестове за точната Гаусова рационална аритметика"""

    def test_field_operations(self):
        """Тест: +, −, ×, ÷ остават точни"""
        a = ExactScalar(Fraction(1, 2), Fraction(1, 3))
        b = ExactScalar(2, -1)
        assert (a * b) / b == a
        assert a + b - b == a
        assert a * a.conjugate() == ExactScalar(a.norm2())

    def test_division_by_zero(self):
        """Тест: Деление на точна нула"""
        with pytest.raises(ZeroDivisionError):
            ExactScalar(1) / ExactScalar(0)

    def test_power(self):
        """Тест: i⁴ = 1, i⁻¹ = −i"""
        i = ExactScalar.i()
        assert i ** 4 == 1
        assert i ** -1 == ExactScalar(0, -1)

    def test_comparison_with_plain_numbers(self):
        """Тест: Сравнение с int и Fraction"""
        assert ExactScalar(3) == 3
        assert ExactScalar(Fraction(1, 4)) == Fraction(1, 4)
        assert ExactScalar(0, 1) != 0

    def test_parse_exact(self):
        """Тест: 'p/q' и 'p/q,r/s'"""
        assert parse_exact('3/4') == ExactScalar(Fraction(3, 4))
        assert parse_exact('1/2, -1/3') == ExactScalar(Fraction(1, 2), Fraction(-1, 3))

    def test_parse_exact_invalid(self):
        """Тест: Невалиден низ"""
        with pytest.raises(ValidationError):
            parse_exact('1/0')
        with pytest.raises(ValidationError):
            parse_exact('1,2,3')


class TestGaussLegendre:
    """Тестове за квадратурата"""

    def test_single_node(self):
        """Тест: n=1 дава средна точка"""
        rule = gauss_legendre(1)
        assert rule.nodes[0] == pytest.approx(0.0)
        assert rule.weights[0] == pytest.approx(2.0)

    def test_two_nodes(self):
        """Тест: n=2 дава ±1/√3 с тегла 1"""
        rule = gauss_legendre(2)
        assert sorted(rule.nodes) == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)])
        assert list(rule.weights) == pytest.approx([1.0, 1.0])

    def test_exact_for_degree(self):
        """Тест: Точност за степен 2n − 1"""
        rule = gauss_legendre(20, (0.0, 1.0))
        assert rule.degree == 39
        assert rule.integrate(lambda r: r ** 30) == pytest.approx(1 / 31, rel=1e-13)

    @pytest.mark.parametrize("n,interval", [(0, (0.0, 1.0)), (3, (1.0, 1.0)), (3, (2.0, 1.0))])
    def test_invalid_input(self, n, interval):
        """Тест: Невалидни n или интервал"""
        with pytest.raises(ValidationError):
            gauss_legendre(n, interval)


class TestRank:
    """Тестове за ранг и сингулярни стойности"""

    def test_singular_values_sorted(self):
        """Тест: Низходящ ред"""
        sigma = singular_values(np.diag([1.0, 3.0, 2.0]))
        assert list(sigma) == pytest.approx([3.0, 2.0, 1.0])

    def test_numerical_rank_tolerance(self):
        """Тест: σ под rel_tol·σ₁ не се брои"""
        m = np.diag([1.0, 1e-14])
        assert numerical_rank(m, 1e-10) == 1
        assert numerical_rank(m, 1e-15) == 2

    def test_zero_matrix(self):
        """Тест: Нулева матрица има ранг 0"""
        assert numerical_rank(np.zeros((3, 3)), 1e-10) == 0

    def test_invalid_tolerance(self):
        """Тест: rel_tol извън (0, 1)"""
        with pytest.raises(ValidationError):
            numerical_rank(np.eye(2), 0.0)

    def test_non_finite_entries(self):
        """Тест: NaN в матрицата"""
        with pytest.raises(ValidationError):
            singular_values(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    def test_exact_rank_rational(self):
        """Тест: Точен ранг над Q"""
        assert exact_rank([[1, 2], [2, 4]]) == 1
        assert exact_rank([[Fraction(1, 2), 1], [1, Fraction(1, 3)]]) == 2

    def test_exact_rank_gaussian(self):
        """Тест: Точен ранг над Q(i)"""
        i = ExactScalar.i()
        assert exact_rank([[1, i], [i, -1]]) == 1
        assert exact_rank([[1, i], [i, 1]]) == 2

    def test_exact_rank_sees_tiny_entries(self):
        """Тест: Точният ранг не губи малки стойности"""
        tiny = Fraction(1, 10 ** 30)
        assert exact_rank([[1, 0], [0, tiny]]) == 2

    def test_spectrum_report_hermitian(self):
        """Тест: Собствени стойности в низходящ ред"""
        report = spectrum_report(np.diag([1.0, -2.0, 0.5]), 1e-10, hermitian=True)
        assert report.kind == 'eigenvalues'
        assert [v.real for v in report.values] == pytest.approx([1.0, 0.5, -2.0])
        assert report.numerical_rank == 3
        assert report.as_dict()['truncation'] == 3
