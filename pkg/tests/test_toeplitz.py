"""
🧪 Unit Tests за асемблирането на Тьоплицови матрици
"""
import math
from fractions import Fraction

import numpy as np
import pytest

from bases import DiskMonomial
from exceptions import DomainError, ValidationError
from numeric_core import ExactScalar, MultiIndex
from sparse_index import IndexSet
from toeplitz import (
    assemble,
    assemble_radial_monomial,
    harmonic_matrix,
    reduced_matrix,
    shift_exact_product,
)
from weights import (
    PointDistribution,
    PointMass,
    PointTerm,
    PolynomialDensity,
    RadialDensity,
    ZPolynomial,
    named_profile,
)


@pytest.fixture
def three_points():
    """Fixture: три точкови маси в диска"""
    return PointDistribution.from_atoms([0.5, -0.3 + 0.4j, 0.1j], [1.0, 2.0 - 1.0j, 0.5])


class TestAssemble:
    """Тестове за assemble"""

    def test_point_mass_rank(self, three_points):
        """Тест: Рангът е броят атоми"""
        M = assemble(three_points, DiskMonomial(8))
        assert M.shape == (8, 8)
        assert M.rank(1e-10) == 3
        assert M.metadata['path'] == 'nodes'

    def test_point_mass_entry(self, three_points):
        """Тест: [j, k] = Σ c e_j(z) conj(e_k(z))"""
        M = assemble(three_points, DiskMonomial(4))
        expected = sum(
            c * math.sqrt(3) * z ** 2 * math.sqrt(2) * np.conj(z)
            for z, c in [(0.5, 1.0), (-0.3 + 0.4j, 2.0 - 1.0j), (0.1j, 0.5)]
        )
        assert M.entry(2, 1) == pytest.approx(expected)

    def test_exact_polynomial_density(self):
        """Тест: ⟨1, z^s z̄^s⟩ = 1/(s+1) точно"""
        F = PolynomialDensity(ZPolynomial.constant(1))
        M = assemble(F, DiskMonomial(4, normalized=False), exact=True)
        assert M.mode == 'exact'
        assert M.entry(2, 2) == ExactScalar(Fraction(1, 3))
        assert M.entry(2, 1) == ExactScalar(0)
        assert M.rank() == 4

    def test_exact_requires_exact_data(self, three_points):
        """Тест: exact=True върху неточни данни"""
        with pytest.raises(ValidationError):
            assemble(three_points, DiskMonomial(4), exact=True)

    def test_identity_for_indicator(self):
        """Тест: f ≡ 1 на целия диск дава I в нормирания базис"""
        M = assemble(RadialDensity(1.0, (1.0,)), DiskMonomial(6))
        assert M.as_complex() == pytest.approx(np.eye(6), abs=1e-12)

    def test_derivative_distribution(self):
        """Тест: ⟨∂δ_w, e_j ē_k⟩ = √((j+1)(k+1))·j·w^{j−1} w̄^k"""
        term = PointTerm(1, MultiIndex.of(1), MultiIndex.of(0))
        F = PointDistribution((PointMass((0.5,), (term,)),))
        M = assemble(F, DiskMonomial(5))
        assert M.metadata['path'] == 'symbolic'
        assert M.entry(2, 1) == pytest.approx(math.sqrt(6) * 2 * 0.5 * 0.5)
        assert M.entry(0, 3) == pytest.approx(0.0)

    def test_point_on_boundary(self):
        """Тест: Точка върху единичната окръжност"""
        F = PointDistribution.from_atoms([1.0], [1.0])
        with pytest.raises(DomainError):
            assemble(F, DiskMonomial(3))

    def test_space_mismatch(self):
        """Тест: Тегло в R³ срещу базис в диска"""
        with pytest.raises(DomainError):
            assemble(RadialDensity(1.0, (1.0,), dimension=3), DiskMonomial(3))

    def test_threads_do_not_change_entries(self):
        """Тест: Паралелното попълване дава същите стойности"""
        F = RadialDensity(0.9, named_profile('bump', 0.9), alpha=1)
        serial = assemble(F, DiskMonomial(7), threads=1).as_complex()
        parallel = assemble(F, DiskMonomial(7), threads=3).as_complex()
        assert np.max(np.abs(serial - parallel)) < 1e-12

    def test_hermitian_for_real_symbol(self):
        """Тест: Реален символ дава ермитова матрица"""
        M = assemble(RadialDensity(0.8, named_profile('c2-bump', 0.8)), DiskMonomial(5))
        assert M.conjugate_transpose().as_complex() == pytest.approx(M.as_complex(), abs=1e-14)

    def test_harmonic_matrix(self):
        """Тест: H(F) за две точки в R² има ранг 2"""
        mu = PointDistribution.from_atoms([(0.1, 0.2), (-0.3, 0.1)], [1.0, 1.0], real_space=True)
        H = harmonic_matrix(mu, 2)
        assert H.shape == (5, 5)
        assert H.rank(1e-10) == 2


class TestRadialClosedForm:
    """Тестове за затворената формула f̂"""

    def test_off_diagonal_value(self):
        """Тест: (0, 1) елемент за f ≡ 1, α = 1, β = 0 е √2/2"""
        M = assemble_radial_monomial(RadialDensity(1.0, (1.0,)), 1, 0, 3)
        assert M.entry(0, 1) == pytest.approx(math.sqrt(2) / 2)
        assert M.shift == 1

    @pytest.mark.parametrize("alpha,beta", [(0, 0), (1, 0), (0, 2), (2, 1)])
    def test_matches_quadrature(self, alpha, beta):
        """Тест: Формулата съвпада с квадратурата"""
        coeffs = named_profile('bump', 1.0)
        formula = assemble_radial_monomial(RadialDensity(1.0, coeffs), alpha, beta, 8).as_complex()
        quadrature = assemble(RadialDensity(1.0, coeffs, alpha=alpha, beta=beta), DiskMonomial(8)).as_complex()
        assert np.max(np.abs(formula - quadrature)) < 1e-10

    def test_invalid_arguments(self):
        """Тест: Отрицателни експоненти"""
        with pytest.raises(ValidationError):
            assemble_radial_monomial(RadialDensity(1.0, (1.0,)), -1, 0, 3)


class TestProductsAndReduction:
    """Тестове за произведения и редуцирани матрици"""

    def test_right_shift_window(self):
        """Тест: Десен множител с отместване +1 изрязва последния ред"""
        n = 6
        middle = assemble(RadialDensity(1.0, (1.0,)), DiskMonomial(n))
        shift = assemble_radial_monomial(RadialDensity(1.0, (1.0,)), 1, 0, n)
        product = shift_exact_product([], middle, [shift])
        assert product.window[0] == list(range(n - 1))
        assert product.window[1] == list(range(n))
        expected = (shift.as_complex() @ middle.as_complex())[: n - 1, :]
        assert product.as_complex() == pytest.approx(expected, abs=1e-12)

    def test_side_factor_needs_shift(self, three_points):
        """Тест: Страничен множител без структура на отместване"""
        middle = assemble(three_points, DiskMonomial(4))
        with pytest.raises(ValidationError):
            shift_exact_product([middle], middle)

    def test_reduced_matrix_drops_indices(self, three_points):
        """Тест: Редовете и колоните от J отпадат"""
        M = assemble(three_points, DiskMonomial(8))
        reduced = reduced_matrix(M, IndexSet.modulus(2))
        assert reduced.row_indices == [1, 3, 5, 7]
        assert reduced.col_indices == [1, 3, 5, 7]
        assert reduced.rank(1e-10) == 3

    def test_reduced_matrix_empty(self, three_points):
        """Тест: J покрива всички индекси"""
        M = assemble(three_points, DiskMonomial(4))
        with pytest.raises(ValidationError):
            reduced_matrix(M, IndexSet.everything())
