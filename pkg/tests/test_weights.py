"""
🧪 Unit Tests за теглата и сдвояването ⟨F, φ⟩
"""
import math
from fractions import Fraction

import numpy as np
import pytest

from exceptions import DomainError, QuadratureError, ValidationError
from numeric_core import ExactScalar, MultiIndex
from weights import (
    GridDensity,
    PointDistribution,
    PointMass,
    PointTerm,
    PolynomialDensity,
    RadialDensity,
    ZPolynomial,
    cauchy_tail,
    cauchy_transform,
    combine_weights,
    conjugate_weight,
    fourier_transform,
    moment,
    named_profile,
    pair,
    project_measure,
    radial_moment,
    support_bound,
    weight_from_dict,
    weight_to_dict,
)


@pytest.fixture
def two_points():
    """Fixture: 2δ_{1/2} − iδ_{i/3} с точни данни"""
    return PointDistribution.from_atoms(
        [ExactScalar(Fraction(1, 2)), ExactScalar(0, Fraction(1, 3))],
        [ExactScalar(2), ExactScalar(0, -1)],
    )


class TestZPolynomial:
    """Тестове за полиномите в (z, z̄)"""

    def test_derivative(self):
        """Тест: ∂(z²z̄) = 2zz̄, ∂̄(z²z̄) = z²"""
        p = ZPolynomial.monomial(2, 1)
        assert p.derivative(1, 0) == ZPolynomial.monomial(1, 1, 2)
        assert p.derivative(0, 1) == ZPolynomial.monomial(2, 0)
        assert p.derivative(3, 0).is_zero()

    def test_exact_evaluation(self):
        """Тест: Точна стойност в точна точка"""
        p = ZPolynomial.from_terms([(1, 1, 1), (0, 0, Fraction(1, 2))])
        assert p.evaluate([ExactScalar(1, 1)]) == ExactScalar(Fraction(5, 2))

    def test_conjugate(self):
        """Тест: conj(i z) = −i z̄"""
        p = ZPolynomial.monomial(1, 0, ExactScalar(0, 1))
        assert p.conjugate() == ZPolynomial.monomial(0, 1, ExactScalar(0, -1))

    def test_array_matches_pointwise(self):
        """Тест: evaluate_array съвпада с evaluate"""
        p = ZPolynomial.from_terms([(2, 0, 1.5), (1, 2, -0.5j)])
        z = np.array([0.3 + 0.1j, -0.2j])
        expected = [p.evaluate([v]) for v in z]
        assert p.evaluate_array(z) == pytest.approx(expected)

    def test_dimension_mismatch(self):
        """Тест: Грешна размерност на точката"""
        with pytest.raises(ValidationError):
            ZPolynomial.constant(1, dimension=2).evaluate([0.1])


class TestPointDistribution:
    """Тестове за точковите разпределения"""

    def test_distinct_locations_required(self):
        """Тест: Повтарящи се точки са невалидни"""
        with pytest.raises(ValidationError):
            PointDistribution.from_atoms([0.1, 0.1], [1, 2])

    def test_real_space_rejects_derivatives(self):
        """Тест: Производни само над C^d"""
        term = PointTerm(1, MultiIndex.of(1), MultiIndex.of(0))
        with pytest.raises(ValidationError):
            PointDistribution((PointMass((0.5,), (term,)),), real_space=True)

    def test_exact_pairing(self, two_points):
        """Тест: ⟨F, z z̄⟩ = 2·1/4 − i·1/9"""
        value = pair(two_points, ZPolynomial.monomial(1, 1))
        assert value == ExactScalar(Fraction(1, 2), Fraction(-1, 9))

    def test_derivative_pairing(self):
        """Тест: ⟨∂δ_w, z³⟩ = 3w²"""
        term = PointTerm(1, MultiIndex.of(1), MultiIndex.of(0))
        F = PointDistribution((PointMass((0.5 + 0.5j,), (term,)),))
        value = pair(F, ZPolynomial.monomial(3, 0))
        assert complex(value) == pytest.approx(3 * (0.5 + 0.5j) ** 2)

    def test_callable_pairing(self, two_points):
        """Тест: Callable тестова функция"""
        value = pair(two_points, lambda z: np.ones(len(z)))
        assert value == pytest.approx(2 - 1j)

    def test_counts(self, two_points):
        """Тест: Брой атоми и точност"""
        assert two_points.atom_count == 2
        assert two_points.is_exact
        assert two_points.is_pure


class TestDensities:
    """Тестове за радиални, полиномиални и мрежови плътности"""

    def test_radial_outside_disk(self):
        """Тест: Носител извън единичния диск"""
        with pytest.raises(DomainError):
            RadialDensity(1.5, (1.0,))

    def test_radial_needs_one_profile(self):
        """Тест: Точно едно от coefficients/profile"""
        with pytest.raises(ValidationError):
            RadialDensity(1.0)

    def test_indicator_mass(self):
        """Тест: ⟨1_D, 1⟩ = 1 при dA/π"""
        value = pair(RadialDensity(1.0, (1.0,)), ZPolynomial.constant(1))
        assert value == pytest.approx(1.0, abs=1e-13)

    def test_radial_moment_closed_form(self):
        """Тест: f̂(l) = R^{l+1}/(l+1) за f ≡ 1"""
        f = RadialDensity(0.5, (1.0,))
        assert radial_moment(f, 3) == pytest.approx(0.5 ** 4 / 4)

    def test_radial_moment_exact(self):
        """Тест: Точни коефициенти и радиус дават точен момент"""
        f = RadialDensity(Fraction(1, 2), (1, ExactScalar(Fraction(1, 3))))
        assert radial_moment(f, 3) == ExactScalar(Fraction(1, 64) + Fraction(1, 3) * Fraction(1, 160))

    def test_radial_moment_quadrature_budget(self):
        """Тест: Твърде малко възли за декларираната степен"""
        f = RadialDensity(1.0, profile=lambda r: r ** 2, profile_degree=2)
        assert radial_moment(f, 3) == pytest.approx(1 / 6)
        with pytest.raises(QuadratureError):
            radial_moment(f, 10, quadrature_points=2)

    def test_polynomial_moment_exact(self):
        """Тест: (1/π)∫_{|z|<1/2} z z̄ dA = 2·(1/2)⁴/4"""
        F = PolynomialDensity(ZPolynomial.constant(1), Fraction(1, 2))
        assert moment(F, (1,), (1,)) == ExactScalar(Fraction(1, 32))
        assert moment(F, (2,), (1,)) == ExactScalar(0)

    def test_grid_plane_mass(self):
        """Тест: Мрежа в равнината с мярка dA/π"""
        axis = np.linspace(-0.45, 0.45, 10)
        G = GridDensity(np.ones((10, 10)), (axis, axis), plane=True)
        assert pair(G, lambda z: np.ones(len(z))) == pytest.approx(1.0 / math.pi)

    def test_grid_validation(self):
        """Тест: Неравномерна ос"""
        with pytest.raises(ValidationError):
            GridDensity(np.ones(3), (np.array([0.0, 0.1, 0.3]),))

    def test_support_bound(self, two_points):
        """Тест: sup |z| по носителя"""
        assert support_bound(two_points) == pytest.approx(0.5)
        assert support_bound(RadialDensity(0.7, (1.0,))) == pytest.approx(0.7)

    def test_named_profiles(self):
        """Тест: c2-bump изчезва в R и е 1 в 0"""
        coeffs = named_profile('c2-bump', 2.0)
        f = RadialDensity(2.0, coeffs, dimension=3)
        assert f.profile_value(np.array([0.0, 2.0])) == pytest.approx([1.0, 0.0], abs=1e-14)
        with pytest.raises(ValidationError):
            named_profile('unknown')


class TestTransforms:
    """Тестове за трансформациите на Коши и Фурие"""

    def test_cauchy_of_point_mass(self):
        """Тест: G(z) = c/(π(z − w))"""
        F = PointDistribution.from_atoms([0.2], [3.0])
        assert cauchy_transform(F, 1.0) == pytest.approx(3.0 / (math.pi * 0.8))

    def test_cauchy_inside_support(self):
        """Тест: z в носителя"""
        with pytest.raises(DomainError):
            cauchy_transform(RadialDensity(0.5, (1.0,)), 0.3)

    def test_cauchy_of_radial_density(self):
        """Тест: За радиално f само нулевият момент остава: G(z) = ⟨F,1⟩/(πz)"""
        F = RadialDensity(0.5, (1.0,))
        expected = 0.25 / (math.pi * 2.0)
        assert cauchy_transform(F, 2.0) == pytest.approx(expected)
        assert cauchy_tail(F, 2.0, 4) == pytest.approx(expected)

    def test_fourier_point_masses(self):
        """Тест: F̂(ξ) = Σ c e^{−ix·ξ}"""
        mu = PointDistribution.from_atoms([(1.0, 0.0)], [2.0], real_space=True)
        assert fourier_transform(mu, [math.pi / 2, 0.0]) == pytest.approx(-2j)

    def test_fourier_needs_real_space(self, two_points):
        """Тест: Фурие само над R^d"""
        with pytest.raises(ValidationError):
            fourier_transform(two_points, [1.0])

    def test_projection_merges_atoms(self):
        """Тест: Съвпадащи проекции се сумират, нулите отпадат"""
        mu = PointDistribution.from_atoms([(0.0, 1.0), (0.0, -1.0), (0.5, 0.0)], [1.0, 2.0, 1.0], real_space=True)
        projected = project_measure(mu, [1.0, 0.0])
        assert projected.atom_count == 2
        cancelled = PointDistribution.from_atoms([(0.0, 1.0), (0.0, -1.0)], [1, -1], real_space=True)
        assert project_measure(cancelled, [1.0, 0.0]).atom_count == 0

    def test_projection_fourier_identity(self):
        """Тест: F(μ_ζ)(t) = F(μ)(tζ)"""
        mu = PointDistribution.from_atoms([(0.1, 0.2, 0.3), (-0.4, 0.5, 0.0)], [1.0, 0.5j], real_space=True)
        zeta = np.array([2.0, -1.0, 2.0]) / 3.0
        t = 1.7
        lhs = fourier_transform(project_measure(mu, zeta), [t])
        assert lhs == pytest.approx(fourier_transform(mu, t * zeta), abs=1e-14)

    def test_projection_needs_unit_vector(self):
        """Тест: |ζ| ≠ 1"""
        mu = PointDistribution.from_atoms([(0.1, 0.2)], [1.0], real_space=True)
        with pytest.raises(ValidationError):
            project_measure(mu, [1.0, 1.0])


class TestWeightAlgebra:
    """Тестове за спрягане, комбиниране и (де)сериализация"""

    def test_conjugate_point_masses(self, two_points):
        """Тест: ⟨conj F, φ⟩ = conj⟨F, φ̄⟩"""
        phi = ZPolynomial.monomial(2, 0)
        lhs = pair(conjugate_weight(two_points), phi)
        rhs = pair(two_points, phi.conjugate()).conjugate()
        assert lhs == rhs

    def test_combine_point_masses(self, two_points):
        """Тест: F − F = 0 върху всеки полином"""
        zero = combine_weights([(1, two_points), (-1, two_points)])
        assert pair(zero, ZPolynomial.monomial(1, 2)) == ExactScalar(0)

    def test_combine_mixed_kinds(self, two_points):
        """Тест: Различни видове тегла"""
        with pytest.raises(ValidationError):
            combine_weights([(1, two_points), (1, RadialDensity(1.0, (1.0,)))])

    def test_point_dict_round_trip(self, two_points):
        """Тест: weight_to_dict → weight_from_dict запазва сдвояванията"""
        back = weight_from_dict(weight_to_dict(two_points))
        phi = ZPolynomial.monomial(2, 1)
        assert pair(back, phi) == pair(two_points, phi)

    def test_radial_from_profile_name(self):
        """Тест: Радиално тегло по име на профил"""
        F = weight_from_dict({'kind': 'radial', 'radius': 0.5, 'profile': 'bump'})
        assert isinstance(F, RadialDensity)
        assert F.name == 'bump'
        assert F.profile_degree == 2

    def test_grid_values_size(self):
        """Тест: Грешен брой стойности"""
        data = {'kind': 'grid', 'axes': [{'start': 0, 'stop': 1, 'count': 3}], 'values': [1, 2]}
        with pytest.raises(ValidationError):
            weight_from_dict(data)

    def test_unknown_kind(self):
        """Тест: Непознат вид тегло"""
        with pytest.raises(ValidationError):
            weight_from_dict({'kind': 'spline'})
