"""
🧪 Unit Tests за физичните приложения: Ландау, Хелмхолц, Борн
"""
import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from bases import HarmonicBasis
from exceptions import GridResolutionError, ValidationError
from physics import (
    LandauConfig,
    born_kernel,
    born_matrix,
    born_rank_sweep,
    creation_apply,
    cross_level_gram,
    dq_transform,
    ground_state,
    grid_creation_residual,
    helmholtz_matrix,
    landau_basis,
    landau_radial_spectrum,
    landau_toeplitz,
    partial_fourier,
    sphere_sampling,
)
from weights import (
    GridDensity,
    PointDistribution,
    PolynomialDensity,
    RadialDensity,
    ZPolynomial,
    fourier_transform,
    named_profile,
)


@pytest.fixture
def lowest_level():
    """Fixture: B = 2, q = 0, n = 4"""
    return LandauConfig(B=2.0, q=0, n=4)


@pytest.fixture
def three_points_3d():
    """Fixture: три точкови маси в R³"""
    return PointDistribution.from_atoms(
        [(0.3, 0.1, -0.2), (-0.2, 0.4, 0.1), (0.1, -0.3, 0.3)],
        [1.0, 0.5 - 0.5j, 2.0],
        real_space=True,
    )


class TestLandauConfig:
    """Тестове за параметрите на нивото"""

    def test_level_energy(self):
        """Тест: Λ_q = (2q+1)B"""
        assert LandauConfig(B=2.0, q=1).level_energy == pytest.approx(6.0)

    @pytest.mark.parametrize("kwargs", [{'B': 0.0}, {'q': -1}, {'convention': 'symmetric'}, {'grid_points': 4}])
    def test_invalid(self, kwargs):
        """Тест: Невалидни параметри"""
        with pytest.raises(ValidationError):
            LandauConfig(**kwargs)

    def test_grid_is_periodic(self, lowest_level):
        """Тест: x_k = −L + k·2L/N"""
        axis = lowest_level.axis
        assert len(axis) == lowest_level.grid_points
        assert axis[0] == pytest.approx(-lowest_level.grid_half_width)
        assert axis[-1] < lowest_level.grid_half_width


class TestLandauBasis:
    """Тестове за фамилията на нивото"""

    def test_lowest_level_norms(self, lowest_level):
        """Тест: ‖z^s e^{−|z|²/2}‖² = s! при B = 2"""
        basis = landau_basis(lowest_level)
        assert basis.norms2 == [Fraction(1), Fraction(1), Fraction(2), Fraction(6)]
        assert basis.grid_gram_deviation < 1e-8

    def test_first_level_orthonormal(self):
        """Тест: Q̄ изгражда ортонормирана фамилия на ниво 1"""
        basis = landau_basis(LandauConfig(B=2.0, q=1, n=4))
        assert basis.size == 4
        assert basis.grid_gram_deviation < 1e-8

    def test_cross_level_orthogonality(self):
        """Тест: Нивата 0 и 1 са ортогонални; изписаният калибровъчен член ги смесва"""
        holomorphic = cross_level_gram(LandauConfig(B=2.0, q=1, n=2), 0)
        assert np.max(np.abs(holomorphic)) < 1e-8
        # Q̄1 = (i/2)z̄ − z/2 при B = 2, а z е x_1 на ниво 0
        printed = cross_level_gram(LandauConfig(B=2.0, q=1, n=2, convention='as-printed'), 0)
        assert abs(printed[0, 1]) == pytest.approx(1 / math.sqrt(2), abs=1e-6)

    @pytest.mark.parametrize("q", [1, 2])
    def test_grid_creation_stays_in_exact_family(self, q):
        """Тест: Q̄^q върху мрежата попада в обвивката на точната фамилия"""
        cfg = LandauConfig(B=2.0, q=q, n=4, grid_points=192, half_width=9.0)
        assert grid_creation_residual(cfg) <= 1e-8

    def test_grid_creation_trivial_on_lowest_level(self, lowest_level):
        """Тест: При q = 0 няма какво да се прилага"""
        assert grid_creation_residual(lowest_level) == 0.0

    def test_creation_on_ground_state(self, lowest_level):
        """Тест: Q̄ e^{−B|z|²/4} = (iB/2) z̄ e^{−B|z|²/4}"""
        g = ground_state(lowest_level)
        image = creation_apply(g, lowest_level)
        expected = 1j * (lowest_level.B / 2) * g.points().conj() * g.values
        assert np.max(np.abs(image.values - expected)) < 1e-8

    def test_radial_potential_is_diagonal(self, lowest_level):
        """Тест: Радиален потенциал дава диагонална ермитова матрица"""
        M, report = landau_toeplitz(RadialDensity(1.0, (1.0,)), lowest_level)
        matrix = M.as_complex()
        assert np.max(np.abs(matrix - np.diag(np.diag(matrix)))) < 1e-10
        assert report.kind == 'eigenvalues'
        assert all(complex(v).real > 0 for v in report.values)
        assert M.metadata['landau_level'] == pytest.approx(2.0)

    def test_real_potential_is_hermitian(self, lowest_level):
        """Тест: Реален нерадиален потенциал дава ермитова матрица"""
        terms = [(0, 0, 1.0), (1, 0, 0.5), (0, 1, 0.5), (2, 0, 0.25), (0, 2, 0.25)]
        V = PolynomialDensity(ZPolynomial.from_terms(terms))
        M, report = landau_toeplitz(V, lowest_level)
        matrix = M.as_complex()
        assert np.max(np.abs(matrix - matrix.conj().T)) <= 1e-12
        assert abs(matrix[0, 1]) > 1e-3
        assert report.kind == 'eigenvalues'

    def test_real_space_grid_rejected(self, lowest_level):
        """Тест: Мрежа в R² вместо в равнината"""
        axis = np.linspace(-0.5, 0.5, 5)
        with pytest.raises(ValidationError):
            landau_toeplitz(GridDensity(np.ones((5, 5)), (axis, axis)), lowest_level)


class TestLandauSpectrum:
    """Тестове за точния спектър при радиален потенциал"""

    def test_indicator_on_lowest_level(self, lowest_level):
        """Тест: λ_s = γ(s+1, 1)/s! за индикатора на диска при B = 2"""
        values = landau_radial_spectrum(RadialDensity(1.0, (1.0,)), replace(lowest_level, n=3))
        e = math.exp(-1.0)
        assert [float(v) for v in values] == pytest.approx([1 - e, 1 - 2 * e, 1 - 2.5 * e], abs=1e-14)

    def test_matches_quadrature_diagonal(self, lowest_level):
        """Тест: Точният спектър съвпада с диагонала от квадратурата"""
        V = RadialDensity(1.0, named_profile('c2-bump', 1.0))
        M, _ = landau_toeplitz(V, lowest_level)
        exact = [float(v) for v in landau_radial_spectrum(V, lowest_level)]
        assert np.diag(M.as_complex()).real == pytest.approx(exact, rel=1e-9)

    @pytest.mark.parametrize("q", [0, 1, 2])
    def test_no_rank_plateau(self, q):
        """Тест: Всичките 24 собствени стойности са положителни, рангът е n"""
        V = RadialDensity(1.0, named_profile('c2-bump', 1.0))
        values = landau_radial_spectrum(V, LandauConfig(B=2.0, q=q, n=24))
        assert len(values) == 24
        assert all(v > 0 for v in values)
        assert float(min(values)) < 1e-8 * float(max(values))

    def test_mixed_momenta_rejected(self):
        """Тест: Изписаният калибровъчен член смесва ъгловите моменти"""
        V = RadialDensity(1.0, (1.0,))
        with pytest.raises(ValidationError):
            landau_radial_spectrum(V, LandauConfig(B=2.0, q=1, n=2, convention='as-printed'))

    def test_needs_polynomial_profile(self, lowest_level):
        """Тест: Профил без коефициенти"""
        V = RadialDensity(1.0, profile=lambda r: np.ones_like(r), profile_degree=0)
        with pytest.raises(ValidationError):
            landau_radial_spectrum(V, lowest_level)


class TestDqTransform:
    """Тестове за Σ c_m Δ^m V"""

    @pytest.fixture
    def gaussian_grid(self):
        axis = np.linspace(-4.0, 4.0, 161)
        x, y = np.meshgrid(axis, axis, indexing='ij')
        return GridDensity(np.exp(-(x ** 2 + y ** 2)), (axis, axis), plane=True), x ** 2 + y ** 2

    def test_identity_coefficients(self, gaussian_grid):
        """Тест: c = (1,) връща V"""
        V, _ = gaussian_grid
        assert np.array_equal(dq_transform(V, [1.0]).values, V.values)

    def test_laplacian_of_gaussian(self, gaussian_grid):
        """Тест: Δe^{−r²} = (4r² − 4)e^{−r²}"""
        V, r2 = gaussian_grid
        W = dq_transform(V, [0.0, 1.0])
        assert np.max(np.abs(W.values - (4 * r2 - 4) * np.exp(-r2))) < 0.02

    def test_rough_grid(self):
        """Тест: Шумът не е гладък в мащаба на мрежата"""
        axis = np.linspace(-1.0, 1.0, 32)
        noise = np.random.default_rng(0).normal(size=(32, 32))
        with pytest.raises(GridResolutionError):
            dq_transform(GridDensity(noise, (axis, axis), plane=True), [0.0, 1.0])


class TestHelmholtz:
    """Тестове за матриците на Хелмхолц"""

    def test_partial_fourier_merges_columns(self):
        """Тест: Маси с еднакво x′ се сливат с фазите e^{−2ix₁}"""
        mu = PointDistribution.from_atoms([(0.5, 0.1), (-0.25, 0.1), (0.0, 0.3)], [1.0, 1.0, 1.0], real_space=True)
        projected = partial_fourier(mu)
        assert projected.atom_count == 2
        total = np.exp(-1j) + np.exp(0.5j) + 1.0
        assert fourier_transform(projected, [0.0]) == pytest.approx(total)

    def test_paths_agree(self, three_points_3d):
        """Тест: Директният и трансформираният път съвпадат"""
        harmonics = HarmonicBasis(2, 3)
        direct = helmholtz_matrix(three_points_3d, harmonics, 'direct').as_complex()
        transform = helmholtz_matrix(three_points_3d, harmonics, 'transform').as_complex()
        assert np.max(np.abs(direct - transform)) < 1e-12

    def test_dimension_mismatch(self, three_points_3d):
        """Тест: Хармоници в R¹ за тегло в R³"""
        with pytest.raises(ValidationError):
            helmholtz_matrix(three_points_3d, HarmonicBasis(1, 2))

    def test_unknown_path(self, three_points_3d):
        """Тест: Непознат път"""
        with pytest.raises(ValidationError):
            helmholtz_matrix(three_points_3d, HarmonicBasis(2, 2), 'spectral')


class TestBorn:
    """Тестове за ядрото на Борн"""

    def test_sampling_weights(self):
        """Тест: Теглата сумират дължината / площта на сферата"""
        assert sphere_sampling(2, 8).weights.sum() == pytest.approx(2 * math.pi)
        assert sphere_sampling(3, 50).weights.sum() == pytest.approx(4 * math.pi)
        assert sphere_sampling(3, 12, 'icosahedral').size == 12

    def test_icosahedral_sizes(self):
        """Тест: Само 10·4^k + 2 точки"""
        with pytest.raises(ValidationError):
            sphere_sampling(3, 13, 'icosahedral')

    def test_kernel_on_diagonal(self, three_points_3d):
        """Тест: K(ω, ω) = F̂(0) = Σ c"""
        omega = [0.0, 0.0, 1.0]
        assert born_kernel(three_points_3d, omega, omega) == pytest.approx(3.5 - 0.5j)

    def test_kernel_needs_unit_vectors(self, three_points_3d):
        """Тест: |ω| ≠ 1"""
        with pytest.raises(ValidationError):
            born_kernel(three_points_3d, [0.0, 0.0, 2.0], [0.0, 0.0, 1.0])

    def test_rank_is_atom_count(self, three_points_3d):
        """Тест: Рангът е броят атоми за всяка извадка"""
        ranks = born_rank_sweep(three_points_3d, [42, 12], rel_tol=1e-10)
        assert ranks == [(12, 3), (42, 3)]

    def test_matrix_is_hermitian_for_real_weights(self):
        """Тест: K(ω, ς) = conj K(ς, ω) при реални коефициенти"""
        atoms = [(0.3, 0.1, -0.2), (-0.2, 0.4, 0.1)]
        F = PointDistribution.from_atoms(atoms, [1.0, 2.0], real_space=True)
        K, _ = born_matrix(F, sphere_sampling(3, 12, 'icosahedral'))
        assert np.max(np.abs(K - K.conj().T)) <= 1e-12
        assert np.max(np.abs(K.imag)) > 1e-3
