"""
🧪 Unit Tests за базисните фамилии
"""
import math

import numpy as np
import pytest

from bases import (
    DiskMonomial,
    FockMonomial,
    HarmonicBasis,
    HelmholtzPlaneWave,
    LandauLevel,
    PolydiskMonomial,
    basis_from_dict,
    disk_kernel,
    disk_kernel_partial,
    eval_basis,
    gram_matrix,
    sized,
)
from exceptions import DomainError, ValidationError
from numeric_core import MultiIndex


def _laplacian(basis, points, h=0.01):
    """Централна разлика; точна за полиноми от степен ≤ 3"""
    base = basis.evaluate_all(points)
    total = np.zeros_like(base)
    for axis in range(points.shape[1]):
        step = np.zeros(points.shape[1])
        step[axis] = h
        total += basis.evaluate_all(points + step) - 2 * base + basis.evaluate_all(points - step)
    return total / h ** 2


class TestDiskMonomial:
    """Тестове за e_s(z) = √(s+1) z^s"""

    def test_value(self):
        """Тест: e_2(1/2) = √3/4"""
        assert eval_basis(DiskMonomial(3), 2, 0.5) == pytest.approx(math.sqrt(3) / 4)

    def test_index_outside_truncation(self):
        """Тест: Индекс извън отрязването"""
        with pytest.raises(ValidationError):
            eval_basis(DiskMonomial(3), 3, 0.5)

    def test_point_outside_disk(self):
        """Тест: |z| ≥ 1"""
        with pytest.raises(DomainError):
            eval_basis(DiskMonomial(3), 0, 1.0)

    def test_orthonormal(self):
        """Тест: Грамова матрица = I"""
        assert gram_matrix(DiskMonomial(8)) == pytest.approx(np.eye(8), abs=1e-12)

    def test_raw_polynomials_are_exact(self):
        """Тест: Ненормираните мономи са точни полиноми"""
        assert DiskMonomial(4, normalized=False).polynomial(3).is_exact
        assert not DiskMonomial(4).polynomial(3).is_exact

    def test_partial_kernel_converges(self):
        """Тест: Σ e_s(z) conj(e_s(w)) → (1 − z w̄)^{−2}"""
        z, w = 0.3 + 0.2j, -0.1 + 0.4j
        assert disk_kernel_partial(z, w, 200) == pytest.approx(disk_kernel(z, w), rel=1e-12)

    def test_kernel_domain(self):
        """Тест: Ядрото извън диска"""
        with pytest.raises(DomainError):
            disk_kernel(1.0, 0.0)


class TestOtherFamilies:
    """Тестове за полидиск, Фок, хармонични и равнинни вълни"""

    def test_polydisk_order(self):
        """Тест: Градуиран лексикографски ред на индексите"""
        basis = PolydiskMonomial(2, 1)
        assert basis.indices == [MultiIndex.of(0, 0), MultiIndex.of(1, 0), MultiIndex.of(0, 1)]
        value = basis.evaluate((1, 0), np.array([[0.5, 0.25]]))
        assert value[0] == pytest.approx(math.sqrt(2) * 0.5)

    def test_fock_orthonormal(self):
        """Тест: Фоковите мономи са ортонормирани"""
        assert gram_matrix(FockMonomial(6)) == pytest.approx(np.eye(6), abs=1e-10)

    def test_harmonic_sizes(self):
        """Тест: Брой хармоници до степен 3"""
        assert HarmonicBasis(1, 3).size == 2
        assert HarmonicBasis(2, 3).size == 7
        assert HarmonicBasis(3, 3).size == 16

    def test_harmonic_labels(self):
        """Тест: (степен, ъглов индекс)"""
        basis = HarmonicBasis(3, 2)
        assert basis.label(0) == (0, 0)
        assert basis.label(3) == (1, 1)
        assert basis.label(8) == (2, 2)

    def test_low_degree_solid_harmonics(self):
        """Тест: R_11 = x, R_1,−1 = y, R_10 = z"""
        pts = np.array([[0.1, 0.2, 0.3]])
        values = HarmonicBasis(3, 1).evaluate_all(pts)[:, 0]
        assert list(values) == pytest.approx([1.0, 0.2, 0.3, 0.1])

    @pytest.mark.parametrize("dimension", [2, 3])
    def test_harmonic_laplacian(self, dimension):
        """Тест: Дискретният Лапласиан изчезва"""
        rng = np.random.default_rng(3)
        pts = rng.uniform(-0.5, 0.5, size=(5, dimension))
        residual = _laplacian(HarmonicBasis(dimension, 3), pts)
        assert np.max(np.abs(residual)) < 1e-8

    def test_plane_wave_unit_directions(self):
        """Тест: Посоките трябва да са единични"""
        with pytest.raises(ValidationError):
            HelmholtzPlaneWave(np.array([[1.0, 1.0]]))
        wave = HelmholtzPlaneWave(np.array([[0.0, 1.0]]))
        assert wave.evaluate(0, np.array([[0.0, math.pi]]))[0] == pytest.approx(-1.0)


class TestBasisConfig:
    """Тестове за basis_from_dict и sized"""

    def test_disk_from_dict(self):
        """Тест: disk с нормиране по подразбиране"""
        basis = basis_from_dict({'kind': 'disk', 'truncation': 5})
        assert basis == DiskMonomial(5, True)

    def test_landau_from_dict(self):
        """Тест: landau носи конфигурацията на нивото"""
        basis = basis_from_dict({'kind': 'landau', 'truncation': 4, 'q': 1, 'B': 2.0})
        assert isinstance(basis, LandauLevel)
        assert basis.config.q == 1
        assert basis.size == 4

    def test_unknown_kind(self):
        """Тест: Непознат базис"""
        with pytest.raises(ValidationError):
            basis_from_dict({'kind': 'wavelet'})

    def test_sized(self):
        """Тест: Промяна на отрязването"""
        assert sized(DiskMonomial(3, False), 7) == DiskMonomial(7, False)
        with pytest.raises(ValidationError):
            sized(HelmholtzPlaneWave(np.array([[1.0, 0.0]])), 3)
