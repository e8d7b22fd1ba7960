"""
📐 Bases - evaluable function families for Bergman-type spaces

    DiskMonomial       e_s(z) = √(s+1) z^s, orthonormal under dA/π on the unit disk
    PolydiskMonomial   tensor products Π √(α_i+1) z_i^{α_i}, graded-lex order
    FockMonomial       z^s/√(2^{s+1} s!) · e^{−|z|²/4}, orthonormal over C under dA/π
    HarmonicBasis      R¹: 1, x; R²: 1, Re z^k, Im z^k; R³: real solid harmonics
    HelmholtzPlaneWave x ↦ e^{iω·x} with |ω| = 1
    LandauLevel        level-q functions built in physics.landau_basis

Every family exposes `size`, `indices`, `evaluate(index, points)` and, where the
members are polynomials in (z, z̄), `polynomial(index)` for exact assembly.
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from config import Config
from constants import BASIS_KINDS, FOCK_GAUSSIAN_EXPONENT, UNIT_NORM_TOL
from exceptions import DomainError, ValidationError
from numeric_core import MultiIndex, graded_lex
from weights import ZPolynomial, ball_nodes, polar_nodes

logger = logging.getLogger(__name__)

Index = Union[int, MultiIndex]


def _as_points(points: Any, dimension: int, dtype: type = complex) -> np.ndarray:
    pts = np.asarray(points, dtype=dtype)
    if pts.ndim == 0:
        pts = pts.reshape(1, 1)
    elif pts.ndim == 1:
        pts = pts[:, None] if dimension == 1 else pts[None, :]
    if pts.shape[1] != dimension:
        raise ValidationError(f"points of dimension {pts.shape[1]}, basis lives in dimension {dimension}")
    return pts


class _Basis:
    """Обща логика за индексиране"""

    kind = ''
    real_space = False
    domain_radius: Optional[float] = None

    @property
    def indices(self) -> List[Any]:
        raise NotImplementedError

    @property
    def size(self) -> int:
        return len(self.indices)

    def position(self, index: Any) -> int:
        indices = self.indices
        key = MultiIndex.coerce(index) if isinstance(indices[0], MultiIndex) else index
        try:
            return indices.index(key)
        except ValueError:
            raise ValidationError(f"index {index!r} outside the {self.kind} truncation of size {self.size}")

    def polynomial(self, index: Any) -> Optional[ZPolynomial]:
        return None

    def evaluate(self, index: Any, points: Any) -> np.ndarray:
        raise NotImplementedError

    def evaluate_all(self, points: Any) -> np.ndarray:
        """Матрица (size, N) от стойности на всички функции"""
        return np.array([self.evaluate(i, points) for i in self.indices])

    def _check_domain(self, pts: np.ndarray) -> None:
        if self.domain_radius is not None and np.any(np.abs(pts) >= self.domain_radius):
            raise DomainError(f"point outside the open unit {'disk' if self.dimension == 1 else 'polydisk'}")


@dataclass(frozen=True)
class DiskMonomial(_Basis):
    truncation: int
    normalized: bool = True

    kind = 'disk'
    dimension = 1
    domain_radius = 1.0

    def __post_init__(self) -> None:
        if self.truncation < 1:
            raise ValidationError(f"truncation must be >= 1, got {self.truncation}")

    @property
    def indices(self) -> List[int]:
        return list(range(self.truncation))

    def position(self, index: Any) -> int:
        if not isinstance(index, (int, np.integer)) or not 0 <= index < self.truncation:
            raise ValidationError(f"index {index!r} outside the disk truncation of size {self.truncation}")
        return int(index)

    def coefficient(self, s: int) -> Any:
        return math.sqrt(s + 1) if self.normalized else 1

    def polynomial(self, index: Any) -> ZPolynomial:
        s = self.position(index)
        return ZPolynomial.monomial((s,), (0,), self.coefficient(s))

    def evaluate(self, index: Any, points: Any) -> np.ndarray:
        s = self.position(index)
        z = _as_points(points, 1)
        self._check_domain(z)
        return self.coefficient(s) * z[:, 0] ** s

    def evaluate_all(self, points: Any) -> np.ndarray:
        z = _as_points(points, 1)[:, 0]
        self._check_domain(z)
        powers = np.vander(z, self.truncation, increasing=True).T
        scale = np.sqrt(np.arange(1, self.truncation + 1)) if self.normalized else 1.0
        return powers * (scale[:, None] if self.normalized else scale)

    def with_truncation(self, n: int) -> 'DiskMonomial':
        return DiskMonomial(n, self.normalized)


@dataclass(frozen=True)
class PolydiskMonomial(_Basis):
    dimension: int
    max_degree: int
    normalized: bool = True

    kind = 'polydisk'
    domain_radius = 1.0

    def __post_init__(self) -> None:
        if self.dimension < 1 or self.max_degree < 0:
            raise ValidationError("polydisk basis needs dimension >= 1 and max_degree >= 0")

    @property
    def indices(self) -> List[MultiIndex]:
        return graded_lex(self.dimension, self.max_degree)

    def coefficient(self, alpha: MultiIndex) -> Any:
        if not self.normalized:
            return 1
        return math.sqrt(math.prod(a + 1 for a in alpha))

    def polynomial(self, index: Any) -> ZPolynomial:
        alpha = self.indices[self.position(index)]
        return ZPolynomial.monomial(alpha, MultiIndex.zero(self.dimension), self.coefficient(alpha))

    def evaluate(self, index: Any, points: Any) -> np.ndarray:
        alpha = self.indices[self.position(index)]
        pts = _as_points(points, self.dimension)
        self._check_domain(pts)
        return self.coefficient(alpha) * np.prod(pts ** np.array(alpha.components), axis=1)

    def with_truncation(self, n: int) -> 'PolydiskMonomial':
        return PolydiskMonomial(self.dimension, n, self.normalized)


@dataclass(frozen=True)
class FockMonomial(_Basis):
    """Стойностите носят множителя e^{−|z|²/4}, така че f ḡ съдържа Гаусовото тегло"""

    truncation: int

    kind = 'fock'
    dimension = 1

    def __post_init__(self) -> None:
        if self.truncation < 1:
            raise ValidationError(f"truncation must be >= 1, got {self.truncation}")

    @property
    def indices(self) -> List[int]:
        return list(range(self.truncation))

    @staticmethod
    def norm(s: int) -> float:
        """‖z^s‖ под e^{−|z|²/2} dA/π"""
        return math.sqrt(2.0 ** (s + 1) * math.factorial(s))

    def evaluate(self, index: Any, points: Any) -> np.ndarray:
        s = self.position(index)
        z = _as_points(points, 1)[:, 0]
        return z ** s / self.norm(s) * np.exp(-0.5 * FOCK_GAUSSIAN_EXPONENT * np.abs(z) ** 2)

    def with_truncation(self, n: int) -> 'FockMonomial':
        return FockMonomial(n)


def _solid_harmonic_table(points: np.ndarray, degree: int) -> np.ndarray:
    """
    Реални твърди хармоници R_lm в R³, ред l² + l + m

    R_lm = N_lm · Π_l^{|m|}(z, r²) · (Re or Im)(x + iy)^{|m|}, with
    (l−m)Π_l^m = (2l−1) z Π_{l−1}^m − (l+m−1) r² Π_{l−2}^m, Π_m^m = (2m−1)!!,
    N_l0 = 1, N_lm = √(2(l−m)!/(l+m)!). R_11 = x, R_1,−1 = y, R_10 = z.
    """
    x, y, z = points[:, 0], points[:, 1], points[:, 2]
    r2 = x * x + y * y + z * z
    xy = (x + 1j * y)
    table = np.zeros(((degree + 1) ** 2, len(points)))
    for m in range(degree + 1):
        pi_prev2 = None
        pi_prev = np.full(len(points), float(math.prod(range(2 * m - 1, 0, -2))))
        power = xy ** m
        for l in range(m, degree + 1):
            if l == m:
                pi_l = pi_prev
            elif l == m + 1:
                pi_l = (2 * m + 1) * z * pi_prev
            else:
                pi_l = ((2 * l - 1) * z * pi_prev - (l + m - 1) * r2 * pi_prev2) / (l - m)
            if l > m:
                pi_prev2, pi_prev = pi_prev, pi_l
            if m == 0:
                table[l * l + l] = pi_l
            else:
                scale = math.sqrt(2.0 * math.factorial(l - m) / math.factorial(l + m))
                table[l * l + l + m] = scale * pi_l * power.real
                table[l * l + l - m] = scale * pi_l * power.imag
    return table


@dataclass(frozen=True)
class HarmonicBasis(_Basis):
    """Хармонични полиноми от степен ≤ degree в R¹, R² или R³ (реални)"""

    dimension: int
    degree: int = Config.HARMONIC_DEGREE

    kind = 'harmonic'
    real_space = True

    def __post_init__(self) -> None:
        if self.dimension not in (1, 2, 3):
            raise ValidationError(f"harmonic bases exist for d = 1, 2, 3, got {self.dimension}")
        if self.degree < 0:
            raise ValidationError("harmonic degree must be >= 0")

    @property
    def indices(self) -> List[int]:
        if self.dimension == 1:
            return list(range(min(self.degree, 1) + 1))
        if self.dimension == 2:
            return list(range(2 * self.degree + 1))
        return list(range((self.degree + 1) ** 2))

    def label(self, index: int) -> Tuple[int, int]:
        """(степен, ъглов индекс) на функцията"""
        self.position(index)
        if self.dimension == 1:
            return (index, 0)
        if self.dimension == 2:
            return (0, 0) if index == 0 else ((index + 1) // 2, 1 if index % 2 else -1)
        l = math.isqrt(index)
        return (l, index - l * l - l)

    def evaluate_all(self, points: Any) -> np.ndarray:
        pts = _as_points(points, self.dimension, float)
        if self.dimension == 1:
            return np.array([np.ones(len(pts)), pts[:, 0]])[: self.size]
        if self.dimension == 2:
            z = pts[:, 0] + 1j * pts[:, 1]
            rows = [np.ones(len(pts))]
            power = np.ones(len(pts), dtype=complex)
            for _ in range(self.degree):
                power = power * z
                rows.extend([power.real, power.imag])
            return np.array(rows)
        return _solid_harmonic_table(pts, self.degree)

    def evaluate(self, index: Any, points: Any) -> np.ndarray:
        return self.evaluate_all(points)[self.position(index)]

    def with_truncation(self, n: int) -> 'HarmonicBasis':
        return HarmonicBasis(self.dimension, n)


@dataclass(frozen=True, eq=False)
class HelmholtzPlaneWave(_Basis):
    directions: np.ndarray

    kind = 'plane-wave'
    real_space = True

    def __post_init__(self) -> None:
        dirs = np.atleast_2d(np.asarray(self.directions, dtype=float))
        norms = np.linalg.norm(dirs, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            raise ValidationError("plane-wave directions must be unit vectors")
        object.__setattr__(self, 'directions', dirs)
        object.__setattr__(self, 'dimension', dirs.shape[1])

    @property
    def indices(self) -> List[int]:
        return list(range(len(self.directions)))

    def evaluate(self, index: Any, points: Any) -> np.ndarray:
        pts = _as_points(points, self.dimension, float)
        return np.exp(1j * pts @ self.directions[self.position(index)])


@dataclass(frozen=True)
class LandauLevel(_Basis):
    """Функциите на ниво q; изграждат се (и кешират) в physics.landau_basis"""

    config: Any

    kind = 'landau'
    dimension = 1

    @property
    def indices(self) -> List[int]:
        return list(range(self.config.n))

    def evaluate(self, index: Any, points: Any) -> np.ndarray:
        from physics import landau_basis

        s = self.position(index)
        z = _as_points(points, 1)[:, 0]
        return landau_basis(self.config).evaluate(s, z)

    def evaluate_all(self, points: Any) -> np.ndarray:
        from physics import landau_basis

        z = _as_points(points, 1)[:, 0]
        basis = landau_basis(self.config)
        return np.array([basis.evaluate(s, z) for s in self.indices])

    def with_truncation(self, n: int) -> 'LandauLevel':
        from dataclasses import replace

        return LandauLevel(replace(self.config, n=n))


BasisSpec = Union[DiskMonomial, PolydiskMonomial, FockMonomial, HarmonicBasis, HelmholtzPlaneWave, LandauLevel]


def eval_basis(spec: BasisSpec, index: Index, point: Any) -> complex:
    """
    Стойност на една базисна функция в една точка

    Raises:
        ValidationError: index outside the truncation
        DomainError: point outside the basis domain
    """
    pts = np.atleast_1d(np.asarray(point))
    pts = pts.reshape(1, -1)
    value = spec.evaluate(index, pts)[0]
    return complex(value)


def disk_kernel(z: complex, w: complex) -> complex:
    """
    Бергманово ядро на диска при мярка dA/π: P(z, w) = (1 − z w̄)^{−2}

    Raises:
        DomainError: |z| ≥ 1 or |w| ≥ 1
    """
    z, w = complex(z), complex(w)
    if abs(z) >= 1 or abs(w) >= 1:
        raise DomainError(f"kernel arguments must lie in the open unit disk: {z}, {w}")
    return 1.0 / (1.0 - z * w.conjugate()) ** 2


def disk_kernel_partial(z: complex, w: complex, truncation: int) -> complex:
    """Σ_{s<n} e_s(z) conj(e_s(w))"""
    basis = DiskMonomial(truncation)
    ez = basis.evaluate_all(np.array([z]))[:, 0]
    ew = basis.evaluate_all(np.array([w]))[:, 0]
    return complex(np.sum(ez * ew.conj()))


def quadrature_for(spec: BasisSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Фиксирана квадратура за Грамова матрица на фамилията"""
    if isinstance(spec, DiskMonomial):
        n = spec.truncation
        z, w = polar_nodes(1.0, n + 10, 2 * n + 10)
        return z[:, None], w / np.pi
    if isinstance(spec, FockMonomial):
        n = spec.truncation
        radius = 12.0 + 2.0 * math.sqrt(n)
        z, w = polar_nodes(radius, 4 * n + 100, 2 * n + 10)
        return z[:, None], w / np.pi
    if isinstance(spec, HarmonicBasis):
        if spec.dimension == 1:
            from numeric_core import gauss_legendre

            rule = gauss_legendre(spec.degree + 10, (-1.0, 1.0))
            return rule.nodes[:, None], rule.weights
        pts, w = ball_nodes(1.0, spec.dimension, spec.degree + 10, spec.degree + 10)
        return pts, w
    raise ValidationError(f"no fixed Gram quadrature for {spec.kind} bases")


def gram_matrix(spec: BasisSpec) -> np.ndarray:
    """G_jk = ∫ f_j conj(f_k) по фиксираната квадратура на фамилията"""
    pts, w = quadrature_for(spec)
    values = spec.evaluate_all(pts)
    gram = (values * w) @ values.conj().T
    logger.debug(f"🔍 Gram matrix of {spec.kind} basis, size {spec.size}")
    return gram


def basis_from_dict(data: Dict[str, Any]) -> BasisSpec:
    """Базис от конфигурационен речник (виж CONFIG_REFERENCE.md)"""
    kind = data.get('kind', 'disk')
    if kind not in BASIS_KINDS:
        raise ValidationError(f"basis.kind must be one of {sorted(BASIS_KINDS)}, got {kind!r}")
    truncation = int(data.get('truncation', 8))
    if kind == 'disk':
        return DiskMonomial(truncation, bool(data.get('normalized', True)))
    if kind == 'polydisk':
        return PolydiskMonomial(
            int(data.get('dimension', 2)), int(data.get('max_degree', 3)), bool(data.get('normalized', True))
        )
    if kind == 'fock':
        return FockMonomial(truncation)
    if kind == 'harmonic':
        return HarmonicBasis(int(data.get('dimension', 3)), int(data.get('degree', Config.HARMONIC_DEGREE)))
    if kind == 'plane-wave':
        return HelmholtzPlaneWave(np.asarray(data.get('directions', [[1.0, 0.0]]), dtype=float))
    from physics import LandauConfig

    return LandauLevel(
        LandauConfig(
            B=float(data.get('B', 2.0)),
            q=int(data.get('q', 0)),
            n=truncation,
            convention=data.get('convention', 'holomorphic'),
        )
    )


def sized(spec: BasisSpec, n: int) -> BasisSpec:
    """Същата фамилия с друго отрязване"""
    if isinstance(spec, HelmholtzPlaneWave):
        raise ValidationError("plane-wave families are sized by their directions")
    return spec.with_truncation(n)
