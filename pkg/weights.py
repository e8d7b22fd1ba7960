"""
⚖️ Weights - distributions, measures and densities paired with test functions

Four weight kinds are representable:
    PointDistribution - finite sums of (derivatives of) point masses in C^d or R^d
    RadialDensity     - f(|z|)·z^α z̄^β on a disk (dA/π) or f(|x|) on a ball in R²/R³
    PolynomialDensity - exact polynomial in (z, z̄) on a disk of rational radius
    GridDensity       - samples on a uniform rectangular grid (midpoint rule)

Test functions are either ZPolynomial instances (exact, differentiable) or
callables taking an (N, d) array of points and returning N values.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import j0

from config import Config
from constants import BALL_QUADRATURE_POINTS, QUADRATURE_MARGIN, UNIT_NORM_TOL, WEIGHT_KINDS
from exceptions import DomainError, QuadratureError, ValidationError
from numeric_core import ExactScalar, MultiIndex, gauss_legendre, is_exact, parse_exact

logger = logging.getLogger(__name__)

TermKey = Tuple[Tuple[int, ...], Tuple[int, ...]]
TestFunction = Union['ZPolynomial', Callable[[np.ndarray], Any]]


# ---------------------------------------------------------------------------
# Scalar helpers (exact when both operands are exact)
# ---------------------------------------------------------------------------

def _mul(a: Any, b: Any) -> Any:
    if is_exact(a) and is_exact(b):
        return ExactScalar.coerce(a) * ExactScalar.coerce(b)
    return complex(a) * complex(b)


def _add(a: Any, b: Any) -> Any:
    if is_exact(a) and is_exact(b):
        return ExactScalar.coerce(a) + ExactScalar.coerce(b)
    return complex(a) + complex(b)


def _conj(value: Any) -> Any:
    if isinstance(value, ExactScalar):
        return value.conjugate()
    if is_exact(value):
        return value
    return complex(value).conjugate()


def _is_zero(value: Any) -> bool:
    if isinstance(value, ExactScalar):
        return value.is_zero()
    return value == 0


def _zero_like(*values: Any) -> Any:
    return ExactScalar() if all(is_exact(v) for v in values) else 0j


# ---------------------------------------------------------------------------
# Polynomial test functions
# ---------------------------------------------------------------------------

class ZPolynomial:
    """
    Полином в (z, z̄) над C^d: Σ c · z^α z̄^β

    Coefficients may be exact (int, Fraction, ExactScalar) or floating point.
    Calling the instance on an (N, d) complex array evaluates it pointwise, so
    it can be used wherever a callable test function is accepted.
    """

    def __init__(self, terms: Dict[TermKey, Any], dimension: int = 1):
        if dimension < 1:
            raise ValidationError(f"dimension must be >= 1, got {dimension}")
        cleaned: Dict[TermKey, Any] = {}
        for (alpha, beta), coeff in terms.items():
            a = MultiIndex.coerce(alpha).components
            b = MultiIndex.coerce(beta).components
            if len(a) != dimension or len(b) != dimension:
                raise ValidationError(f"term {(a, b)} does not match dimension {dimension}")
            key = (a, b)
            cleaned[key] = _add(cleaned[key], coeff) if key in cleaned else coeff
        self.terms: Dict[TermKey, Any] = {k: c for k, c in cleaned.items() if not _is_zero(c)}
        self.dimension = dimension

    @classmethod
    def monomial(cls, alpha: Any, beta: Any, coeff: Any = 1) -> 'ZPolynomial':
        a = MultiIndex.coerce(alpha)
        b = MultiIndex.coerce(beta)
        if a.dimension != b.dimension:
            raise ValidationError("holomorphic and antiholomorphic orders differ in dimension")
        return cls({(a.components, b.components): coeff}, dimension=a.dimension)

    @classmethod
    def constant(cls, value: Any, dimension: int = 1) -> 'ZPolynomial':
        zero = (0,) * dimension
        return cls({(zero, zero): value}, dimension=dimension)

    @classmethod
    def from_terms(cls, triples: Iterable[Tuple[int, int, Any]]) -> 'ZPolynomial':
        """Едномерен полином от тройки (k, l, c) за c·z^k z̄^l"""
        terms: Dict[TermKey, Any] = {}
        for k, l, c in triples:
            key = ((int(k),), (int(l),))
            terms[key] = _add(terms[key], c) if key in terms else c
        return cls(terms, dimension=1)

    @property
    def degree(self) -> int:
        return max((sum(a) + sum(b) for a, b in self.terms), default=0)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms

    def conjugate(self) -> 'ZPolynomial':
        return ZPolynomial({(b, a): _conj(c) for (a, b), c in self.terms.items()}, self.dimension)

    def derivative(self, holo: Any, antiholo: Any) -> 'ZPolynomial':
        """∂^a ∂̄^b"""
        a = MultiIndex.coerce(holo)
        b = MultiIndex.coerce(antiholo)
        if a.dimension != self.dimension or b.dimension != self.dimension:
            raise ValidationError("derivative order does not match polynomial dimension")
        result: Dict[TermKey, Any] = {}
        for (alpha, beta), c in self.terms.items():
            ma, mb = MultiIndex(alpha), MultiIndex(beta)
            fa, fb = ma.falling_factorial(a), mb.falling_factorial(b)
            if fa == 0 or fb == 0:
                continue
            key = (ma.minus(a).components, mb.minus(b).components)
            value = _mul(c, fa * fb)
            result[key] = _add(result[key], value) if key in result else value
        return ZPolynomial(result, self.dimension)

    def _check_same_dimension(self, other: 'ZPolynomial') -> None:
        if other.dimension != self.dimension:
            raise ValidationError("polynomials live in different dimensions")

    def __add__(self, other: Any) -> 'ZPolynomial':
        if not isinstance(other, ZPolynomial):
            other = ZPolynomial.constant(other, self.dimension)
        self._check_same_dimension(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = _add(terms[key], c) if key in terms else c
        return ZPolynomial(terms, self.dimension)

    __radd__ = __add__

    def __neg__(self) -> 'ZPolynomial':
        return self * -1

    def __sub__(self, other: Any) -> 'ZPolynomial':
        if not isinstance(other, ZPolynomial):
            other = ZPolynomial.constant(other, self.dimension)
        return self + (-other)

    def __mul__(self, other: Any) -> 'ZPolynomial':
        if isinstance(other, ZPolynomial):
            self._check_same_dimension(other)
            terms: Dict[TermKey, Any] = {}
            for (a1, b1), c1 in self.terms.items():
                for (a2, b2), c2 in other.terms.items():
                    key = (
                        tuple(x + y for x, y in zip(a1, a2)),
                        tuple(x + y for x, y in zip(b1, b2)),
                    )
                    value = _mul(c1, c2)
                    terms[key] = _add(terms[key], value) if key in terms else value
            return ZPolynomial(terms, self.dimension)
        return ZPolynomial({k: _mul(c, other) for k, c in self.terms.items()}, self.dimension)

    __rmul__ = __mul__

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ZPolynomial):
            return NotImplemented
        if self.dimension != other.dimension or set(self.terms) != set(other.terms):
            return False
        return all(_is_zero(_add(c, _mul(other.terms[k], -1))) for k, c in self.terms.items())

    def evaluate(self, point: Sequence[Any]) -> Any:
        """Стойност в една точка (точна, ако точката и коефициентите са точни)"""
        coords = list(point)
        if len(coords) != self.dimension:
            raise ValidationError(f"point {coords} does not match dimension {self.dimension}")
        if self.is_exact and all(is_exact(c) for c in coords):
            zs = [ExactScalar.coerce(c) for c in coords]
            total = ExactScalar()
            for (alpha, beta), c in self.terms.items():
                value = ExactScalar.coerce(c)
                for z, a, b in zip(zs, alpha, beta):
                    value = value * (z ** a) * (z.conjugate() ** b)
                total = total + value
            return total
        zc = [complex(c) for c in coords]
        total_c = 0j
        for (alpha, beta), c in self.terms.items():
            value = complex(c)
            for z, a, b in zip(zc, alpha, beta):
                value *= z ** a * z.conjugate() ** b
            total_c += value
        return total_c

    def evaluate_array(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=complex)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[1] != self.dimension:
            raise ValidationError(f"points of dimension {pts.shape[1]} for a polynomial in C^{self.dimension}")
        result = np.zeros(pts.shape[0], dtype=complex)
        conj = pts.conj()
        for (alpha, beta), c in self.terms.items():
            value = np.full(pts.shape[0], complex(c))
            for i, (a, b) in enumerate(zip(alpha, beta)):
                if a:
                    value *= pts[:, i] ** a
                if b:
                    value *= conj[:, i] ** b
            result += value
        return result

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.evaluate_array(points)

    def __repr__(self) -> str:
        return f"ZPolynomial({len(self.terms)} terms, degree {self.degree}, C^{self.dimension})"


# ---------------------------------------------------------------------------
# Weight kinds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointTerm:
    """coeff · ∂^holo ∂̄^antiholo δ"""

    coeff: Any
    holo: MultiIndex
    antiholo: MultiIndex

    @property
    def order(self) -> int:
        return self.holo.order + self.antiholo.order


@dataclass(frozen=True)
class PointMass:
    location: Tuple[Any, ...]
    terms: Tuple[PointTerm, ...]


def _location_key(location: Sequence[Any]) -> Tuple[complex, ...]:
    return tuple(complex(c) for c in location)


@dataclass(frozen=True, eq=False)
class PointDistribution:
    """
    Крайна комбинация от δ-функции и техни производни

    ⟨L δ_{z_q}, φ⟩ = (L φ)(z_q), with L = Σ coeff · ∂^a ∂̄^b.
    Over R^d (real_space=True) only zero-order terms are allowed.
    """

    masses: Tuple[PointMass, ...]
    real_space: bool = False
    ambient_dimension: Optional[int] = None

    def __post_init__(self) -> None:
        masses = tuple(self.masses)
        object.__setattr__(self, 'masses', masses)
        dims = {len(m.location) for m in masses}
        if self.ambient_dimension is not None:
            dims.add(self.ambient_dimension)
        if len(dims) > 1:
            raise ValidationError(f"point locations have mixed dimensions {sorted(dims)}")
        seen = set()
        for mass in masses:
            key = _location_key(mass.location)
            if key in seen:
                raise ValidationError(f"point locations must be pairwise distinct: {mass.location}")
            seen.add(key)
            if self.real_space:
                if any(isinstance(c, ExactScalar) and c.im != 0 for c in mass.location) or any(
                    isinstance(c, (complex, np.complexfloating)) and complex(c).imag != 0
                    for c in mass.location
                ):
                    raise ValidationError("real-space point locations must be real")
                if any(t.order for t in mass.terms):
                    raise ValidationError("derivative terms are only supported over C^d")
            for term in mass.terms:
                if term.holo.dimension != len(mass.location) or term.antiholo.dimension != len(mass.location):
                    raise ValidationError("derivative order does not match location dimension")

    @classmethod
    def from_atoms(
        cls,
        points: Sequence[Any],
        coeffs: Sequence[Any],
        real_space: bool = False,
    ) -> 'PointDistribution':
        """Чисти точкови маси Σ c_q δ_{z_q}; скаларите се четат като точки в C¹ / R¹"""
        if len(points) != len(coeffs):
            raise ValidationError("points and coefficients differ in length")
        masses = []
        for p, c in zip(points, coeffs):
            loc = tuple(p) if isinstance(p, (tuple, list, np.ndarray)) else (p,)
            zero = MultiIndex.zero(len(loc))
            masses.append(PointMass(loc, (PointTerm(c, zero, zero),)))
        return cls(tuple(masses), real_space=real_space)

    @property
    def dimension(self) -> int:
        if self.masses:
            return len(self.masses[0].location)
        return self.ambient_dimension or 1

    @property
    def atom_count(self) -> int:
        return len(self.masses)

    @property
    def term_count(self) -> int:
        """Брой различни (a, b) двойки, сумирани по точките"""
        return sum(len({(t.holo, t.antiholo) for t in m.terms}) for m in self.masses)

    @property
    def is_pure(self) -> bool:
        return all(t.order == 0 for m in self.masses for t in m.terms)

    @property
    def is_exact(self) -> bool:
        return all(
            is_exact(c) for m in self.masses for c in m.location
        ) and all(is_exact(t.coeff) for m in self.masses for t in m.terms)

    def locations_array(self) -> np.ndarray:
        dtype = float if self.real_space else complex
        if not self.masses:
            return np.zeros((0, self.dimension), dtype=dtype)
        return np.array([[complex(c) if not self.real_space else float(complex(c).real) for c in m.location]
                         for m in self.masses], dtype=dtype)

    def mass_coefficients(self) -> List[Any]:
        """Сума на коефициентите от нулев ред за всяка точка"""
        result = []
        for m in self.masses:
            total: Any = _zero_like(*(t.coeff for t in m.terms))
            for t in m.terms:
                if t.order == 0:
                    total = _add(total, t.coeff)
            result.append(total)
        return result


@dataclass(frozen=True, eq=False)
class RadialDensity:
    """
    f(|z|)·z^α z̄^β върху диск с радиус R (dimension=1, мярка dA/π),
    или f(|x|) върху кълбо в R² / R³ (dimension=2, 3, мярка на Лебег)

    f is either polynomial coefficients (f(r) = Σ c_j r^j) or a callable
    profile; profile_degree declares the polynomial degree of a callable.
    """

    radius: float
    coefficients: Optional[Tuple[Any, ...]] = None
    profile: Optional[Callable[[np.ndarray], np.ndarray]] = None
    alpha: int = 0
    beta: int = 0
    dimension: int = 1
    profile_degree: Optional[int] = None
    name: str = ''

    def __post_init__(self) -> None:
        if (self.coefficients is None) == (self.profile is None):
            raise ValidationError("give exactly one of coefficients or profile")
        if not (isinstance(self.radius, (int, float, Fraction)) and math.isfinite(self.radius) and self.radius > 0):
            raise ValidationError(f"radius must be positive, got {self.radius!r}")
        if self.dimension not in (1, 2, 3):
            raise ValidationError(f"dimension must be 1 (disk), 2 or 3, got {self.dimension}")
        if self.dimension == 1 and self.radius > 1:
            raise DomainError(f"support radius {self.radius} leaves the unit disk")
        if self.alpha < 0 or self.beta < 0:
            raise ValidationError("angular exponents must be non-negative")
        if self.dimension != 1 and (self.alpha or self.beta):
            raise ValidationError("angular factors are only defined in the complex plane")
        if self.coefficients is not None:
            coeffs = tuple(self.coefficients)
            if not coeffs:
                raise ValidationError("coefficient list is empty")
            object.__setattr__(self, 'coefficients', coeffs)
            object.__setattr__(self, 'profile_degree', len(coeffs) - 1)

    def profile_value(self, r: np.ndarray) -> np.ndarray:
        """f(r), нула извън носителя"""
        r = np.asarray(r, dtype=float)
        if self.coefficients is not None:
            values = np.polynomial.polynomial.polyval(r, [complex(c) for c in self.coefficients])
        else:
            values = np.asarray(self.profile(r))
        values = np.where(r <= self.radius, values, 0.0)
        return values if np.iscomplexobj(values) and np.any(np.imag(values)) else np.real(values)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points)
        if self.dimension == 1:
            z = pts.reshape(-1).astype(complex)
            return self.profile_value(np.abs(z)) * z ** self.alpha * z.conj() ** self.beta
        return self.profile_value(np.linalg.norm(pts.reshape(len(pts), -1), axis=1))


@dataclass(frozen=True, eq=False)
class PolynomialDensity:
    """Точен полином в (z, z̄), носител - дискът |z| ≤ ρ, мярка dA/π"""

    polynomial: ZPolynomial
    radius: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        radius = Fraction(self.radius)
        if not 0 < radius <= 1:
            raise DomainError(f"support radius {radius} must lie in (0, 1]")
        object.__setattr__(self, 'radius', radius)
        if self.polynomial.dimension != 1:
            raise ValidationError("polynomial densities live in C¹")

    @property
    def is_exact(self) -> bool:
        return self.polynomial.is_exact

    def __call__(self, points: np.ndarray) -> np.ndarray:
        z = np.asarray(points).reshape(-1).astype(complex)
        return np.where(np.abs(z) <= float(self.radius), self.polynomial.evaluate_array(z), 0.0)


@dataclass(frozen=True, eq=False)
class GridDensity:
    """
    Стойности върху равномерна правоъгълна мрежа (центрове на клетки)

    plane=True reads a 2-D grid as the complex plane z = x + iy with dA/π.
    """

    values: np.ndarray
    axes: Tuple[np.ndarray, ...]
    plane: bool = False

    def __post_init__(self) -> None:
        axes = tuple(np.asarray(a, dtype=float) for a in self.axes)
        values = np.asarray(self.values)
        if not axes:
            raise ValidationError("grid needs at least one axis")
        if values.shape != tuple(len(a) for a in axes):
            raise ValidationError(f"values shape {values.shape} does not match axes")
        for a in axes:
            if a.ndim != 1 or len(a) < 2:
                raise ValidationError("every axis needs at least two cell centers")
            steps = np.diff(a)
            if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
                raise ValidationError("grid axes must be uniform and increasing")
        if not np.all(np.isfinite(values)):
            raise ValidationError("grid values must be finite")
        if self.plane and len(axes) != 2:
            raise ValidationError("a plane grid needs exactly two axes")
        object.__setattr__(self, 'axes', axes)
        object.__setattr__(self, 'values', values)

    @classmethod
    def sample(
        cls,
        func: Callable[[np.ndarray], np.ndarray],
        axes: Sequence[np.ndarray],
        plane: bool = False,
    ) -> 'GridDensity':
        """Семплира func (аргумент: (N, d) реални точки) в центровете на клетките"""
        shape = tuple(len(a) for a in axes)
        mesh = np.meshgrid(*axes, indexing='ij')
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        return cls(np.asarray(func(pts)).reshape(shape), tuple(axes), plane)

    @property
    def dimension(self) -> int:
        return len(self.axes)

    @property
    def spacing(self) -> Tuple[float, ...]:
        return tuple(float(a[1] - a[0]) for a in self.axes)

    @property
    def resolution(self) -> float:
        return float(np.sqrt(sum(h * h for h in self.spacing)))

    @property
    def cell_measure(self) -> float:
        measure = float(np.prod(self.spacing))
        return measure / math.pi if self.plane else measure

    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes, indexing='ij')
        return np.stack([m.ravel() for m in mesh], axis=1)

    def complex_points(self) -> np.ndarray:
        pts = self.points()
        return pts[:, 0] + 1j * pts[:, 1]


WeightSpec = Union[PointDistribution, RadialDensity, PolynomialDensity, GridDensity]


def weight_kind(F: WeightSpec) -> str:
    if isinstance(F, PointDistribution):
        return 'point'
    if isinstance(F, RadialDensity):
        return 'radial'
    if isinstance(F, PolynomialDensity):
        return 'polynomial'
    if isinstance(F, GridDensity):
        return 'grid'
    raise ValidationError(f"not a weight: {type(F).__name__}")


def support_bound(F: WeightSpec) -> float:
    """sup |x| по носителя (за C^d: максимален модул на координата)"""
    if isinstance(F, PointDistribution):
        locs = F.locations_array()
        if F.real_space:
            return float(np.max(np.linalg.norm(locs, axis=1), initial=0.0))
        return float(np.max(np.abs(locs), initial=0.0))
    if isinstance(F, (RadialDensity, PolynomialDensity)):
        return float(F.radius)
    pts = F.points()
    active = F.values.ravel() != 0
    if not np.any(active):
        return 0.0
    half = 0.5 * F.resolution
    if F.plane:
        return float(np.max(np.abs(F.complex_points()[active]))) + half
    return float(np.max(np.linalg.norm(pts[active], axis=1))) + half


# ---------------------------------------------------------------------------
# Quadrature on disks and balls
# ---------------------------------------------------------------------------

def polar_nodes(radius: float, n_radial: int, n_angular: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Възли и тегла за ∫_{|z|<R} · dA (Лебег): Гаус-Льожандър по r, трапец по θ

    Exact for r^m e^{ijθ} with m ≤ 2·n_radial − 2 (Jacobian r included) and |j| < n_angular.
    """
    if n_angular < 1:
        raise ValidationError("angular node count must be >= 1")
    rule = gauss_legendre(n_radial, (0.0, float(radius)))
    theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
    r, t = np.meshgrid(rule.nodes, theta, indexing='ij')
    w = np.outer(rule.weights * rule.nodes, np.full(n_angular, 2.0 * np.pi / n_angular))
    return (r * np.exp(1j * t)).ravel(), w.ravel()


def ball_nodes(
    radius: float,
    dimension: int,
    n_radial: Optional[int] = None,
    n_angular: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Възли (N, d) и тегла за ∫_{|x|<R} · dx в R² или R³"""
    n_r = n_radial or Config.RADIAL_QUADRATURE_POINTS
    n_a = n_angular or BALL_QUADRATURE_POINTS
    if dimension == 2:
        z, w = polar_nodes(radius, n_r, 2 * n_a)
        return np.stack([z.real, z.imag], axis=1), w
    if dimension != 3:
        raise ValidationError(f"ball quadrature is defined for d = 2, 3, got {dimension}")
    r_rule = gauss_legendre(n_r, (0.0, float(radius)))
    u_rule = gauss_legendre(n_a, (-1.0, 1.0))
    n_phi = 2 * n_a
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    r, u, p = np.meshgrid(r_rule.nodes, u_rule.nodes, phi, indexing='ij')
    s = np.sqrt(1.0 - u * u)
    pts = np.stack([(r * s * np.cos(p)).ravel(), (r * s * np.sin(p)).ravel(), (r * u).ravel()], axis=1)
    w = (
        (r_rule.weights * r_rule.nodes ** 2)[:, None, None]
        * u_rule.weights[None, :, None]
        * np.full(n_phi, 2.0 * np.pi / n_phi)[None, None, :]
    )
    return pts, w.ravel()


def _evaluate_test(phi: TestFunction, points: np.ndarray) -> np.ndarray:
    if isinstance(phi, ZPolynomial):
        return phi.evaluate_array(points)
    try:
        values = np.asarray(phi(points))
    except Exception as e:
        raise DomainError(f"test function is not evaluable on the support: {e}") from e
    if values.shape != (len(points),):
        values = values.reshape(len(points))
    if not np.all(np.isfinite(values)):
        raise DomainError("test function is not finite on the support")
    return values


def polar_sizes(
    angular_degree: Optional[int],
    radial_degree: Optional[int],
    quadrature_points: Optional[int],
) -> Tuple[int, int]:
    """(n_r, n_θ) от декларираните степени + резерв"""
    if quadrature_points is not None:
        if radial_degree is not None and 2 * quadrature_points - 1 < radial_degree:
            raise QuadratureError(
                f"{quadrature_points} radial nodes integrate degree {2 * quadrature_points - 1}, "
                f"integrand has degree {radial_degree}"
            )
        n_r = quadrature_points
    elif radial_degree is not None:
        n_r = (radial_degree + 2) // 2 + QUADRATURE_MARGIN
    else:
        n_r = Config.RADIAL_QUADRATURE_POINTS
    if angular_degree is not None:
        n_theta = angular_degree + 1 + QUADRATURE_MARGIN
    else:
        n_theta = 2 * Config.RADIAL_QUADRATURE_POINTS
    return n_r, n_theta


# ---------------------------------------------------------------------------
# Pairings
# ---------------------------------------------------------------------------

def pair(F: WeightSpec, phi: TestFunction, quadrature_points: Optional[int] = None) -> Any:
    """
    ⟨F, φ⟩

    Args:
        F: Weight
        phi: ZPolynomial or callable on (N, d) points
        quadrature_points: Radial Gauss-Legendre nodes (densities only);
            sized from the declared degrees when omitted

    Returns:
        ExactScalar when F and φ are exact, complex otherwise

    Raises:
        DomainError: φ not evaluable on the support
        QuadratureError: quadrature_points too few for the declared degree
        ValidationError: unsupported weight/test-function combination
    """
    if isinstance(F, PointDistribution):
        return _pair_points(F, phi)
    if isinstance(F, PolynomialDensity):
        if isinstance(phi, ZPolynomial):
            return _pair_polynomial(F, phi)
        n_r, n_theta = polar_sizes(None, None, quadrature_points)
        n_theta += F.polynomial.degree
        z, w = polar_nodes(float(F.radius), n_r, n_theta)
        values = F.polynomial.evaluate_array(z) * _evaluate_test(phi, z[:, None])
        return complex(np.sum(w * values) / np.pi)
    if isinstance(F, RadialDensity):
        return _pair_radial(F, phi, quadrature_points)
    if isinstance(F, GridDensity):
        return _pair_grid(F, phi)
    raise ValidationError(f"not a weight: {type(F).__name__}")


def _pair_points(F: PointDistribution, phi: TestFunction) -> Any:
    if not F.masses:
        return ExactScalar() if isinstance(phi, ZPolynomial) and phi.is_exact else 0j
    if isinstance(phi, ZPolynomial):
        if phi.dimension != F.dimension:
            raise ValidationError(f"test function in C^{phi.dimension}, weight in dimension {F.dimension}")
        total: Any = _zero_like(*(t.coeff for m in F.masses for t in m.terms), *phi.terms.values())
        derivatives: Dict[Tuple[MultiIndex, MultiIndex], ZPolynomial] = {}
        for mass in F.masses:
            for term in mass.terms:
                key = (term.holo, term.antiholo)
                if key not in derivatives:
                    derivatives[key] = phi.derivative(term.holo, term.antiholo)
                total = _add(total, _mul(term.coeff, derivatives[key].evaluate(mass.location)))
        return total
    if not F.is_pure:
        raise ValidationError("derivative terms need a ZPolynomial test function")
    values = _evaluate_test(phi, F.locations_array())
    coeffs = np.array([complex(c) for c in F.mass_coefficients()])
    return complex(np.sum(coeffs * values))


def _pair_polynomial(F: PolynomialDensity, phi: ZPolynomial) -> Any:
    """(1/π)∫_{|z|<ρ} z^m z̄^n dA = δ_{mn}·2ρ^{m+n+2}/(m+n+2)"""
    if phi.dimension != 1:
        raise ValidationError("polynomial densities pair with test functions on C¹")
    product = F.polynomial * phi
    total: Any = _zero_like(*product.terms.values())
    for ((m,), (n,)), c in product.terms.items():
        if m != n:
            continue
        k = m + n
        total = _add(total, _mul(c, Fraction(2) * F.radius ** (k + 2) / (k + 2)))
    return total


def _pair_radial(F: RadialDensity, phi: TestFunction, quadrature_points: Optional[int]) -> complex:
    if F.dimension == 1:
        if isinstance(phi, ZPolynomial):
            if phi.dimension != 1:
                raise ValidationError("radial densities on the disk pair with test functions on C¹")
            angular = phi.degree + F.alpha + F.beta
            radial = None if F.profile_degree is None else F.profile_degree + angular + 1
        else:
            angular, radial = None, None
        n_r, n_theta = polar_sizes(angular, radial, quadrature_points)
        z, w = polar_nodes(F.radius, n_r, n_theta)
        values = F(z) * _evaluate_test(phi, z[:, None])
        return complex(np.sum(w * values) / np.pi)
    if isinstance(phi, ZPolynomial):
        raise ValidationError("radial densities in R^d pair with callable test functions")
    pts, w = ball_nodes(F.radius, F.dimension, quadrature_points)
    return complex(np.sum(w * F(pts) * _evaluate_test(phi, pts)))


def _pair_grid(F: GridDensity, phi: TestFunction) -> complex:
    pts = F.complex_points()[:, None] if F.plane else F.points()
    values = _evaluate_test(phi, pts)
    return complex(np.sum(F.values.ravel() * values) * F.cell_measure)


def moment(F: WeightSpec, alpha: Any, beta: Any) -> Any:
    """a_{αβ} = ⟨F, z^α z̄^β⟩"""
    a = MultiIndex.coerce(alpha)
    b = MultiIndex.coerce(beta)
    return pair(F, ZPolynomial.monomial(a, b, 1))


def radial_moment(f: RadialDensity, l: int, quadrature_points: Optional[int] = None) -> Any:
    """
    f̂(l) = ∫₀^R f(r) r^l dr

    Closed form for polynomial coefficients, an ExactScalar when the radius and
    every coefficient are exact; Gauss-Legendre otherwise.

    Raises:
        QuadratureError: declared profile degree + l exceeds the rule's capacity
    """
    if l < 0:
        raise ValidationError(f"moment order must be >= 0, got {l}")
    R = f.radius
    if f.coefficients is not None:
        if is_exact(R) and all(is_exact(c) for c in f.coefficients):
            terms = (ExactScalar.coerce(c) * Fraction(R) ** (j + l + 1) / (j + l + 1)
                     for j, c in enumerate(f.coefficients))
            return sum(terms, ExactScalar())
        total = sum(complex(c) * R ** (j + l + 1) / (j + l + 1) for j, c in enumerate(f.coefficients))
        return total.real if total.imag == 0 else total
    n = quadrature_points or Config.RADIAL_QUADRATURE_POINTS
    if f.profile_degree is not None and 2 * n - 1 < f.profile_degree + l:
        raise QuadratureError(
            f"{n} nodes integrate degree {2 * n - 1}, profile·r^{l} has degree {f.profile_degree + l}"
        )
    rule = gauss_legendre(n, (0.0, float(R)))
    return rule.integrate(lambda r: f.profile_value(r) * r ** l)


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def cauchy_transform(F: WeightSpec, z: complex) -> complex:
    """
    G(z) = ⟨F_w, 1/(π(z−w))⟩ за тегло в C¹

    Raises:
        DomainError: z inside the support or within one grid cell of it
    """
    z = complex(z)
    if isinstance(F, PointDistribution):
        if F.real_space or F.dimension != 1:
            raise ValidationError("the Cauchy transform needs a weight on C¹")
        total = 0j
        for mass in F.masses:
            w = complex(mass.location[0])
            if abs(z - w) <= Config.POINT_MERGE_TOL:
                raise DomainError(f"z = {z} coincides with a support point")
            for term in mass.terms:
                if term.antiholo.order:
                    continue
                a = term.holo.order
                total += complex(term.coeff) * math.factorial(a) / (np.pi * (z - w) ** (a + 1))
        return total
    if isinstance(F, (RadialDensity, PolynomialDensity)):
        if isinstance(F, RadialDensity) and F.dimension != 1:
            raise ValidationError("the Cauchy transform needs a weight on C¹")
        if abs(z) <= float(F.radius):
            raise DomainError(f"z = {z} lies inside the support |w| <= {F.radius}")
        # Only finitely many moments ⟨F, w^k⟩ are nonzero for rotation-covariant densities.
        if isinstance(F, RadialDensity):
            top = F.beta - F.alpha
        else:
            top = max((n - m for (m,), (n,) in F.polynomial.terms), default=-1)
        return cauchy_tail(F, z, max(top, -1) + 1)
    if isinstance(F, GridDensity):
        if not F.plane:
            raise ValidationError("the Cauchy transform needs a plane grid")
        w = F.complex_points()
        vals = F.values.ravel()
        active = vals != 0
        if np.any(active) and np.min(np.abs(z - w[active])) < F.resolution:
            raise DomainError(f"z = {z} is within one grid cell of the support")
        return complex(np.sum(vals[active] / (np.pi * (z - w[active]))) * F.cell_measure)
    raise ValidationError(f"not a weight: {type(F).__name__}")


def cauchy_tail(F: WeightSpec, z: complex, terms: int) -> complex:
    """π⁻¹ Σ_{k<terms} z^{−k−1}⟨F, w^k⟩ (сходи за |z| > sup|supp F|)"""
    z = complex(z)
    if z == 0:
        raise DomainError("the tail expansion is centred at infinity; z must be nonzero")
    total = 0j
    for k in range(terms):
        total += complex(moment(F, (k,), (0,))) / z ** (k + 1)
    return total / np.pi


def fourier_transform(F: WeightSpec, xi: Sequence[float]) -> complex:
    """
    (F̂)(ξ) = ∫ e^{−i x·ξ} dF(x) за тегла в R^d

    Radial densities use the 1-D Hankel form: 4π∫ f r² sinc(|ξ|r) dr in R³,
    2π∫ f r J₀(|ξ|r) dr in R².
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if isinstance(F, PointDistribution):
        if not F.real_space:
            raise ValidationError("the Fourier transform is taken over real space")
        if not F.is_pure:
            raise ValidationError("derivative terms are only supported over C^d")
        if not F.masses:
            return 0j
        locs = F.locations_array()
        if locs.shape[1] != len(xi):
            raise ValidationError(f"frequency of dimension {len(xi)} for a weight in R^{locs.shape[1]}")
        coeffs = np.array([complex(c) for c in F.mass_coefficients()])
        return complex(np.sum(coeffs * np.exp(-1j * (locs @ xi))))
    if isinstance(F, GridDensity):
        if F.plane:
            raise ValidationError("plane grids are complex-space weights")
        if F.dimension != len(xi):
            raise ValidationError(f"frequency of dimension {len(xi)} for a weight in R^{F.dimension}")
        return complex(np.sum(F.values.ravel() * np.exp(-1j * (F.points() @ xi))) * F.cell_measure)
    if isinstance(F, RadialDensity):
        if F.dimension == 1:
            raise ValidationError("the Fourier transform is taken over real space")
        if len(xi) != F.dimension:
            raise ValidationError(f"frequency of dimension {len(xi)} for a weight in R^{F.dimension}")
        q = float(np.linalg.norm(xi))
        rule = gauss_legendre(Config.RADIAL_QUADRATURE_POINTS, (0.0, float(F.radius)))
        r = rule.nodes
        if F.dimension == 3:
            kernel = 4.0 * np.pi * r ** 2 * np.sinc(q * r / np.pi)
        else:
            kernel = 2.0 * np.pi * r * j0(q * r)
        return complex(np.dot(rule.weights, F.profile_value(r) * kernel))
    raise ValidationError(f"{weight_kind(F)} weights have no real-space Fourier transform")


def project_measure(mu: WeightSpec, zeta: Sequence[float]) -> PointDistribution:
    """
    Проекция μ_ζ: ⟨μ_ζ, φ⟩ = ⟨μ, φ(x·ζ)⟩

    Point masses land at x_q·ζ; coefficients of coinciding projections
    (within POINT_MERGE_TOL) are added and exact zeros dropped. Grid cells
    project as point masses at their centres.
    """
    zeta = np.asarray(zeta, dtype=float)
    if abs(np.linalg.norm(zeta) - 1.0) > UNIT_NORM_TOL:
        raise ValidationError(f"ζ must be a unit vector, |ζ| = {np.linalg.norm(zeta)}")
    if isinstance(mu, PointDistribution):
        if not mu.real_space:
            raise ValidationError("projection is defined for measures in R^d")
        if not mu.is_pure:
            raise ValidationError("derivative terms cannot be projected")
        if not mu.masses:
            return PointDistribution((), real_space=True, ambient_dimension=1)
        if mu.dimension != len(zeta):
            raise ValidationError(f"ζ of dimension {len(zeta)} for a measure in R^{mu.dimension}")
        ts = mu.locations_array() @ zeta
        coeffs = mu.mass_coefficients()
    elif isinstance(mu, GridDensity):
        if mu.plane:
            raise ValidationError("projection is defined for measures in R^d")
        if mu.dimension != len(zeta):
            raise ValidationError(f"ζ of dimension {len(zeta)} for a measure in R^{mu.dimension}")
        vals = mu.values.ravel()
        active = vals != 0
        ts = mu.points()[active] @ zeta
        coeffs = [complex(v) * mu.cell_measure for v in vals[active]]
    else:
        raise ValidationError("projection takes a point distribution or a grid density")

    order = np.argsort(ts, kind='stable')
    merged: List[Tuple[float, Any]] = []
    for idx in order:
        t, c = float(ts[idx]), coeffs[idx]
        if merged and abs(t - merged[-1][0]) <= Config.POINT_MERGE_TOL:
            merged[-1] = (merged[-1][0], _add(merged[-1][1], c))
        else:
            merged.append((t, c))
    kept = [(t, c) for t, c in merged if not _is_zero(c)]
    logger.debug(f"🔍 Projected {len(coeffs)} atoms onto {len(kept)} points")
    return PointDistribution(
        tuple(PointMass((t,), (PointTerm(c, MultiIndex.zero(1), MultiIndex.zero(1)),)) for t, c in kept),
        real_space=True,
        ambient_dimension=1,
    )


# ---------------------------------------------------------------------------
# Algebra on weights
# ---------------------------------------------------------------------------

def conjugate_weight(F: WeightSpec) -> WeightSpec:
    """conj(F): ⟨conj F, φ⟩ = conj⟨F, φ̄⟩"""
    if isinstance(F, PointDistribution):
        masses = tuple(
            PointMass(m.location, tuple(PointTerm(_conj(t.coeff), t.antiholo, t.holo) for t in m.terms))
            for m in F.masses
        )
        return PointDistribution(masses, F.real_space, F.ambient_dimension)
    if isinstance(F, RadialDensity):
        if F.coefficients is not None:
            return RadialDensity(
                F.radius, tuple(_conj(c) for c in F.coefficients), None, F.beta, F.alpha,
                F.dimension, name=F.name,
            )
        profile = F.profile
        return RadialDensity(
            F.radius, None, lambda r: np.conj(profile(r)), F.beta, F.alpha,
            F.dimension, F.profile_degree, F.name,
        )
    if isinstance(F, PolynomialDensity):
        return PolynomialDensity(F.polynomial.conjugate(), F.radius)
    if isinstance(F, GridDensity):
        return GridDensity(np.conj(F.values), F.axes, F.plane)
    raise ValidationError(f"not a weight: {type(F).__name__}")


def combine_weights(parts: Sequence[Tuple[Any, WeightSpec]]) -> WeightSpec:
    """
    Линейна комбинация Σ a_i F_i от тегла от един и същ вид

    Raises:
        ValidationError: mixed kinds, radii or grids
    """
    if not parts:
        raise ValidationError("nothing to combine")
    kinds = {weight_kind(F) for _, F in parts}
    if len(kinds) != 1:
        raise ValidationError(f"cannot combine weights of kinds {sorted(kinds)}")
    first = parts[0][1]
    if isinstance(first, PointDistribution):
        if len({F.real_space for _, F in parts}) != 1:
            raise ValidationError("cannot combine real-space and complex-space distributions")
        by_location: Dict[Tuple[complex, ...], Tuple[Tuple[Any, ...], List[PointTerm]]] = {}
        for a, F in parts:
            for m in F.masses:
                key = _location_key(m.location)
                entry = by_location.setdefault(key, (m.location, []))
                entry[1].extend(PointTerm(_mul(a, t.coeff), t.holo, t.antiholo) for t in m.terms)
        masses = tuple(PointMass(loc, tuple(terms)) for loc, terms in by_location.values())
        return PointDistribution(masses, first.real_space, first.ambient_dimension)
    if isinstance(first, PolynomialDensity):
        if len({F.radius for _, F in parts}) != 1:
            raise ValidationError("polynomial densities must share the support radius")
        total = ZPolynomial({}, 1)
        for a, F in parts:
            total = total + F.polynomial * a
        return PolynomialDensity(total, first.radius)
    if isinstance(first, GridDensity):
        for _, F in parts:
            if F.plane != first.plane or len(F.axes) != len(first.axes) or not all(
                np.array_equal(x, y) for x, y in zip(F.axes, first.axes)
            ):
                raise ValidationError("grid densities must share their axes")
        values = sum(complex(a) * F.values for a, F in parts)
        return GridDensity(values, first.axes, first.plane)
    if isinstance(first, RadialDensity):
        shared = {(F.radius, F.alpha, F.beta, F.dimension) for _, F in parts}
        if len(shared) != 1 or any(F.coefficients is None for _, F in parts):
            raise ValidationError("radial densities combine only with matching support and polynomial profiles")
        length = max(len(F.coefficients) for _, F in parts)
        coeffs: List[Any] = [0] * length
        for a, F in parts:
            for j, c in enumerate(F.coefficients):
                coeffs[j] = _add(coeffs[j], _mul(a, c))
        return RadialDensity(first.radius, tuple(coeffs), None, first.alpha, first.beta, first.dimension)
    raise ValidationError(f"not a weight: {type(first).__name__}")


# ---------------------------------------------------------------------------
# Named radial profiles and (de)serialization
# ---------------------------------------------------------------------------

def named_profile(name: str, radius: float = 1.0) -> Tuple[float, ...]:
    """
    Полиномиални профили върху [0, R] в променливата s = r/R:
        indicator  1
        bump       1 − 4(s − 1/2)² = 4s − 4s²
        c2-bump    (1 − s²)³
        r2         s²
    """
    R = float(radius)
    table = {
        'indicator': (1.0,),
        'bump': (0.0, 4.0 / R, -4.0 / R ** 2),
        'c2-bump': (1.0, 0.0, -3.0 / R ** 2, 0.0, 3.0 / R ** 4, 0.0, -1.0 / R ** 6),
        'r2': (0.0, 0.0, 1.0 / R ** 2),
    }
    if name not in table:
        raise ValidationError(f"unknown radial profile {name!r}; known: {sorted(table)}")
    return table[name]


def _parse_scalar(value: Any, where: str) -> Any:
    if isinstance(value, bool):
        raise ValidationError(f"{where}: booleans are not numbers")
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, str):
        return parse_exact(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    raise ValidationError(f"{where}: cannot read {value!r} as a number")


def _dump_scalar(value: Any) -> Any:
    if isinstance(value, ExactScalar):
        if value.im == 0:
            return str(value.re)
        return f"{value.re},{value.im}"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    c = complex(value)
    return c.real if c.imag == 0 else [c.real, c.imag]


def _read_axes(specs: Any) -> Tuple[np.ndarray, ...]:
    if not isinstance(specs, list) or not specs:
        raise ValidationError("grid.axes must be a non-empty list")
    axes = []
    for spec in specs:
        try:
            start, stop, count = float(spec['start']), float(spec['stop']), int(spec['count'])
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"grid axis needs start, stop and count: {spec!r}") from e
        axes.append(np.linspace(start, stop, count))
    return tuple(axes)


def weight_from_dict(data: Dict[str, Any], base_dir: Optional[str] = None) -> WeightSpec:
    """
    Построява тегло от конфигурационен речник (виж CONFIG_REFERENCE.md)

    Raises:
        ValidationError: unknown kind or malformed fields
    """
    kind = data.get('kind')
    if kind not in WEIGHT_KINDS:
        raise ValidationError(f"weight.kind must be one of {sorted(WEIGHT_KINDS)}, got {kind!r}")

    if kind == 'point':
        real_space = data.get('space', 'complex') == 'real'
        masses = []
        for i, item in enumerate(data.get('masses', [])):
            location = item.get('location')
            if not isinstance(location, list) or not location:
                raise ValidationError(f"weight.masses[{i}].location must be a list of coordinates")
            loc = tuple(_parse_scalar(c, f"weight.masses[{i}].location") for c in location)
            if real_space:
                loc = tuple(c.re if isinstance(c, ExactScalar) else c for c in loc)
            zero = [0] * len(loc)
            raw_terms = item.get('terms') or [{'coeff': item.get('coeff', 1)}]
            terms = tuple(
                PointTerm(
                    _parse_scalar(t.get('coeff', 1), f"weight.masses[{i}].coeff"),
                    MultiIndex.coerce(t.get('holo', zero)),
                    MultiIndex.coerce(t.get('antiholo', zero)),
                )
                for t in raw_terms
            )
            masses.append(PointMass(loc, terms))
        return PointDistribution(tuple(masses), real_space=real_space)

    if kind == 'radial':
        radius = float(data.get('radius', 1.0))
        if 'coefficients' in data:
            coeffs = tuple(_parse_scalar(c, 'weight.coefficients') for c in data['coefficients'])
            name = data.get('name', '')
        else:
            name = data.get('profile', 'indicator')
            coeffs = named_profile(name, radius)
        return RadialDensity(
            radius=radius,
            coefficients=coeffs,
            alpha=int(data.get('alpha', 0)),
            beta=int(data.get('beta', 0)),
            dimension=int(data.get('dimension', 1)),
            name=name,
        )

    if kind == 'polynomial':
        triples = [
            (int(t.get('holo', 0)), int(t.get('antiholo', 0)), _parse_scalar(t.get('coeff', 1), 'weight.terms'))
            for t in data.get('terms', [])
        ]
        return PolynomialDensity(ZPolynomial.from_terms(triples), Fraction(str(data.get('radius', '1'))))

    axes = _read_axes(data.get('axes'))
    plane = bool(data.get('plane', False))
    if 'values_file' in data:
        path = Path(data['values_file'])
        if base_dir and not path.is_absolute():
            path = Path(base_dir) / path
        if path.suffix == '.npy':
            values = np.load(path)
        else:
            values = np.loadtxt(path, delimiter=',', dtype=complex)
        return GridDensity(np.asarray(values).reshape(tuple(len(a) for a in axes)), axes, plane)
    shape = tuple(len(a) for a in axes)
    if 'values' in data:
        values = np.asarray(data['values'], dtype=float)
        if 'values_imag' in data:
            values = values + 1j * np.asarray(data['values_imag'], dtype=float)
        if values.size != int(np.prod(shape)):
            raise ValidationError(f"grid.values has {values.size} entries, axes need {int(np.prod(shape))}")
        return GridDensity(values.reshape(shape), axes, plane)
    if 'profile' in data:
        spec = data['profile']
        radial = RadialDensity(
            float(spec.get('radius', 1.0)),
            named_profile(spec.get('name', 'indicator'), float(spec.get('radius', 1.0))),
            dimension=3 if len(axes) == 3 else 2,
        )
        return GridDensity.sample(lambda pts: radial.profile_value(np.linalg.norm(pts, axis=1)), axes, plane)
    raise ValidationError("grid weights need values, values_file or profile")


def weight_to_dict(F: WeightSpec) -> Dict[str, Any]:
    """Обратното на weight_from_dict (callable профили се записват по име)"""
    if isinstance(F, PointDistribution):
        return {
            'kind': 'point',
            'space': 'real' if F.real_space else 'complex',
            'masses': [
                {
                    'location': [_dump_scalar(c) for c in m.location],
                    'terms': [
                        {
                            'coeff': _dump_scalar(t.coeff),
                            'holo': list(t.holo.components),
                            'antiholo': list(t.antiholo.components),
                        }
                        for t in m.terms
                    ],
                }
                for m in F.masses
            ],
        }
    if isinstance(F, RadialDensity):
        data: Dict[str, Any] = {
            'kind': 'radial',
            'radius': float(F.radius),
            'alpha': F.alpha,
            'beta': F.beta,
            'dimension': F.dimension,
        }
        if F.coefficients is not None:
            data['coefficients'] = [_dump_scalar(c) for c in F.coefficients]
        else:
            data['profile'] = F.name
        return data
    if isinstance(F, PolynomialDensity):
        return {
            'kind': 'polynomial',
            'radius': str(F.radius),
            'terms': [
                {'holo': a[0], 'antiholo': b[0], 'coeff': _dump_scalar(c)}
                for (a, b), c in sorted(F.polynomial.terms.items())
            ],
        }
    if isinstance(F, GridDensity):
        data = {
            'kind': 'grid',
            'plane': F.plane,
            'axes': [{'start': float(a[0]), 'stop': float(a[-1]), 'count': len(a)} for a in F.axes],
            'values': np.real(F.values).tolist(),
        }
        if np.iscomplexobj(F.values) and np.any(np.imag(F.values)):
            data['values_imag'] = np.imag(F.values).tolist()
        return data
    raise ValidationError(f"not a weight: {type(F).__name__}")
