"""
🧲 Physics applications - Landau levels, Helmholtz matrices, Born kernels

Landau level functions are kept in closed form p(z, z̄)·e^{−B|z|²/4}: the
creation operator acts on the polynomial factor, Gram-Schmidt runs in exact
Gaussian-rational arithmetic and the result is checked on a uniform grid,
against the grid creation operator as well. For radial profiles the level
spectrum is also available to 50 digits.
Grid functions (GridFunction) carry the numerical side: spectral or
finite-difference derivatives, inner products with dA/π, interpolation.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy.interpolate import RegularGridInterpolator

from bases import HarmonicBasis, LandauLevel
from config import Config
from constants import (
    DQ_SMOOTHNESS_TOL,
    HELMHOLTZ_FREQUENCY,
    LANDAU_CONVENTIONS,
    LANDAU_GRAM_TOL,
    LANDAU_GRID_POINTS,
    LANDAU_RANK_TOL,
    LANDAU_SPECTRAL_TAIL_TOL,
    LANDAU_SPECTRUM_DIGITS,
    LANDAU_TAIL_TOL,
    SPHERE_SAMPLING_METHODS,
    UNIT_NORM_TOL,
)
from exceptions import BasisBreakdownError, DomainError, GridResolutionError, ValidationError
from numeric_core import ExactScalar, MultiIndex, SpectrumReport, gauss_legendre, spectrum_report
from toeplitz import ToeplitzMatrix, assemble
from weights import (
    GridDensity,
    PointDistribution,
    RadialDensity,
    WeightSpec,
    ZPolynomial,
    ball_nodes,
    fourier_transform,
    support_bound,
    weight_kind,
)

logger = logging.getLogger(__name__)

_HOLO = MultiIndex.of(1)
_NONE = MultiIndex.of(0)


# ---------------------------------------------------------------------------
# Landau configuration and grid functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LandauConfig:
    """
    Параметри на ниво на Ландау

    Attributes:
        B: Field strength (> 0)
        q: Level index (>= 0)
        n: Truncation, number of basis functions
        convention: Creation operator form (holomorphic, antiholomorphic, as-printed)
        grid_points: Points per axis of the representation grid
        half_width: Grid half width L; chosen from the Gaussian tail when None
        derivative: 'spectral' (FFT) or 'finite-difference'
    """

    B: float = 2.0
    q: int = 0
    n: int = 8
    convention: str = 'holomorphic'
    grid_points: int = LANDAU_GRID_POINTS
    half_width: Optional[float] = None
    derivative: str = 'spectral'

    def __post_init__(self) -> None:
        if not (math.isfinite(self.B) and self.B > 0):
            raise ValidationError(f"field strength B must be positive, got {self.B}")
        if self.q < 0:
            raise ValidationError(f"level index q must be >= 0, got {self.q}")
        if self.n < 1:
            raise ValidationError(f"truncation n must be >= 1, got {self.n}")
        if self.convention not in LANDAU_CONVENTIONS:
            raise ValidationError(f"unknown convention {self.convention!r}; known: {sorted(LANDAU_CONVENTIONS)}")
        if self.grid_points < 8:
            raise ValidationError("grid needs at least 8 points per axis")
        if self.derivative not in ('spectral', 'finite-difference'):
            raise ValidationError(f"unknown derivative scheme {self.derivative!r}")
        if self.half_width is not None and self.half_width <= 0:
            raise ValidationError("grid half width must be positive")

    @property
    def level_energy(self) -> float:
        """Λ_q = (2q+1)B"""
        return (2 * self.q + 1) * self.B

    @property
    def grid_half_width(self) -> float:
        if self.half_width is not None:
            return float(self.half_width)
        return _auto_half_width(self.B, self.n - 1 + self.q)

    @property
    def axis(self) -> np.ndarray:
        """Периодична мрежа x_k = −L + k·h, h = 2L/N"""
        L = self.grid_half_width
        h = 2.0 * L / self.grid_points
        return -L + h * np.arange(self.grid_points)


def _auto_half_width(B: float, m: int) -> float:
    """Най-малкото L (стъпка 1/4), след което r^{2m}e^{−Br²/2}/‖·‖² < LANDAU_TAIL_TOL"""
    log_norm = math.lgamma(m + 1) + (m + 1) * math.log(2.0 / B)
    L = max(1.0, math.ceil(4.0 * math.sqrt(2.0 * m / B)) / 4.0)
    while 2 * m * math.log(L) - 0.5 * B * L * L - log_norm >= math.log(LANDAU_TAIL_TOL):
        L += 0.25
    return L


@dataclass(eq=False)
class GridFunction:
    """Стойности върху квадратна мрежа axis × axis (индексиране 'ij': [x, y])"""

    values: np.ndarray
    axis: np.ndarray

    def __post_init__(self) -> None:
        self.axis = np.asarray(self.axis, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (len(self.axis), len(self.axis)):
            raise ValidationError(f"values of shape {self.values.shape} do not match the axis")

    @classmethod
    def from_callable(cls, func: Callable[[np.ndarray], np.ndarray], axis: np.ndarray) -> 'GridFunction':
        X, Y = np.meshgrid(axis, axis, indexing='ij')
        return cls(np.asarray(func(X + 1j * Y)).reshape(X.shape), axis)

    @property
    def spacing(self) -> float:
        return float(self.axis[1] - self.axis[0])

    def points(self) -> np.ndarray:
        X, Y = np.meshgrid(self.axis, self.axis, indexing='ij')
        return X + 1j * Y

    def _check_grid(self, other: 'GridFunction') -> None:
        if self.axis.shape != other.axis.shape or not np.allclose(self.axis, other.axis, rtol=0, atol=1e-12):
            raise ValidationError("grid functions live on different grids")

    def inner(self, other: 'GridFunction') -> complex:
        """⟨u, v⟩ = Σ u v̄ h²/π"""
        self._check_grid(other)
        return complex(np.sum(self.values * other.values.conj()) * self.spacing ** 2 / math.pi)

    def norm(self) -> float:
        return math.sqrt(max(self.inner(self).real, 0.0))

    def at(self, z: Any) -> np.ndarray:
        """Линейна интерполация в точки z (комплексни)"""
        pts = np.atleast_1d(np.asarray(z, dtype=complex))
        xy = np.stack([pts.real, pts.imag], axis=-1)
        re = RegularGridInterpolator((self.axis, self.axis), self.values.real, bounds_error=False, fill_value=0.0)
        im = RegularGridInterpolator((self.axis, self.axis), self.values.imag, bounds_error=False, fill_value=0.0)
        return re(xy) + 1j * im(xy)

    def __add__(self, other: 'GridFunction') -> 'GridFunction':
        self._check_grid(other)
        return GridFunction(self.values + other.values, self.axis)

    def __sub__(self, other: 'GridFunction') -> 'GridFunction':
        self._check_grid(other)
        return GridFunction(self.values - other.values, self.axis)

    def __mul__(self, scalar: complex) -> 'GridFunction':
        return GridFunction(self.values * scalar, self.axis)

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# Creation operator
# ---------------------------------------------------------------------------

def _check_resolved(u: GridFunction) -> None:
    peak = float(np.max(np.abs(u.values), initial=0.0))
    if peak == 0.0:
        return
    v = u.values
    border = max(
        float(np.max(np.abs(v[0, :]))),
        float(np.max(np.abs(v[-1, :]))),
        float(np.max(np.abs(v[:, 0]))),
        float(np.max(np.abs(v[:, -1]))),
    )
    if border > LANDAU_SPECTRAL_TAIL_TOL * peak:
        raise GridResolutionError(f"function does not decay at the grid boundary ({border / peak:.2e})")
    power = np.abs(np.fft.fft2(v)) ** 2
    k = np.abs(np.fft.fftfreq(len(u.axis)))
    high = np.maximum.outer(k, k) > 1.0 / 3.0
    tail = math.sqrt(float(np.sum(power[high]) / np.sum(power)))
    if tail > LANDAU_SPECTRAL_TAIL_TOL:
        raise GridResolutionError(f"spectral tail {tail:.2e} above {LANDAU_SPECTRAL_TAIL_TOL:.0e}; refine the grid")


def _derivatives(u: GridFunction, scheme: str) -> Tuple[np.ndarray, np.ndarray]:
    h = u.spacing
    if scheme == 'spectral':
        k = 2.0 * np.pi * np.fft.fftfreq(len(u.axis), d=h)
        U = np.fft.fft2(u.values)
        dx = np.fft.ifft2(1j * k[:, None] * U)
        dy = np.fft.ifft2(1j * k[None, :] * U)
        return dx, dy
    return (
        np.gradient(u.values, h, axis=0, edge_order=2),
        np.gradient(u.values, h, axis=1, edge_order=2),
    )


def creation_apply(u: GridFunction, cfg: LandauConfig) -> GridFunction:
    """
    Q̄u върху мрежата, с 2∂_z = ∂_x − i∂_y

        holomorphic      (2∂_z u − (B/2) z̄ u) / 2i
        antiholomorphic  (2∂_z̄ u − (B/2) z u) / 2i
        as-printed       (2∂_z u − i(B/2) z u) / 2i

    Raises:
        GridResolutionError: u not resolved by the grid (spectral scheme only)
    """
    if cfg.derivative == 'spectral':
        _check_resolved(u)
    dx, dy = _derivatives(u, cfg.derivative)
    z = u.points()
    half_b = 0.5 * cfg.B
    if cfg.convention == 'holomorphic':
        result = (dx - 1j * dy) - half_b * z.conj() * u.values
    elif cfg.convention == 'antiholomorphic':
        result = (dx + 1j * dy) - half_b * z * u.values
    else:
        result = (dx - 1j * dy) - 1j * half_b * z * u.values
    return GridFunction(result / 2j, u.axis)


def ground_state(cfg: LandauConfig) -> GridFunction:
    """e^{−B|z|²/4} върху мрежата на cfg"""
    return GridFunction.from_callable(lambda z: np.exp(-0.25 * cfg.B * np.abs(z) ** 2), cfg.axis)


def _exact_field(B: float) -> Fraction:
    return Fraction(str(B)) if isinstance(B, float) else Fraction(B)


def _creation_polynomial(p: ZPolynomial, B: Fraction, convention: str) -> ZPolynomial:
    """Действие на Q̄ върху полиномния множител p на p·e^{−B|z|²/4}"""
    factor = ExactScalar(Fraction(0), Fraction(-1, 2))
    if convention == 'holomorphic':
        image = p.derivative(_HOLO, _NONE) * 2 - ZPolynomial.monomial(0, 1, B) * p
    elif convention == 'antiholomorphic':
        image = p.derivative(_NONE, _HOLO) * 2 - ZPolynomial.monomial(1, 0, B) * p
    else:
        image = (
            p.derivative(_HOLO, _NONE) * 2
            - ZPolynomial.monomial(0, 1, B / 2) * p
            - ZPolynomial.monomial(1, 0, ExactScalar(Fraction(0), B / 2)) * p
        )
    return image * factor


def _gaussian_inner(p: ZPolynomial, r: ZPolynomial, B: Fraction) -> ExactScalar:
    """∫ p·r̄·e^{−B|z|²/2} dA/π, по мономи: δ_{a+d, b+c}·m!(2/B)^{m+1}"""
    total = ExactScalar()
    for ((a,), (b,)), c1 in p.terms.items():
        for ((c,), (d,)), c2 in r.terms.items():
            if a + d != b + c:
                continue
            m = a + d
            total = total + ExactScalar.coerce(c1) * ExactScalar.coerce(c2).conjugate() * (
                math.factorial(m) * (2 / B) ** (m + 1)
            )
    return total


@dataclass(eq=False)
class LandauBasis:
    """x_s = p_s(z, z̄)·e^{−B|z|²/4}/‖p_s‖, s < n"""

    config: LandauConfig
    polynomials: List[ZPolynomial]
    norms2: List[Fraction]
    grid_gram_deviation: float = 0.0

    @property
    def size(self) -> int:
        return len(self.polynomials)

    def evaluate(self, s: int, z: Any) -> np.ndarray:
        pts = np.asarray(z, dtype=complex)
        shape = pts.shape
        flat = pts.reshape(-1)
        gaussian = np.exp(-0.25 * self.config.B * np.abs(flat) ** 2)
        values = self.polynomials[s].evaluate_array(flat) * gaussian / math.sqrt(self.norms2[s])
        return values.reshape(shape)

    def grid_function(self, s: int, axis: Optional[np.ndarray] = None) -> GridFunction:
        axis = self.config.axis if axis is None else axis
        return GridFunction.from_callable(lambda z: self.evaluate(s, z), axis)

    def gram_on_grid(self, axis: Optional[np.ndarray] = None) -> np.ndarray:
        funcs = [self.grid_function(s, axis) for s in range(self.size)]
        return np.array([[funcs[j].inner(funcs[k]) for k in range(self.size)] for j in range(self.size)])


@lru_cache(maxsize=32)
def landau_basis(cfg: LandauConfig) -> LandauBasis:
    """
    Ортонормирана фамилия Q̄^q{z^s e^{−B|z|²/4}}, s < n

    The antiholomorphic convention seeds with z̄^s instead of z^s.

    Raises:
        BasisBreakdownError: exact Gram-Schmidt hits a zero vector, or the grid
            Gram matrix deviates from the identity by more than 1e-8
    """
    B = _exact_field(cfg.B)
    seeds = []
    for s in range(cfg.n):
        p = ZPolynomial.monomial(0, s) if cfg.convention == 'antiholomorphic' else ZPolynomial.monomial(s, 0)
        for _ in range(cfg.q):
            p = _creation_polynomial(p, B, cfg.convention)
        seeds.append(p)

    done: List[ZPolynomial] = []
    norms2: List[Fraction] = []
    for s, w in enumerate(seeds):
        v = w
        for u, nu in zip(done, norms2):
            c = _gaussian_inner(v, u, B) / nu
            if not c.is_zero():
                v = v - u * c
        nv = _gaussian_inner(v, v, B).re
        if nv == 0:
            raise BasisBreakdownError(f"Gram-Schmidt breakdown at s = {s} (level {cfg.q})")
        done.append(v)
        norms2.append(nv)

    basis = LandauBasis(cfg, done, norms2)
    deviation = float(np.max(np.abs(basis.gram_on_grid() - np.eye(cfg.n))))
    basis.grid_gram_deviation = deviation
    if deviation > LANDAU_GRAM_TOL:
        logger.error(f"❌ Landau basis Gram deviation {deviation:.2e} on a {cfg.grid_points}² grid")
        raise BasisBreakdownError(f"grid Gram matrix deviates from identity by {deviation:.2e}")
    logger.debug(f"🔍 Landau basis q={cfg.q}, n={cfg.n}, grid Gram deviation {deviation:.1e}")
    return basis


def common_axis(*configs: LandauConfig) -> np.ndarray:
    L = max(c.grid_half_width for c in configs)
    N = max(c.grid_points for c in configs)
    return -L + (2.0 * L / N) * np.arange(N)


def cross_level_gram(cfg: LandauConfig, q_other: int) -> np.ndarray:
    """⟨x_s^{(q)}, x_t^{(q')}⟩ върху обща мрежа"""
    other = replace(cfg, q=q_other)
    axis = common_axis(cfg, other)
    left = [landau_basis(cfg).grid_function(s, axis) for s in range(cfg.n)]
    right = [landau_basis(other).grid_function(t, axis) for t in range(other.n)]
    return np.array([[f.inner(g) for g in right] for f in left])


def grid_creation_residual(cfg: LandauConfig) -> float:
    """
    Колко се отклонява Q̄^q x_s^{(0)} (операторът върху мрежата) от обвивката
    на точната фамилия на ниво q; най-лошото относително остатъчно над s < n

    Raises:
        GridResolutionError: an iterate is not resolved by the grid
    """
    if cfg.q == 0:
        return 0.0
    axis = cfg.axis
    lowest = landau_basis(replace(cfg, q=0, half_width=cfg.grid_half_width))
    family = [landau_basis(cfg).grid_function(t, axis) for t in range(cfg.n)]
    worst = 0.0
    for s in range(cfg.n):
        u = lowest.grid_function(s, axis)
        for _ in range(cfg.q):
            u = creation_apply(u, cfg)
        rest = u
        for x in family:
            rest = rest - x * u.inner(x)
        worst = max(worst, rest.norm() / u.norm())
    logger.debug(f"🔍 Grid creation vs exact family, q={cfg.q}, n={cfg.n}: residual {worst:.1e}")
    return worst


def _real_rational(value: Any) -> sympy.Rational:
    c = ExactScalar.coerce(value)
    if c.im != 0:
        raise ValidationError(f"radial profile coefficient {value!r} is not real")
    return sympy.Rational(c.re.numerator, c.re.denominator)


def landau_radial_spectrum(
    V: RadialDensity,
    cfg: LandauConfig,
    digits: int = LANDAU_SPECTRUM_DIGITS,
) -> List[sympy.Float]:
    """
    Собствените стойности на T_q(V) за радиален V с полиномен профил

    Each level function has one angular momentum a − b, so T_q(V) is diagonal
    and λ_s = Σ_m w_m·∫ V(r) r^{2m} e^{−Br²/2} 2r dr / ‖p_s‖². The radial
    integrals are incomplete gamma values, evaluated to `digits` significant
    digits.

    Raises:
        ValidationError: V is not a real polynomial profile on the disk, or the
            family mixes angular momenta (as-printed convention)
    """
    if not (isinstance(V, RadialDensity) and V.dimension == 1 and V.coefficients is not None):
        raise ValidationError("the exact Landau spectrum needs a radial polynomial profile on the plane")
    if V.alpha != V.beta:
        raise ValidationError("an angular factor z^α z̄^β with α ≠ β breaks the diagonal structure")
    basis = landau_basis(cfg)
    momenta = []
    for p in basis.polynomials:
        spins = {a - b for ((a,), (b,)) in p.terms}
        if len(spins) != 1:
            raise ValidationError(f"{cfg.convention} level functions mix angular momenta {sorted(spins)}")
        momenta.append(spins.pop())
    if len(set(momenta)) != len(momenta):
        raise ValidationError("two level functions share an angular momentum")

    B = _exact_field(cfg.B)
    a = sympy.Rational(B.numerator, 2 * B.denominator)
    R = _exact_field(V.radius)
    aR2 = a * sympy.Rational(R.numerator, R.denominator) ** 2
    coeffs = [_real_rational(c) for c in V.coefficients]
    radial: Dict[int, sympy.Expr] = {}

    def integral(m: int) -> sympy.Expr:
        if m not in radial:
            terms = []
            for j, c in enumerate(coeffs):
                if c == 0:
                    continue
                k = sympy.Rational(j + 2 * (m + V.alpha) + 2, 2)
                terms.append(c * sympy.lowergamma(k, aR2) / a ** k)
            radial[m] = sympy.Add(*terms)
        return radial[m]

    values = []
    for p, norm2 in zip(basis.polynomials, basis.norms2):
        weights: Dict[int, Fraction] = {}
        for ((a1,), (_,)), c1 in p.terms.items():
            for ((_,), (d2,)), c2 in p.terms.items():
                w = (ExactScalar.coerce(c1) * ExactScalar.coerce(c2).conjugate()).re
                weights[a1 + d2] = weights.get(a1 + d2, Fraction(0)) + w
        expr = sympy.Add(*[
            sympy.Rational(w.numerator, w.denominator) * integral(m) for m, w in weights.items() if w != 0
        ])
        values.append(sympy.N(expr / sympy.Rational(norm2.numerator, norm2.denominator), digits))
    return values


def _landau_metadata(cfg: LandauConfig) -> Dict[str, Any]:
    return {
        'B': cfg.B,
        'q': cfg.q,
        'n': cfg.n,
        'convention': cfg.convention,
        'landau_level': cfg.level_energy,
    }


def landau_toeplitz(
    V: WeightSpec,
    cfg: LandauConfig,
    threads: Optional[int] = None,
    rel_tol: Optional[float] = None,
) -> Tuple[ToeplitzMatrix, SpectrumReport]:
    """
    (V·x_s, x_t) върху нивото q, с подредени собствени стойности

    Raises:
        DomainError: the support of V escapes the representation grid
    """
    if isinstance(V, GridDensity) and not V.plane:
        raise ValidationError("Landau potentials on a grid must be plane grids")
    bound = support_bound(V)
    if bound > cfg.grid_half_width:
        raise DomainError(f"support radius {bound:.3f} escapes the grid half width {cfg.grid_half_width:.3f}")
    M = assemble(V, LandauLevel(cfg), threads=threads)
    matrix = M.as_complex()
    scale = max(1.0, float(np.max(np.abs(matrix), initial=0.0)))
    hermitian = bool(np.max(np.abs(matrix - matrix.conj().T), initial=0.0) <= 1e-12 * scale)
    tol = LANDAU_RANK_TOL if rel_tol is None else rel_tol
    meta = _landau_metadata(cfg)
    M.metadata.update(meta)
    report = spectrum_report(matrix, tol, hermitian=hermitian, metadata=meta)
    logger.info(
        f"📊 T_{cfg.q}({weight_kind(V)}) n={cfg.n}: rank {report.numerical_rank} at tol {tol:.0e}, "
        f"Λ_q = {cfg.level_energy:g}"
    )
    return M, report


# ---------------------------------------------------------------------------
# D_q(Δ) transform
# ---------------------------------------------------------------------------

def _laplacian_fd(values: np.ndarray, hx: float, hy: float) -> np.ndarray:
    u = np.pad(values, 1)
    return (
        (u[2:, 1:-1] - 2 * values + u[:-2, 1:-1]) / hx ** 2
        + (u[1:-1, 2:] - 2 * values + u[1:-1, :-2]) / hy ** 2
    )


def _laplacian_spectral(values: np.ndarray, hx: float, hy: float) -> np.ndarray:
    kx = 2.0 * np.pi * np.fft.fftfreq(values.shape[0], d=hx)
    ky = 2.0 * np.pi * np.fft.fftfreq(values.shape[1], d=hy)
    result = np.fft.ifft2(-(kx[:, None] ** 2 + ky[None, :] ** 2) * np.fft.fft2(values))
    return result if np.iscomplexobj(values) else result.real


def dq_transform(V: GridDensity, coeffs: Sequence[float], check: bool = True) -> GridDensity:
    """
    W = Σ c_m Δ^m V с итериран петточков лапласиан

    Each Laplacian power is compared with its spectral counterpart; a relative
    deviation above DQ_SMOOTHNESS_TOL means V is not smooth at grid scale.

    Raises:
        GridResolutionError: insufficient smoothness at grid scale
    """
    if V.dimension != 2:
        raise ValidationError("D_q(Δ) acts on two-dimensional grids")
    if len(coeffs) == 0:
        raise ValidationError("D_q needs at least one coefficient")
    hx, hy = V.spacing
    current = np.asarray(V.values)
    total = coeffs[0] * current
    for m, c in enumerate(coeffs[1:], start=1):
        nxt = _laplacian_fd(current, hx, hy)
        if check:
            reference = _laplacian_spectral(current, hx, hy)
            scale = float(np.max(np.abs(reference), initial=0.0))
            deviation = float(np.max(np.abs(nxt - reference), initial=0.0)) / scale if scale > 0 else 0.0
            if deviation > DQ_SMOOTHNESS_TOL:
                raise GridResolutionError(
                    f"Δ^{m}V: finite-difference and spectral Laplacians differ by {deviation:.2e}"
                )
        current = nxt
        total = total + c * current
    return GridDensity(total, V.axes, V.plane)


@dataclass
class DqComparison:
    level_q: List[float]
    transformed: List[float]
    max_deviation: float
    metadata: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        return {
            'level_q': self.level_q,
            'transformed': self.transformed,
            'max_deviation': self.max_deviation,
            'metadata': self.metadata,
        }


def compare_dq_spectra(V: GridDensity, coeffs: Sequence[float], cfg: LandauConfig) -> DqComparison:
    """eig T_q(V) редом с eig T_0(D_q(Δ)V); равенство се очаква само при верни D_q"""
    _, left = landau_toeplitz(V, cfg)
    W = dq_transform(V, coeffs)
    _, right = landau_toeplitz(W, replace(cfg, q=0))
    a = [complex(v).real for v in left.values]
    b = [complex(v).real for v in right.values]
    deviation = max((abs(x - y) for x, y in zip(a, b)), default=0.0)
    logger.info(f"📊 D_q spectra comparison: max deviation {deviation:.3e}")
    return DqComparison(a, b, deviation, {'coeffs': list(coeffs), **_landau_metadata(cfg)})


# ---------------------------------------------------------------------------
# Helmholtz matrices
# ---------------------------------------------------------------------------

def _check_aliasing(F: GridDensity) -> None:
    h1 = F.spacing[0]
    if h1 * HELMHOLTZ_FREQUENCY >= math.pi / 2:
        raise GridResolutionError(f"x₁ spacing {h1:.3f} aliases the frequency {HELMHOLTZ_FREQUENCY:g}")


def _real_space_nodes(F: WeightSpec, d: int) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(F, PointDistribution):
        if not F.real_space or not F.is_pure:
            raise ValidationError("Helmholtz weights must be real-space point masses")
        if not F.masses:
            return np.zeros((0, d)), np.zeros(0, dtype=complex)
        pts = np.real(F.locations_array()).astype(float)
        return pts, np.array([complex(c) for c in F.mass_coefficients()])
    if isinstance(F, GridDensity) and not F.plane:
        _check_aliasing(F)
        return F.points(), F.values.ravel().astype(complex) * F.cell_measure
    if isinstance(F, RadialDensity) and F.dimension == d:
        pts, w = ball_nodes(F.radius, d)
        return pts, w * F(pts)
    raise ValidationError(f"{weight_kind(F)} weight is not a measure in R^{d}")


def _weight_dimension(F: WeightSpec) -> int:
    if isinstance(F, PointDistribution):
        return F.dimension
    if isinstance(F, GridDensity):
        return F.dimension
    if isinstance(F, RadialDensity):
        return F.dimension
    raise ValidationError(f"{weight_kind(F)} weight is not a measure in R^d")


def partial_fourier(F: WeightSpec, quadrature_points: Optional[int] = None) -> WeightSpec:
    """
    F̃(x′) = ∫ F(x₁, x′) e^{−2ix₁} dx₁ като тегло в R^{d−1}

    Radial densities become a discrete quadrature measure on the hyperplane:
    ρ = R sin ψ removes the square-root endpoint behaviour of F̃ at ρ = R.
    """
    n = quadrature_points or Config.RADIAL_QUADRATURE_POINTS
    if isinstance(F, PointDistribution):
        if not F.real_space or not F.is_pure:
            raise ValidationError("Helmholtz weights must be real-space point masses")
        if F.dimension < 2:
            raise ValidationError("the hyperplane x₁ = 0 needs d >= 2")
        groups: List[Tuple[np.ndarray, complex]] = []
        for loc, c in zip(np.real(F.locations_array()), F.mass_coefficients()):
            value = complex(c) * np.exp(-1j * HELMHOLTZ_FREQUENCY * loc[0])
            rest = loc[1:]
            for i, (key, acc) in enumerate(groups):
                if np.max(np.abs(key - rest)) <= Config.POINT_MERGE_TOL:
                    groups[i] = (key, acc + value)
                    break
            else:
                groups.append((rest, value))
        if not groups:
            return PointDistribution((), real_space=True, ambient_dimension=F.dimension - 1)
        return PointDistribution.from_atoms([tuple(k) for k, _ in groups], [c for _, c in groups], real_space=True)
    if isinstance(F, GridDensity):
        if F.plane or F.dimension < 2:
            raise ValidationError("Helmholtz grids are real-space grids with d >= 2")
        _check_aliasing(F)
        phase = np.exp(-1j * HELMHOLTZ_FREQUENCY * F.axes[0]) * F.spacing[0]
        values = np.tensordot(phase, F.values, axes=(0, 0))
        return GridDensity(values, F.axes[1:])
    if isinstance(F, RadialDensity) and F.dimension in (2, 3):
        R = float(F.radius)
        inner = gauss_legendre(n, (0.0, 1.0))

        def transformed(rho: np.ndarray) -> np.ndarray:
            a = np.sqrt(np.maximum(R * R - rho * rho, 0.0))
            x1 = a[:, None] * inner.nodes[None, :]
            r = np.sqrt(x1 ** 2 + rho[:, None] ** 2)
            f = F.profile_value(r.ravel()).reshape(r.shape)
            return 2.0 * a * ((f * np.cos(HELMHOLTZ_FREQUENCY * x1)) @ inner.weights)

        if F.dimension == 2:
            psi = gauss_legendre(n, (-0.5 * math.pi, 0.5 * math.pi))
            rho = R * np.sin(psi.nodes)
            coeffs = transformed(np.abs(rho)) * R * np.cos(psi.nodes) * psi.weights
            return PointDistribution.from_atoms([(x,) for x in rho], list(coeffs), real_space=True)
        psi = gauss_legendre(n, (0.0, 0.5 * math.pi))
        n_theta = 2 * n
        theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
        rho = R * np.sin(psi.nodes)
        radial = transformed(rho) * rho * R * np.cos(psi.nodes) * psi.weights * (2.0 * math.pi / n_theta)
        points = [(r * math.cos(t), r * math.sin(t)) for r in rho for t in theta]
        coeffs = [w for w in radial for _ in theta]
        return PointDistribution.from_atoms(points, coeffs, real_space=True)
    raise ValidationError(f"{weight_kind(F)} weight has no partial Fourier transform in x₁")


def helmholtz_matrix(
    F: WeightSpec,
    harmonics: HarmonicBasis,
    path: str = 'direct',
    threads: Optional[int] = None,
) -> ToeplitzMatrix:
    """
    ∫∫ F(x₁, x′) e^{−2ix₁} dx₁ h_j(x′) h̄_k(x′) dx′

    Args:
        F: Weight in R^d, d = harmonics.dimension + 1
        harmonics: Harmonic polynomials on the hyperplane x₁ = 0
        path: 'direct' pairs F with e^{−ix₁}h_j · conj(e^{ix₁}h_k);
            'transform' assembles the partial Fourier transform F̃ against h_j h̄_k

    Raises:
        GridResolutionError: x₁ grid spacing aliases the frequency 2
    """
    d = harmonics.dimension + 1
    if _weight_dimension(F) != d:
        raise ValidationError(f"harmonics on R^{d - 1} need a weight in R^{d}")
    if path == 'transform':
        M = assemble(partial_fourier(F), harmonics, threads=threads)
        M.metadata['path'] = 'transform'
        return M
    if path != 'direct':
        raise ValidationError(f"unknown Helmholtz path {path!r}")
    pts, w = _real_space_nodes(F, d)
    if len(pts) == 0:
        entries = np.zeros((harmonics.size, harmonics.size), dtype=complex)
    else:
        values = harmonics.evaluate_all(pts[:, 1:])
        phase = np.exp(-1j * HELMHOLTZ_FREQUENCY * pts[:, 0])
        entries = (values * (w * phase)) @ values.conj().T
    return ToeplitzMatrix(
        entries=entries,
        row_indices=list(harmonics.indices),
        col_indices=list(harmonics.indices),
        weight=F,
        bases=(harmonics, harmonics),
        metadata={'path': 'direct'},
    )


# ---------------------------------------------------------------------------
# Born approximation
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SphereSampling:
    """Единични вектори ω_i върху S^{d−1} и тегла за повърхнинна квадратура"""

    directions: np.ndarray
    weights: np.ndarray
    method: str = 'custom'

    def __post_init__(self) -> None:
        dirs = np.atleast_2d(np.asarray(self.directions, dtype=float))
        weights = np.asarray(self.weights, dtype=float)
        if len(weights) != len(dirs):
            raise ValidationError("one weight per direction is required")
        if np.any(np.abs(np.linalg.norm(dirs, axis=1) - 1.0) > UNIT_NORM_TOL):
            raise ValidationError("sphere sampling directions must be unit vectors")
        object.__setattr__(self, 'directions', dirs)
        object.__setattr__(self, 'weights', weights)

    @property
    def size(self) -> int:
        return len(self.directions)

    @property
    def dimension(self) -> int:
        return int(self.directions.shape[1])


def _icosahedral(level: int) -> np.ndarray:
    t = (1.0 + math.sqrt(5.0)) / 2.0
    vertices = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    pts = [np.array(v, dtype=float) / np.linalg.norm(v) for v in vertices]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    for _ in range(level):
        cache: Dict[Tuple[int, int], int] = {}

        def midpoint(i: int, j: int) -> int:
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = pts[i] + pts[j]
                pts.append(m / np.linalg.norm(m))
                cache[key] = len(pts) - 1
            return cache[key]

        refined = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            refined.extend([(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)])
        faces = refined
    return np.array(pts)


def sphere_sampling(d: int, size: int, method: Optional[str] = None) -> SphereSampling:
    """
    Равномерни ъгли (d=2), Фибоначи или икосаедрично сгъстяване (d=3)

    Icosahedral samplings exist for size = 10·4^k + 2 only.
    """
    method = method or ('uniform' if d == 2 else 'fibonacci')
    if method not in SPHERE_SAMPLING_METHODS:
        raise ValidationError(f"unknown sampling method {method!r}")
    if size < 2:
        raise ValidationError("sampling size must be >= 2")
    if d == 2:
        if method != 'uniform':
            raise ValidationError("the circle is sampled with uniform angles")
        theta = 2.0 * math.pi * np.arange(size) / size
        return SphereSampling(np.stack([np.cos(theta), np.sin(theta)], axis=1), np.full(size, 2.0 * math.pi / size), method)
    if d != 3:
        raise ValidationError(f"sphere samplings exist for d = 2, 3, got {d}")
    if method == 'icosahedral':
        level = 0
        while 10 * 4 ** level + 2 < size:
            level += 1
        if 10 * 4 ** level + 2 != size:
            raise ValidationError(f"icosahedral samplings have 10·4^k + 2 points, not {size}")
        dirs = _icosahedral(level)
    elif method == 'fibonacci':
        k = np.arange(size) + 0.5
        z = 1.0 - 2.0 * k / size
        phi = math.pi * (1.0 + math.sqrt(5.0)) * k
        s = np.sqrt(1.0 - z * z)
        dirs = np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=1)
    else:
        raise ValidationError("uniform angles are for the circle")
    dirs = dirs / np.linalg.norm(dirs, axis=1)[:, None]
    return SphereSampling(dirs, np.full(len(dirs), 4.0 * math.pi / len(dirs)), method)


def _unit(v: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > UNIT_NORM_TOL:
        raise ValidationError(f"{name} must be a unit vector, |{name}| = {norm!r}")
    return arr


def born_kernel(F: WeightSpec, omega: Sequence[float], sigma: Sequence[float]) -> complex:
    """K(ω, ς) = ∫ F(x) e^{ix·(ω−ς)} dx = F̂(ς − ω)"""
    w = _unit(omega, 'ω')
    s = _unit(sigma, 'ς')
    if w.shape != s.shape:
        raise ValidationError("ω and ς live in different dimensions")
    return fourier_transform(F, s - w)


def born_matrix(
    F: WeightSpec,
    sampling: SphereSampling,
    rel_tol: Optional[float] = None,
) -> Tuple[np.ndarray, SpectrumReport]:
    """K(ω_i, ς_j) върху една извадка и сингулярните ѝ стойности"""
    if sampling.size < 2:
        raise ValidationError("born_matrix needs at least two directions")
    dirs = sampling.directions
    K = np.array([[born_kernel(F, w, s) for s in dirs] for w in dirs], dtype=complex)
    report = spectrum_report(K, rel_tol, metadata={'sampling': sampling.method, 'size': sampling.size})
    logger.debug(f"🔍 Born matrix {sampling.size}x{sampling.size}: rank {report.numerical_rank}")
    return K, report


def born_rank_sweep(
    F: WeightSpec,
    sizes: Sequence[int],
    d: int = 3,
    method: Optional[str] = None,
    rel_tol: Optional[float] = None,
) -> List[Tuple[int, int]]:
    """(размер, числен ранг) за нарастващи извадки"""
    ranks = []
    for size in sorted(sizes):
        _, report = born_matrix(F, sphere_sampling(d, size, method), rel_tol)
        ranks.append((size, report.numerical_rank))
    logger.info(f"📊 Born rank sweep: {ranks}")
    return ranks
