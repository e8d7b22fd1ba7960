"""
🧮 Toeplitz assembly - truncated matrices of the form ⟨F, f_j ḡ_k⟩

Matrix convention: entry [j, k] = (T_F f_j, g_k) = ⟨F, f_j ḡ_k⟩; the row index is
the input function, the column index the test function. For operators P, Q
this gives M_{PQ} = M_Q · M_P.

Three assembly paths:
    exact     - polynomial bases and exact weights, Gaussian-rational entries
    symbolic  - polynomial bases and derivative-bearing point distributions
    nodes     - every other case: one node rule ⟨F, φ⟩ ≈ Σ w_i φ(x_i), vectorised
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from bases import BasisSpec, DiskMonomial, HarmonicBasis
from config import Config
from exceptions import DomainError, ValidationError
from numeric_core import ExactScalar, MultiIndex, exact_rank, numerical_rank, to_complex_matrix
from weights import (
    GridDensity,
    PointDistribution,
    PolynomialDensity,
    RadialDensity,
    WeightSpec,
    ZPolynomial,
    ball_nodes,
    moment,
    polar_nodes,
    polar_sizes,
    radial_moment,
    support_bound,
    weight_kind,
)

logger = logging.getLogger(__name__)


@dataclass
class ToeplitzMatrix:
    """Отрязана матрица с индексите, теглото и режима на аритметиката"""

    entries: Any
    row_indices: List[Any]
    col_indices: List[Any]
    weight: Optional[WeightSpec] = None
    bases: Tuple[Optional[BasisSpec], Optional[BasisSpec]] = (None, None)
    mode: str = 'float'
    shift: Optional[int] = None
    window: Optional[Tuple[List[Any], List[Any]]] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.mode not in ('float', 'exact'):
            raise ValidationError(f"mode must be float or exact, got {self.mode!r}")
        rows, cols = self.shape
        if rows != len(self.row_indices) or cols != len(self.col_indices):
            raise ValidationError(
                f"entries of shape {self.shape} do not match {len(self.row_indices)}x{len(self.col_indices)} indices"
            )

    @property
    def shape(self) -> Tuple[int, int]:
        if self.mode == 'exact':
            return (len(self.entries), len(self.entries[0]) if self.entries else 0)
        return tuple(np.asarray(self.entries).shape)  # type: ignore[return-value]

    def as_complex(self) -> np.ndarray:
        if self.mode == 'exact':
            return to_complex_matrix(self.entries) if self.entries else np.zeros((0, 0), dtype=complex)
        return np.asarray(self.entries, dtype=complex)

    def entry(self, row: Any, col: Any) -> Any:
        j = self.row_indices.index(row)
        k = self.col_indices.index(col)
        return self.entries[j][k]

    def rank(self, rel_tol: Optional[float] = None) -> int:
        """Точен ранг в exact режим, числен иначе"""
        if self.mode == 'exact':
            return exact_rank(self.entries)
        return numerical_rank(self.as_complex(), rel_tol)

    def select(self, row_positions: Sequence[int], col_positions: Sequence[int]) -> 'ToeplitzMatrix':
        if self.mode == 'exact':
            entries: Any = [[self.entries[j][k] for k in col_positions] for j in row_positions]
        else:
            entries = np.asarray(self.entries)[np.ix_(list(row_positions), list(col_positions))]
        return replace(
            self,
            entries=entries,
            row_indices=[self.row_indices[j] for j in row_positions],
            col_indices=[self.col_indices[k] for k in col_positions],
            metadata=dict(self.metadata),
        )

    def conjugate_transpose(self) -> 'ToeplitzMatrix':
        if self.mode == 'exact':
            entries: Any = [
                [ExactScalar.coerce(self.entries[j][k]).conjugate() for j in range(self.shape[0])]
                for k in range(self.shape[1])
            ]
        else:
            entries = self.as_complex().conj().T
        return replace(
            self,
            entries=entries,
            row_indices=list(self.col_indices),
            col_indices=list(self.row_indices),
            bases=(self.bases[1], self.bases[0]),
            metadata=dict(self.metadata),
        )


# ---------------------------------------------------------------------------
# Generic assembly
# ---------------------------------------------------------------------------

def _check_support(F: WeightSpec, basis: BasisSpec) -> None:
    if basis.real_space != _weight_real_space(F):
        raise DomainError(
            f"{weight_kind(F)} weight and {basis.kind} basis live in different spaces"
        )
    radius = getattr(basis, 'domain_radius', None)
    if radius is None:
        return
    bound = support_bound(F)
    if isinstance(F, PointDistribution) and bound >= radius:
        raise DomainError(f"point support reaches |z| = {bound}, outside the open unit domain")
    if bound > radius:
        raise DomainError(f"weight support radius {bound} exceeds the basis domain")


def _weight_real_space(F: WeightSpec) -> bool:
    if isinstance(F, PointDistribution):
        return F.real_space
    if isinstance(F, RadialDensity):
        return F.dimension != 1
    if isinstance(F, GridDensity):
        return not F.plane
    return False


def _polynomials(basis: BasisSpec) -> Optional[List[ZPolynomial]]:
    polys = [basis.polynomial(i) for i in basis.indices]
    return None if any(p is None for p in polys) else polys  # type: ignore[misc]


def _node_rule(
    F: WeightSpec,
    rows: BasisSpec,
    cols: BasisSpec,
    quadrature_points: Optional[int],
) -> Tuple[np.ndarray, np.ndarray]:
    """Възли x_i и тегла w_i с ⟨F, φ⟩ = Σ w_i φ(x_i) за всички f_j ḡ_k"""
    if isinstance(F, PointDistribution):
        if not F.is_pure:
            raise ValidationError("derivative terms need polynomial bases")
        weights = np.array([complex(c) for c in F.mass_coefficients()])
        return F.locations_array(), weights

    row_polys, col_polys = _polynomials(rows), _polynomials(cols)
    degree = None
    if row_polys is not None and col_polys is not None:
        degree = max(p.degree for p in row_polys) + max(p.degree for p in col_polys)

    if isinstance(F, RadialDensity) and F.dimension == 1:
        angular = None if degree is None else degree + F.alpha + F.beta
        radial = None
        if angular is not None and F.profile_degree is not None:
            radial = F.profile_degree + angular + 1
        n_r, n_theta = polar_sizes(angular, radial, quadrature_points)
        z, w = polar_nodes(F.radius, n_r, n_theta)
        return z[:, None], w * F(z) / np.pi
    if isinstance(F, RadialDensity):
        pts, w = ball_nodes(F.radius, F.dimension, quadrature_points)
        return pts, w * F(pts)
    if isinstance(F, PolynomialDensity):
        angular = None if degree is None else degree + F.polynomial.degree
        radial = None if angular is None else angular + 1
        n_r, n_theta = polar_sizes(angular, radial, quadrature_points)
        z, w = polar_nodes(float(F.radius), n_r, n_theta)
        return z[:, None], w * F(z) / np.pi
    if isinstance(F, GridDensity):
        pts = F.complex_points()[:, None] if F.plane else F.points()
        return pts, F.values.ravel() * F.cell_measure
    raise ValidationError(f"not a weight: {type(F).__name__}")


def _fill_nodes(
    rows: BasisSpec,
    cols: BasisSpec,
    pts: np.ndarray,
    weights: np.ndarray,
    threads: int,
) -> np.ndarray:
    col_values = cols.evaluate_all(pts).conj()
    if threads <= 1 or rows.size < 2:
        return (rows.evaluate_all(pts) * weights) @ col_values.T
    chunks = np.array_split(np.arange(rows.size), min(threads, rows.size))

    def block(positions: np.ndarray) -> np.ndarray:
        vals = np.array([rows.evaluate(rows.indices[p], pts) for p in positions])
        return (vals * weights) @ col_values.T

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.vstack(list(pool.map(block, chunks)))


def _fill_polynomial(
    F: WeightSpec,
    row_polys: List[ZPolynomial],
    col_polys: List[ZPolynomial],
    exact: bool,
    threads: int,
) -> Any:
    """Всеки елемент като Σ c·a_{αβ}; моментите се кешират"""
    cache: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Any] = {}
    conj_cols = [p.conjugate() for p in col_polys]

    def moment_of(key: Tuple[Tuple[int, ...], Tuple[int, ...]]) -> Any:
        if key not in cache:
            cache[key] = moment(F, MultiIndex(key[0]), MultiIndex(key[1]))
        return cache[key]

    def entry(jk: Tuple[int, int]) -> Any:
        product = row_polys[jk[0]] * conj_cols[jk[1]]
        total: Any = ExactScalar() if exact else 0j
        for key, c in product.terms.items():
            m = moment_of(key)
            total = total + ExactScalar.coerce(c) * m if exact else total + complex(c) * complex(m)
        return total

    positions = [(j, k) for j in range(len(row_polys)) for k in range(len(col_polys))]
    if threads > 1 and not exact:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(entry, positions))
    else:
        values = [entry(jk) for jk in positions]
    n_cols = len(col_polys)
    table = [values[j * n_cols:(j + 1) * n_cols] for j in range(len(row_polys))]
    return table if exact else np.array(table, dtype=complex).reshape(len(row_polys), n_cols)


def _weight_is_exact(F: WeightSpec) -> bool:
    if isinstance(F, PointDistribution):
        return F.is_exact
    if isinstance(F, PolynomialDensity):
        return F.is_exact
    return False


def assemble(
    F: WeightSpec,
    rows: BasisSpec,
    cols: Optional[BasisSpec] = None,
    exact: Optional[bool] = None,
    threads: Optional[int] = None,
    quadrature_points: Optional[int] = None,
) -> ToeplitzMatrix:
    """
    A(F)_{jk} = ⟨F, f_j ḡ_k⟩

    Args:
        F: Weight
        rows: Row basis (with its truncation)
        cols: Column basis; defaults to rows
        exact: Force (True) or forbid (False) exact arithmetic; None picks exact
            whenever weight and basis data are exact
        threads: Worker threads for the entry fill; defaults to Config.THREADS
        quadrature_points: Radial quadrature nodes for densities

    Raises:
        DomainError: support outside the basis domain
        ValidationError: exact arithmetic requested on inexact data
    """
    cols = rows if cols is None else cols
    threads = Config.THREADS if threads is None else threads
    if threads < 1:
        raise ValidationError("threads must be >= 1")
    _check_support(F, rows)
    _check_support(F, cols)

    row_polys, col_polys = _polynomials(rows), _polynomials(cols)
    polynomial_bases = row_polys is not None and col_polys is not None
    data_exact = (
        polynomial_bases
        and _weight_is_exact(F)
        and all(p.is_exact for p in row_polys + col_polys)  # type: ignore[operator]
    )
    if exact and not data_exact:
        raise ValidationError("exact arithmetic needs an exact weight and raw polynomial bases")
    use_exact = data_exact if exact is None else bool(exact)
    symbolic = isinstance(F, PointDistribution) and not F.is_pure

    if use_exact:
        entries = _fill_polynomial(F, row_polys, col_polys, True, threads)  # type: ignore[arg-type]
        path = 'exact'
    elif symbolic:
        if not polynomial_bases:
            raise ValidationError("derivative terms need polynomial bases")
        entries = _fill_polynomial(F, row_polys, col_polys, False, threads)  # type: ignore[arg-type]
        path = 'symbolic'
    else:
        pts, weights = _node_rule(F, rows, cols, quadrature_points)
        entries = _fill_nodes(rows, cols, pts, weights, threads)
        path = 'nodes'

    logger.debug(f"🔍 Assembled {rows.size}x{cols.size} matrix for {weight_kind(F)} weight via {path} path")
    return ToeplitzMatrix(
        entries=entries,
        row_indices=list(rows.indices),
        col_indices=list(cols.indices),
        weight=F,
        bases=(rows, cols),
        mode='exact' if use_exact else 'float',
        metadata={'path': path},
    )


def harmonic_matrix(F: WeightSpec, degree: int) -> ToeplitzMatrix:
    """H(F)_{jk} = ⟨F, h_j h_k⟩ за мярка в R² или R³"""
    if isinstance(F, PointDistribution):
        dimension = F.dimension
    elif isinstance(F, GridDensity):
        dimension = F.dimension
    elif isinstance(F, RadialDensity):
        dimension = F.dimension
    else:
        raise ValidationError("harmonic matrices take real-space weights")
    return assemble(F, HarmonicBasis(dimension, degree))


# ---------------------------------------------------------------------------
# Radial closed form and shift structure
# ---------------------------------------------------------------------------

def assemble_radial_monomial(f: RadialDensity, alpha: int, beta: int, n: int) -> ToeplitzMatrix:
    """
    T_g за g(z) = f(|z|) z^α z̄^β в нормирания моном базис e_s

    (T_g e_s, e_t) = 2√((s+1)(t+1)) f̂(s+t+α+β+1) for t = s+α−β ≥ 0 and zero
    otherwise; targets outside [0, n) are structural zeros.
    """
    if f.dimension != 1:
        raise ValidationError("radial×monomial symbols live on the disk")
    if alpha < 0 or beta < 0 or n < 1:
        raise ValidationError("need alpha, beta >= 0 and n >= 1")
    shift = alpha - beta
    entries = np.zeros((n, n), dtype=complex)
    for s in range(n):
        t = s + shift
        if 0 <= t < n:
            moment_value = complex(radial_moment(f, s + t + alpha + beta + 1))
            entries[s, t] = 2.0 * np.sqrt((s + 1) * (t + 1)) * moment_value
    symbol = RadialDensity(
        f.radius, f.coefficients, f.profile, f.alpha + alpha, f.beta + beta,
        f.dimension, None if f.coefficients is not None else f.profile_degree, f.name,
    )
    basis = DiskMonomial(n)
    return ToeplitzMatrix(
        entries=entries,
        row_indices=list(range(n)),
        col_indices=list(range(n)),
        weight=symbol,
        bases=(basis, basis),
        shift=shift,
        metadata={'path': 'radial-closed-form', 'alpha': alpha, 'beta': beta},
    )


def reduced_matrix(M: ToeplitzMatrix, J: Any) -> ToeplitzMatrix:
    """
    A^J: редове и колони с индекси извън J, в същия ред

    Raises:
        ValidationError: every index lies in J
    """
    def outside(index: Any) -> bool:
        return not J.contains(index if isinstance(index, MultiIndex) else MultiIndex.of(int(index)))

    rows = [j for j, idx in enumerate(M.row_indices) if outside(idx)]
    cols = [k for k, idx in enumerate(M.col_indices) if outside(idx)]
    if not rows or not cols:
        raise ValidationError("the complement of J within the truncation is empty")
    reduced = M.select(rows, cols)
    reduced.metadata['reduced_by'] = getattr(J, 'description', str(J))
    logger.debug(f"🔍 Reduced {M.shape} matrix to {reduced.shape}")
    return reduced


def _chain_ok(start: int, steps: Sequence[int], n: int) -> bool:
    """True ако веригата индекси не излиза над n − 1, преди да стане отрицателна"""
    u = start
    for step in steps:
        u += step
        if u < 0:
            return True
        if u >= n:
            return False
    return True


def shift_exact_product(
    left_factors: Sequence[ToeplitzMatrix],
    middle: ToeplitzMatrix,
    right_factors: Sequence[ToeplitzMatrix] = (),
) -> ToeplitzMatrix:
    """
    Матрицата на L₁⋯L_m · T · R₁⋯R_k върху прозореца, където отрязването е точно

    Side factors must come from assemble_radial_monomial. Row s is exact when
    the chain s, s+δ_k, s+δ_k+δ_{k−1}, … stays below n until it turns negative;
    column t when t, t−δ₁, t−δ₁−δ₂, … does.

    Raises:
        ValidationError: side factor without shift structure, size mismatch, or empty window
    """
    n = middle.shape[0]
    if middle.shape != (n, n) or middle.row_indices != list(range(n)) or middle.col_indices != list(range(n)):
        raise ValidationError("the middle factor must be a square disk-monomial matrix")
    for factor in list(left_factors) + list(right_factors):
        if factor.shift is None:
            raise ValidationError("side factors must have single-shift structure (assemble_radial_monomial)")
        if factor.shape != (n, n):
            raise ValidationError(f"side factor of shape {factor.shape}, middle is {n}x{n}")

    product = middle.as_complex()
    for factor in left_factors[::-1]:
        product = product @ factor.as_complex()
    for factor in right_factors:
        product = factor.as_complex() @ product

    right_steps = [f.shift for f in right_factors[::-1]]
    left_steps = [-f.shift for f in left_factors]  # type: ignore[operator]
    valid_rows = [s for s in range(n) if _chain_ok(s, right_steps, n)]  # type: ignore[arg-type]
    valid_cols = [t for t in range(n) if _chain_ok(t, left_steps, n)]
    if not valid_rows or not valid_cols:
        raise ValidationError("no index window keeps every shift inside the truncation")

    total_shift = sum(f.shift for f in list(left_factors) + list(right_factors))  # type: ignore[misc]
    result = ToeplitzMatrix(
        entries=product,
        row_indices=list(range(n)),
        col_indices=list(range(n)),
        weight=middle.weight,
        bases=middle.bases,
        shift=None if middle.shift is None else middle.shift + total_shift,
        metadata={'path': 'shift-product', 'factors': len(left_factors) + len(right_factors)},
    ).select(valid_rows, valid_cols)
    result.window = (valid_rows, valid_cols)
    logger.debug(f"🔍 Product window {len(valid_rows)}x{len(valid_cols)} of {n}x{n}")
    return result
