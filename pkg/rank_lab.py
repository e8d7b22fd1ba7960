"""
🔬 Rank lab - executable rank-rigidity machinery

    vandermonde_vanishing      φ^{⊗N}(Π z_i^{j_i} · det(z̄_i^{k_l})) by exact expansion
    check_lemma_equivalence    rank(moment matrix) ≤ r  ⇔  all N = r+1 conditions vanish
    symmetric_derivative_test  (V(D)V(D̄))(P·Q̄)(0) with sympy coefficient extraction
    recover_point_masses       Prony / Hankel pencil on the column-0 moments
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy import linalg

from bases import DiskMonomial
from config import Config
from constants import RECOVERY_CONDITION_LIMIT, SYMBOLIC_DEGREE_BUDGET
from exceptions import (
    BudgetExceededError,
    PropertyFailure,
    RankExceededError,
    RecoveryError,
    ValidationError,
)
from numeric_core import ExactScalar, exact_rank, is_exact, numerical_rank, singular_values
from toeplitz import ToeplitzMatrix
from weights import PointDistribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteFunctional:
    """φ = Σ c_q δ_{z_q} върху полиноми в (z, z̄), z_q ∈ C¹"""

    points: Tuple[Any, ...]
    coeffs: Tuple[Any, ...]

    def __post_init__(self) -> None:
        points, coeffs = tuple(self.points), tuple(self.coeffs)
        if len(points) != len(coeffs):
            raise ValidationError("points and coefficients differ in length")
        if len({complex(p) for p in points}) != len(points):
            raise ValidationError("atoms must be pairwise distinct")
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'coeffs', coeffs)

    @classmethod
    def from_distribution(cls, F: PointDistribution) -> 'FiniteFunctional':
        if F.real_space or F.dimension != 1 or not F.is_pure:
            raise ValidationError("finite functionals are pure point masses on C¹")
        return cls(tuple(m.location[0] for m in F.masses), tuple(F.mass_coefficients()))

    @property
    def is_exact(self) -> bool:
        return all(is_exact(v) for v in self.points + self.coeffs)

    def atoms(self) -> List[Tuple[Any, Any]]:
        """Атоми с ненулев коефициент"""
        result = []
        for p, c in zip(self.points, self.coeffs):
            zero = ExactScalar.coerce(c).is_zero() if is_exact(c) else complex(c) == 0
            if not zero:
                result.append((p, c))
        return result

    def moment_matrix(self, degree_bound: int) -> Any:
        """a_{jk} = φ(z^j z̄^k), 0 ≤ j, k ≤ degree_bound"""
        atoms = self.atoms()
        size = degree_bound + 1
        if self.is_exact:
            zs = [ExactScalar.coerce(p) for p, _ in atoms]
            cs = [ExactScalar.coerce(c) for _, c in atoms]
            zp = [[z ** e for e in range(size)] for z in zs]
            zb = [[z.conjugate() ** e for e in range(size)] for z in zs]
            return [
                [sum((c * zp[q][j] * zb[q][k] for q, c in enumerate(cs)), ExactScalar()) for k in range(size)]
                for j in range(size)
            ]
        z = np.array([complex(p) for p, _ in atoms])
        c = np.array([complex(v) for _, v in atoms])
        powers = np.vander(z, size, increasing=True) if len(z) else np.zeros((0, size))
        return (powers.T * c) @ powers.conj()


def _det(matrix: List[List[Any]]) -> Any:
    """Лайбниц - за малки N (точно или числено)"""
    n = len(matrix)
    total: Any = None
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = matrix[0][perm[0]]
        for i in range(1, n):
            term = term * matrix[i][perm[i]]
        if inversions % 2:
            term = -term
        total = term if total is None else total + term
    return total


def _expansion_estimate(N: int, atoms: int) -> int:
    return math.factorial(N) * atoms ** N


def _check_budget(N: int, atoms: int, budget: Optional[int]) -> int:
    limit = Config.VANDERMONDE_BUDGET if budget is None else budget
    estimate = _expansion_estimate(N, atoms)
    if estimate > limit:
        raise BudgetExceededError("Vandermonde expansion too large", estimate=estimate, budget=limit)
    return estimate


class _Expansion:
    """Кеширани степени и детерминанти за едно φ"""

    def __init__(self, atoms: List[Tuple[Any, Any]], max_exponent: int, exact: bool):
        self.exact = exact
        if exact:
            self.z = [ExactScalar.coerce(p) for p, _ in atoms]
            self.c = [ExactScalar.coerce(c) for _, c in atoms]
            self.zp = [[z ** e for e in range(max_exponent + 1)] for z in self.z]
            self.zb = [[z.conjugate() ** e for e in range(max_exponent + 1)] for z in self.z]
        else:
            self.z = [complex(p) for p, _ in atoms]
            self.c = [complex(c) for _, c in atoms]
            self.zp = [[z ** e for e in range(max_exponent + 1)] for z in self.z]
            self.zb = [[z.conjugate() ** e for e in range(max_exponent + 1)] for z in self.z]
        self._dets: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Any] = {}

    def zero(self) -> Any:
        return ExactScalar() if self.exact else 0j

    def det(self, assignment: Tuple[int, ...], K: Sequence[int]) -> Any:
        key = (assignment, tuple(K))
        if key not in self._dets:
            self._dets[key] = _det([[self.zb[a][k] for k in K] for a in assignment])
        return self._dets[key]

    def value(self, assignments: List[Tuple[int, ...]], J: Sequence[int], K: Sequence[int]) -> Any:
        total = self.zero()
        for a in assignments:
            d = self.det(a, K)
            if (d.is_zero() if self.exact else d == 0):
                continue
            term = d
            for i, q in enumerate(a):
                term = term * self.c[q] * self.zp[q][J[i]]
            total = total + term
        return total


def vandermonde_vanishing(
    phi: FiniteFunctional,
    J: Sequence[int],
    K: Sequence[int],
    budget: Optional[int] = None,
) -> Any:
    """
    φ^{⊗N}(Π_i z_i^{j_i} · det(z̄_i^{k_l})) чрез пълно разгъване

    Assignments that reuse an atom give equal determinant rows and drop out,
    so only injective atom assignments are summed.

    Raises:
        BudgetExceededError: N!·atoms^N above the budget (estimate logged first)
    """
    N = len(J)
    if N < 1 or len(K) != N:
        raise ValidationError("J and K must be non-empty and of equal length")
    if any(e < 0 for e in list(J) + list(K)):
        raise ValidationError("exponents must be non-negative")
    atoms = phi.atoms()
    estimate = _expansion_estimate(N, len(atoms))
    logger.debug(f"🔍 Vandermonde expansion estimate {estimate} terms")
    _check_budget(N, len(atoms), budget)
    expansion = _Expansion(atoms, max(list(J) + list(K)), phi.is_exact)
    assignments = list(permutations(range(len(atoms)), N))
    return expansion.value(assignments, J, K)


@dataclass
class LemmaReport:
    """Резултат от проверката rank ≤ r ⇔ всички условия изчезват"""

    rank: int
    r: int
    degree_bound: int
    conditions_checked: int
    all_vanish: bool
    holds: bool
    exact: bool
    witness: Optional[Tuple[Tuple[int, ...], Tuple[int, ...], Any]] = None

    def as_dict(self) -> Dict[str, Any]:
        witness = None
        if self.witness is not None:
            J, K, value = self.witness
            witness = {'J': list(J), 'K': list(K), 'value': str(value)}
        return {
            'rank': self.rank,
            'r': self.r,
            'degree_bound': self.degree_bound,
            'conditions_checked': self.conditions_checked,
            'all_vanish': self.all_vanish,
            'holds': self.holds,
            'exact': self.exact,
            'witness': witness,
        }


def check_lemma_equivalence(
    phi: FiniteFunctional,
    r: int,
    degree_bound: int,
    budget: Optional[int] = None,
    rel_tol: Optional[float] = None,
) -> LemmaReport:
    """
    Проверява rank(a_{jk}) ≤ r ⇔ всички условия с N = r+1 изчезват

    J runs over all N-tuples and K over strictly increasing N-tuples of
    exponents ≤ degree_bound (other K permute or repeat determinant columns).
    The scan stops at the first non-vanishing condition.

    Raises:
        BudgetExceededError: per-condition expansion above the budget
        PropertyFailure: the biconditional does not hold
    """
    if r < 0:
        raise ValidationError("r must be >= 0")
    if degree_bound < r + 1:
        raise ValidationError(f"degree_bound must be >= r + 1 = {r + 1}")
    N = r + 1
    atoms = phi.atoms()
    estimate = _check_budget(N, len(atoms), budget)
    exact = phi.is_exact
    logger.info(
        f"📊 Lemma check: {len(atoms)} atoms, N={N}, exponents ≤ {degree_bound}, {estimate} terms per condition"
    )

    moments = phi.moment_matrix(degree_bound)
    rank = exact_rank(moments) if exact else numerical_rank(moments, rel_tol)

    exponents = range(degree_bound + 1)
    Ks = list(combinations(exponents, N))
    total_conditions = len(Ks) * (degree_bound + 1) ** N
    witness = None
    checked = total_conditions
    if len(atoms) >= N:
        expansion = _Expansion(atoms, degree_bound, exact)
        assignments = list(permutations(range(len(atoms)), N))
        scale = max([1.0] + [abs(complex(c)) for _, c in atoms]) ** N * max(
            [1.0] + [abs(complex(p)) for p, _ in atoms]
        ) ** (2 * N * degree_bound)
        checked = 0
        for K in Ks:
            for J in product(exponents, repeat=N):
                checked += 1
                value = expansion.value(assignments, J, K)
                vanishes = value.is_zero() if exact else abs(value) <= 1e-10 * scale
                if not vanishes:
                    witness = (tuple(J), tuple(K), value)
                    break
            if witness is not None:
                break

    all_vanish = witness is None
    holds = (rank <= r) == all_vanish
    report = LemmaReport(rank, r, degree_bound, checked, all_vanish, holds, exact, witness)
    if not holds:
        logger.error(f"❌ Lemma equivalence violated: rank {rank}, r {r}, all_vanish {all_vanish}")
        raise PropertyFailure(f"rank {rank} vs r = {r} disagrees with vanishing = {all_vanish}")
    logger.info(f"✅ Lemma equivalence holds: rank {rank}, r {r}, all_vanish {all_vanish}")
    return report


def vandermonde_value(Z: Sequence[Any]) -> Any:
    """V(Z) = Π_{j<k}(z_j − z_k)"""
    values = list(Z)
    if all(is_exact(v) for v in values):
        zs = [ExactScalar.coerce(v) for v in values]
        result: Any = ExactScalar.one()
    else:
        zs = [complex(v) for v in values]
        result = 1 + 0j
    for j in range(len(zs)):
        for k in range(j + 1, len(zs)):
            result = result * (zs[j] - zs[k])
    return result


# ---------------------------------------------------------------------------
# Symbolic V(D)V(D̄) test
# ---------------------------------------------------------------------------

def vandermonde_polynomial(N: int, prefix: str = 'z') -> sympy.Expr:
    """Π_{j<k}(x_j − x_k) в символите prefix0 … prefix{N−1}"""
    xs = sympy.symbols(f'{prefix}0:{N}')
    return sympy.Mul(*[xs[j] - xs[k] for j in range(N) for k in range(j + 1, N)])


def _as_expression(P: Any, symbols: Tuple[sympy.Symbol, ...]) -> sympy.Expr:
    names = {str(s): s for s in symbols}
    expr = sympy.sympify(P, locals=names) if isinstance(P, str) else sympy.sympify(P)
    stray = expr.free_symbols - set(symbols)
    if stray:
        raise ValidationError(f"polynomial uses unknown variables {sorted(map(str, stray))}")
    return expr


def _apply_at_zero(operator: sympy.Poly, P: sympy.Poly) -> sympy.Expr:
    """(op(D) P)(0) = Σ_m op_m · P_m · m! (коефициентите на P при мономите на op)"""
    total = sympy.Integer(0)
    for monom, coeff in operator.terms():
        weight = math.prod(math.factorial(e) for e in monom)
        total += coeff * P.coeff_monomial(monom) * weight
    return total


def _to_scalar(value: sympy.Expr) -> Any:
    re, im = sympy.expand(value).as_real_imag()
    if re.is_Rational and im.is_Rational:
        return ExactScalar(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    return complex(sympy.N(value))


def _polynomial(P: Any, N: int) -> sympy.Poly:
    zs = sympy.symbols(f'z0:{N}')
    poly = sympy.Poly(_as_expression(P, zs), *zs)
    if poly.total_degree() > SYMBOLIC_DEGREE_BUDGET:
        raise BudgetExceededError(
            "polynomial degree too large", estimate=poly.total_degree(), budget=SYMBOLIC_DEGREE_BUDGET
        )
    return poly


def vandermonde_operator_at_zero(P: Any, N: int) -> Any:
    """(V(D)P)(0); за P = V(Z) това е Σ C_κ² κ! > 0"""
    if N < 2:
        raise ValidationError("the Vandermonde operator needs N >= 2")
    zs = sympy.symbols(f'z0:{N}')
    return _to_scalar(_apply_at_zero(sympy.Poly(vandermonde_polynomial(N), *zs), _polynomial(P, N)))


def symmetric_derivative_test(P1: Any, Q1: Any, N: int) -> Any:
    """
    (V(D)V(D̄))(P1 · conj(Q1))(0) за полиноми в z0 … z{N−1}

    The operator splits over the two factors, so the value is
    (V(D)P1)(0) · conj((V(D)Q1)(0)).

    Args:
        P1, Q1: sympy expressions or strings in z0 … z{N−1}
        N: Number of variables (>= 2)

    Raises:
        BudgetExceededError: total degree above SYMBOLIC_DEGREE_BUDGET
    """
    if N < 2:
        raise ValidationError("the Vandermonde operator needs N >= 2")
    zs = sympy.symbols(f'z0:{N}')
    V = sympy.Poly(vandermonde_polynomial(N), *zs)
    left = _apply_at_zero(V, _polynomial(P1, N))
    right = _apply_at_zero(V, _polynomial(Q1, N))
    logger.debug(f"🔍 V(D)P = {left}, V(D)Q = {right}")
    return _to_scalar(left * sympy.conjugate(right))


# ---------------------------------------------------------------------------
# Point-mass recovery
# ---------------------------------------------------------------------------

@dataclass
class RecoveryResult:
    points: List[complex]
    coefficients: List[complex]
    residual: float
    rank: int
    condition: Dict[str, float] = field(default_factory=dict)
    merged: int = 0

    def as_dict(self) -> Dict[str, Any]:
        return {
            'points': [[p.real, p.imag] for p in self.points],
            'coefficients': [[c.real, c.imag] for c in self.coefficients],
            'residual': self.residual,
            'rank': self.rank,
            'condition': dict(self.condition),
            'merged': self.merged,
        }


def _moments_from_matrix(M: ToeplitzMatrix) -> np.ndarray:
    basis = M.bases[0]
    if not isinstance(basis, DiskMonomial):
        raise ValidationError("recovery needs a matrix assembled in the disk monomial basis")
    if not M.col_indices or M.col_indices[0] != 0:
        raise ValidationError("recovery reads the moments from column 0")
    column = M.as_complex()[:, 0]
    if basis.normalized:
        column = column / np.sqrt(np.array(M.row_indices, dtype=float) + 1.0)
    return column


def _condition(values: np.ndarray) -> float:
    sigma = singular_values(values)
    if sigma.size == 0 or sigma[-1] == 0:
        return float('inf')
    return float(sigma[0] / sigma[-1])


def _fit_coefficients(points: np.ndarray, moments: np.ndarray) -> Tuple[np.ndarray, float]:
    W = np.vander(points, len(moments), increasing=True).T
    coeffs = linalg.lstsq(W, moments)[0]
    residual = float(np.max(np.abs(W @ coeffs - moments), initial=0.0))
    return coeffs, residual


def recover_point_masses(
    M: ToeplitzMatrix,
    r_max: int,
    rel_tol: Optional[float] = None,
) -> RecoveryResult:
    """
    Възстановява μ = Σ c_q δ_{z_q} от моментите m_k = ⟨μ, z^k⟩ в колона 0

    Points are the eigenvalues of the shifted Hankel pencil (H₀, H₁); the
    coefficients solve the Vandermonde system by least squares. Points closer
    than RECOVERY_MERGE_TOL are merged with a warning and the coefficients refit.
    Exact matrices are converted to floating point first.

    Raises:
        RankExceededError: numerical rank above r_max
        RecoveryError: ill-conditioned pencil (condition report attached)
        ValidationError: truncation below 2·r_max + 1 or wrong basis
    """
    n = M.shape[0]
    if r_max < 1:
        raise ValidationError("r_max must be >= 1")
    if n < 2 * r_max + 1:
        raise ValidationError(f"truncation {n} is below 2·r_max + 1 = {2 * r_max + 1}")
    rank = M.rank(rel_tol)
    if rank > r_max:
        raise RankExceededError(rank, r_max)
    moments = _moments_from_matrix(M)
    if rank == 0:
        return RecoveryResult([], [], float(np.max(np.abs(moments), initial=0.0)), 0)

    H0 = np.array([[moments[i + j] for j in range(rank)] for i in range(n - rank)])
    H1 = np.array([[moments[i + j + 1] for j in range(rank)] for i in range(n - rank)])
    condition = {'hankel': _condition(H0)}
    if condition['hankel'] > RECOVERY_CONDITION_LIMIT:
        logger.error(f"❌ Hankel pencil ill-conditioned: {condition['hankel']:.3e}")
        raise RecoveryError("ill-conditioned Hankel pencil", condition)
    pencil = linalg.lstsq(H0, H1)[0]
    points = linalg.eigvals(pencil)

    merged = 0
    kept: List[complex] = []
    for p in sorted(points, key=lambda v: (v.real, v.imag)):
        close = next((i for i, q in enumerate(kept) if abs(p - q) < Config.RECOVERY_MERGE_TOL), None)
        if close is None:
            kept.append(complex(p))
        else:
            kept[close] = 0.5 * (kept[close] + complex(p))
            merged += 1
    if merged:
        logger.warning(f"⚠️  Merged {merged} near-coincident recovered points")

    pts = np.array(kept)
    coeffs, residual = _fit_coefficients(pts, moments)
    condition['vandermonde'] = _condition(np.vander(pts, n, increasing=True).T)
    logger.info(f"✅ Recovered {len(kept)} point masses, residual {residual:.2e}")
    return RecoveryResult(
        points=[complex(p) for p in pts],
        coefficients=[complex(c) for c in coeffs],
        residual=residual,
        rank=rank,
        condition=condition,
        merged=merged,
    )
