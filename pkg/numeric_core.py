"""
🔢 Numeric core - arithmetic substrate for the Toeplitz laboratory

Multi-indices, exact Gaussian rationals, Gauss-Legendre rules,
singular values and rank decisions (tolerance-based and exact).

Примери:
    rule = gauss_legendre(20, (0.0, 1.0))
    rule.integrate(lambda r: r ** 30)      # 1/31
    numerical_rank(np.diag([1.0, 1e-14]))  # 1
    exact_rank([[1, 2], [2, 4]])           # 1
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import linalg

from config import Config
from exceptions import ValidationError

logger = logging.getLogger(__name__)

Number = Union[int, float, complex, Fraction, 'ExactScalar']


@dataclass(frozen=True)
class MultiIndex:
    """α ∈ Z₊^d"""

    components: Tuple[int, ...]

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        if not all(isinstance(c, (int, np.integer)) and c >= 0 for c in comps):
            raise ValidationError(f"multi-index components must be non-negative integers: {comps}")
        object.__setattr__(self, 'components', tuple(int(c) for c in comps))

    @classmethod
    def of(cls, *components: int) -> 'MultiIndex':
        return cls(tuple(components))

    @classmethod
    def zero(cls, dimension: int) -> 'MultiIndex':
        return cls((0,) * dimension)

    @classmethod
    def coerce(cls, value: Union['MultiIndex', int, Sequence[int]]) -> 'MultiIndex':
        if isinstance(value, MultiIndex):
            return value
        if isinstance(value, (int, np.integer)):
            return cls((int(value),))
        return cls(tuple(value))

    @property
    def order(self) -> int:
        """|α|"""
        return sum(self.components)

    @property
    def dimension(self) -> int:
        return len(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[int]:
        return iter(self.components)

    def __getitem__(self, i: int) -> int:
        return self.components[i]

    def __add__(self, other: 'MultiIndex') -> 'MultiIndex':
        self._check_dimension(other)
        return MultiIndex(tuple(a + b for a, b in zip(self.components, other.components)))

    def minus(self, other: 'MultiIndex') -> Optional['MultiIndex']:
        """α − β, or None when a component would go negative"""
        self._check_dimension(other)
        diff = tuple(a - b for a, b in zip(self.components, other.components))
        if any(c < 0 for c in diff):
            return None
        return MultiIndex(diff)

    def along(self, direction: 'MultiIndex', t: int) -> 'MultiIndex':
        """α + tγ"""
        self._check_dimension(direction)
        return MultiIndex(tuple(a + t * g for a, g in zip(self.components, direction.components)))

    def falling_factorial(self, other: 'MultiIndex') -> int:
        """α!/(α−a)! (0 when a ⊄ α)"""
        self._check_dimension(other)
        value = 1
        for a, b in zip(self.components, other.components):
            if b > a:
                return 0
            value *= math.factorial(a) // math.factorial(a - b)
        return value

    def _check_dimension(self, other: 'MultiIndex') -> None:
        if len(other) != len(self):
            raise ValidationError(f"dimension mismatch: {self.components} vs {other.components}")

    def __repr__(self) -> str:
        return f"MultiIndex{self.components}"


def graded_lex(dimension: int, max_degree: int) -> List[MultiIndex]:
    """
    Всички α с |α| ≤ max_degree в градуиран лексикографски ред

    Within one degree the first component decreases: (1,0) before (0,1).
    """
    if dimension < 1 or max_degree < 0:
        raise ValidationError("dimension must be >= 1 and max_degree >= 0")
    result = []
    for degree in range(max_degree + 1):
        level = [c for c in product(range(degree, -1, -1), repeat=dimension) if sum(c) == degree]
        result.extend(MultiIndex(c) for c in level)
    return result


@dataclass(frozen=True, eq=False)
class ExactScalar:
    """Gaussian rational re + i·im with arbitrary-precision parts"""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if type(self.re) is not Fraction:
            object.__setattr__(self, 're', Fraction(self.re))
        if type(self.im) is not Fraction:
            object.__setattr__(self, 'im', Fraction(self.im))

    @classmethod
    def coerce(cls, value: Any) -> 'ExactScalar':
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (bool,)):
            return cls(Fraction(int(value)))
        if isinstance(value, (int, np.integer, Fraction)):
            return cls(Fraction(value))
        if isinstance(value, (float, np.floating)):
            if not math.isfinite(value):
                raise ValidationError(f"non-finite value {value!r} cannot be made exact")
            return cls(Fraction(float(value)))
        if isinstance(value, (complex, np.complexfloating)):
            return cls(Fraction(float(value.real)), Fraction(float(value.imag)))
        if isinstance(value, str):
            return parse_exact(value)
        raise ValidationError(f"cannot convert {value!r} to an exact scalar")

    @classmethod
    def one(cls) -> 'ExactScalar':
        return cls(Fraction(1))

    @classmethod
    def i(cls) -> 'ExactScalar':
        return cls(Fraction(0), Fraction(1))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> 'ExactScalar':
        return ExactScalar(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other: Any) -> 'ExactScalar':
        o = _exact_or_none(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> 'ExactScalar':
        return ExactScalar(-self.re, -self.im)

    def __sub__(self, other: Any) -> 'ExactScalar':
        o = _exact_or_none(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Any) -> 'ExactScalar':
        o = _exact_or_none(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> 'ExactScalar':
        o = _exact_or_none(other)
        if o is None:
            return NotImplemented
        if o.im == 0:
            return ExactScalar(self.re * o.re, self.im * o.re)
        return ExactScalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> 'ExactScalar':
        o = _exact_or_none(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by exact zero")
        n = o.norm2()
        num = self * o.conjugate()
        return ExactScalar(num.re / n, num.im / n)

    def __rtruediv__(self, other: Any) -> 'ExactScalar':
        o = _exact_or_none(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, exponent: int) -> 'ExactScalar':
        if not isinstance(exponent, (int, np.integer)):
            return NotImplemented
        if exponent < 0:
            return ExactScalar.one() / (self ** (-exponent))
        result = ExactScalar.one()
        base = self
        e = int(exponent)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other: Any) -> bool:
        o = _exact_or_none(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"ExactScalar({self.re})"
        return f"ExactScalar({self.re} + {self.im}i)"


def _exact_or_none(value: Any) -> Optional[ExactScalar]:
    try:
        return ExactScalar.coerce(value)
    except ValidationError:
        return None


def parse_exact(text: str) -> ExactScalar:
    """Парсва 'p/q' или 'p/q,r/s' (реална, имагинерна част) до ExactScalar"""
    parts = [p.strip() for p in text.split(',')]
    try:
        if len(parts) == 1:
            return ExactScalar(Fraction(parts[0]))
        if len(parts) == 2:
            return ExactScalar(Fraction(parts[0]), Fraction(parts[1]))
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"invalid exact scalar {text!r}: {e}") from e
    raise ValidationError(f"invalid exact scalar {text!r}")


def is_exact(value: Any) -> bool:
    """True за стойности без загуба на точност (int, Fraction, ExactScalar)"""
    return isinstance(value, (ExactScalar, Fraction, int, np.integer)) and not isinstance(value, bool)


def to_complex(value: Any) -> complex:
    return complex(value)


def to_complex_matrix(matrix: Any) -> np.ndarray:
    """Преобразува (точна или числова) матрица в complex ndarray"""
    if isinstance(matrix, np.ndarray) and matrix.dtype != object:
        return matrix.astype(complex)
    rows = [[complex(v) for v in row] for row in matrix]
    return np.array(rows, dtype=complex).reshape(len(rows), len(rows[0]) if rows else 0)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Legendre nodes/weights mapped to [a, b]"""

    nodes: np.ndarray
    weights: np.ndarray
    interval: Tuple[float, float]

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def degree(self) -> int:
        """Highest polynomial degree integrated exactly"""
        return 2 * len(self.nodes) - 1

    def integrate(self, f: Callable[[np.ndarray], Any]) -> complex:
        values = np.asarray(f(self.nodes))
        total = np.dot(self.weights, values)
        return complex(total) if np.iscomplexobj(total) else float(total)


def gauss_legendre(n: int, interval: Tuple[float, float] = (-1.0, 1.0)) -> QuadratureRule:
    """
    Gauss-Legendre правило с n възела върху [a, b]

    Args:
        n: Number of nodes (exact for degree ≤ 2n−1)
        interval: (a, b) with a < b

    Raises:
        ValidationError: n < 1 or invalid interval
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValidationError(f"number of nodes must be a positive integer, got {n!r}")
    a, b = float(interval[0]), float(interval[1])
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise ValidationError(f"invalid interval [{a}, {b}]")
    x, w = leggauss(int(n))
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return QuadratureRule(nodes=half * x + mid, weights=half * w, interval=(a, b))


def singular_values(matrix: Any) -> np.ndarray:
    """
    Сингулярни стойности в низходящ ред

    Returns:
        Array of length min(rows, cols), non-increasing

    Raises:
        ValidationError: matrix not 2-D or has non-finite entries
    """
    m = to_complex_matrix(matrix) if not isinstance(matrix, np.ndarray) else np.asarray(matrix)
    if m.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix, got shape {m.shape}")
    if m.dtype == object:
        m = to_complex_matrix(m)
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    if m.size == 0:
        return np.zeros(0)
    return linalg.svdvals(m)


def numerical_rank(matrix: Any, rel_tol: Optional[float] = None) -> int:
    """
    Брой σ_i > rel_tol·σ_1 (0 при нулева матрица)

    Args:
        matrix: Complex matrix
        rel_tol: Relative tolerance in (0, 1); defaults to Config.RANK_TOL
    """
    tol = Config.RANK_TOL if rel_tol is None else rel_tol
    if not 0 < tol < 1:
        raise ValidationError(f"rel_tol must lie in (0, 1), got {tol}")
    sigma = singular_values(matrix)
    if sigma.size == 0 or sigma[0] == 0:
        return 0
    return int(np.count_nonzero(sigma > tol * sigma[0]))


# Gaussian integers as (re, im) pairs of Python ints
GaussInt = Tuple[int, int]


def _g_mul(x: GaussInt, y: GaussInt) -> GaussInt:
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _g_sub(x: GaussInt, y: GaussInt) -> GaussInt:
    return (x[0] - y[0], x[1] - y[1])


def _g_exact_div(x: GaussInt, y: GaussInt) -> GaussInt:
    n = y[0] * y[0] + y[1] * y[1]
    re = x[0] * y[0] + x[1] * y[1]
    im = x[1] * y[0] - x[0] * y[1]
    q_re, r_re = divmod(re, n)
    q_im, r_im = divmod(im, n)
    if r_re or r_im:
        raise ArithmeticError("Bareiss step produced an inexact quotient")
    return (q_re, q_im)


def _integral_rows(matrix: Sequence[Sequence[Any]]) -> List[List[GaussInt]]:
    rows = []
    for row in matrix:
        entries = [ExactScalar.coerce(v) for v in row]
        scale = 1
        for e in entries:
            scale = math.lcm(scale, e.re.denominator, e.im.denominator)
        rows.append([(int(e.re * scale), int(e.im * scale)) for e in entries])
    return rows


def exact_rank(matrix: Sequence[Sequence[Any]]) -> int:
    """
    Точен ранг чрез fraction-free (Bareiss) елиминация над Z[i]

    Each row is first scaled by the lcm of its denominators so all entries are
    Gaussian integers; Bareiss divisions are then exact in Z[i].
    """
    rows = _integral_rows(matrix)
    if not rows or not rows[0]:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    prev: GaussInt = (1, 0)
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if rows[i][c] != (0, 0)), None)
        if pivot is None:
            continue
        if pivot != r:
            rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][c]
        for i in range(r + 1, n_rows):
            f = rows[i][c]
            for j in range(c + 1, n_cols):
                rows[i][j] = _g_exact_div(_g_sub(_g_mul(p, rows[i][j]), _g_mul(f, rows[r][j])), prev)
            rows[i][c] = (0, 0)
        prev = p
        r += 1
    logger.debug(f"🔍 Exact rank {r} for {n_rows}x{n_cols} matrix")
    return r


@dataclass
class SpectrumReport:
    """Singular values or eigenvalues with the rank decision that was taken"""

    values: List[complex]
    kind: str
    numerical_rank: int
    rel_tol: float
    truncation: int
    metadata: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind,
            'numerical_rank': self.numerical_rank,
            'rel_tol': self.rel_tol,
            'truncation': self.truncation,
            'values': [_json_number(v) for v in self.values],
            'metadata': self.metadata,
        }


def _json_number(v: complex) -> Any:
    v = complex(v)
    return v.real if v.imag == 0 else [v.real, v.imag]


def spectrum_report(
    matrix: Any,
    rel_tol: Optional[float] = None,
    hermitian: bool = False,
    metadata: Optional[Dict[str, Any]] = None,
) -> SpectrumReport:
    """
    Спектрален отчет: собствени стойности (ермитов случай) или сингулярни стойности

    Eigenvalues are sorted in decreasing order; the numerical rank is always
    taken from the singular values.
    """
    tol = Config.RANK_TOL if rel_tol is None else rel_tol
    m = to_complex_matrix(matrix) if not isinstance(matrix, np.ndarray) else matrix
    rank = numerical_rank(m, tol)
    if hermitian:
        values = sorted(linalg.eigvalsh(0.5 * (m + m.conj().T)).tolist(), reverse=True)
        kind = 'eigenvalues'
    else:
        values = singular_values(m).tolist()
        kind = 'singular values'
    return SpectrumReport(
        values=[complex(v) for v in values],
        kind=kind,
        numerical_rank=rank,
        rel_tol=tol,
        truncation=int(m.shape[0]),
        metadata=dict(metadata or {}),
    )
