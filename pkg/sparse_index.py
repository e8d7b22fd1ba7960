"""
🧮 Sparse index sets - directions, line densities, N-sparseness and Z-sets

All densities are finite-horizon measurements; verdicts are flagged approximate.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from config import Config
from constants import SPARSE_SAMPLE_DEGREE
from exceptions import ValidationError
from numeric_core import MultiIndex, graded_lex

logger = logging.getLogger(__name__)

IndexLike = Union[MultiIndex, int, Sequence[int]]


@dataclass(frozen=True)
class Direction:
    """Ненулев мултииндекс γ"""

    gamma: MultiIndex

    def __post_init__(self) -> None:
        gamma = MultiIndex.coerce(self.gamma)
        if gamma.order == 0:
            raise ValidationError("a direction must have a nonzero component")
        object.__setattr__(self, 'gamma', gamma)

    @classmethod
    def of(cls, *components: int) -> 'Direction':
        return cls(MultiIndex.of(*components))

    @property
    def dimension(self) -> int:
        return self.gamma.dimension


@dataclass(frozen=True)
class IndexSet:
    """
    J ⊂ Z₊^d, зададено с предикат за принадлежност

    Attributes:
        predicate: Membership test on MultiIndex values of the set's dimension
        dimension: d
        description: Human-readable constructor trail, stored in reports
    """

    predicate: Callable[[MultiIndex], bool]
    dimension: int = 1
    description: str = ''

    def contains(self, index: IndexLike) -> bool:
        alpha = MultiIndex.coerce(index)
        if alpha.dimension != self.dimension:
            raise ValidationError(f"index of dimension {alpha.dimension} tested against a {self.dimension}-d set")
        return bool(self.predicate(alpha))

    def __contains__(self, index: IndexLike) -> bool:
        return self.contains(index)

    def enumerate(self, bound: int) -> List[MultiIndex]:
        """Елементите с |α| ≤ bound в градуиран лексикографски ред"""
        return [alpha for alpha in graded_lex(self.dimension, bound) if self.predicate(alpha)]

    # Named constructors

    @classmethod
    def modulus(cls, m: int, r: int = 0, dimension: int = 1) -> 'IndexSet':
        """{α : |α| ≡ r (mod m)}"""
        if m < 1:
            raise ValidationError("modulus must be >= 1")
        return cls(lambda a: a.order % m == r % m, dimension, f"modulus(m={m}, r={r})")

    @classmethod
    def powers(cls, p: int = 2, dimension: int = 1) -> 'IndexSet':
        """{α : |α| = n^p за някое n ≥ 0}"""
        if p < 1:
            raise ValidationError("power must be >= 1")

        def is_power(a: MultiIndex) -> bool:
            k = a.order
            root = int(round(k ** (1.0 / p)))
            return any(c >= 0 and c ** p == k for c in (root - 1, root, root + 1))

        return cls(is_power, dimension, f"powers(p={p})")

    @classmethod
    def explicit(cls, members: Iterable[IndexLike], dimension: Optional[int] = None) -> 'IndexSet':
        items = frozenset(MultiIndex.coerce(m) for m in members)
        dims = {a.dimension for a in items}
        if dimension is None:
            dimension = dims.pop() if len(dims) == 1 else 1
        if any(a.dimension != dimension for a in items):
            raise ValidationError("explicit members have mixed dimensions")
        return cls(lambda a: a in items, dimension, f"explicit({len(items)} members)")

    @classmethod
    def empty(cls, dimension: int = 1) -> 'IndexSet':
        return cls(lambda a: False, dimension, 'empty')

    @classmethod
    def everything(cls, dimension: int = 1) -> 'IndexSet':
        return cls(lambda a: True, dimension, 'everything')

    def complement(self) -> 'IndexSet':
        return IndexSet(lambda a: not self.predicate(a), self.dimension, f"complement({self.description})")

    def union(self, *others: 'IndexSet') -> 'IndexSet':
        sets = (self,) + others
        if any(s.dimension != self.dimension for s in sets):
            raise ValidationError("union of sets with different dimensions")
        names = ', '.join(s.description for s in sets)
        return IndexSet(lambda a: any(s.predicate(a) for s in sets), self.dimension, f"union({names})")

    def shift(self, offset: IndexLike) -> 'IndexSet':
        """J + β = {α : α − β ∈ J}"""
        beta = MultiIndex.coerce(offset)
        if beta.dimension != self.dimension:
            raise ValidationError("shift offset has the wrong dimension")

        def shifted(a: MultiIndex) -> bool:
            base = a.minus(beta)
            return base is not None and self.predicate(base)

        return IndexSet(shifted, self.dimension, f"shift({self.description}, {list(beta)})")

    def translate_back(self, offset: IndexLike) -> 'IndexSet':
        """J − β = {α : α + β ∈ J}"""
        beta = MultiIndex.coerce(offset)
        return IndexSet(lambda a: self.predicate(a + beta), self.dimension, f"({self.description}) - {list(beta)}")


def index_set_from_dict(data: Dict[str, Any], dimension: int = 1) -> IndexSet:
    """Именуваните конструктори от конфигурацията"""
    kind = data.get('kind')
    dimension = int(data.get('dimension', dimension))
    if kind == 'modulus':
        return IndexSet.modulus(int(data['m']), int(data.get('r', 0)), dimension)
    if kind == 'powers':
        return IndexSet.powers(int(data.get('p', 2)), dimension)
    if kind == 'explicit':
        return IndexSet.explicit(data.get('members', []), dimension)
    if kind == 'empty':
        return IndexSet.empty(dimension)
    if kind == 'everything':
        return IndexSet.everything(dimension)
    if kind == 'complement':
        return index_set_from_dict(data['of'], dimension).complement()
    if kind == 'union':
        sets = [index_set_from_dict(s, dimension) for s in data.get('sets', [])]
        if not sets:
            raise ValidationError("union needs at least one set")
        return sets[0].union(*sets[1:])
    if kind == 'shift':
        return index_set_from_dict(data['of'], dimension).shift(data['by'])
    raise ValidationError(f"unknown index set kind: {kind!r}")


def direction_support(gamma: Direction) -> Set[int]:
    """n(γ) = {j : γ_j = 0}, координатите се номерират от 1"""
    return {j + 1 for j, g in enumerate(gamma.gamma) if g == 0}


def covers_all_coordinates(dirs: Sequence[Direction], d: int) -> bool:
    if not dirs:
        raise ValidationError("at least one direction is required")
    covered: Set[int] = set()
    for gamma in dirs:
        covered |= direction_support(gamma)
    return covered == set(range(1, d + 1))


def _check(J: IndexSet, gamma: Direction, alpha: MultiIndex) -> None:
    if not (J.dimension == gamma.dimension == alpha.dimension):
        raise ValidationError("index set, direction and base point differ in dimension")


def line_density(J: IndexSet, gamma: Direction, alpha: IndexLike, horizon: int) -> float:
    """
    #{t ∈ [0, horizon) : α + tγ ∈ J} / horizon

    Args:
        J: Index set
        gamma: Direction of the lattice ray
        alpha: Base point of the ray
        horizon: Number of ray points counted (>= 1)

    Returns:
        Density in [0, 1]
    """
    if horizon < 1:
        raise ValidationError("horizon must be >= 1")
    base = MultiIndex.coerce(alpha)
    _check(J, gamma, base)
    count = sum(1 for t in range(horizon) if J.predicate(base.along(gamma.gamma, t)))
    return count / horizon


def density_refinement(
    J: IndexSet,
    gamma: Direction,
    alpha: IndexLike,
    horizons: Sequence[int],
) -> List[Tuple[int, float]]:
    """Профил (horizon, density) за нарастващи хоризонти"""
    return [(h, line_density(J, gamma, alpha, h)) for h in sorted(horizons)]


@dataclass
class SparsenessVerdict:
    sparse: bool
    N: int
    max_density: float
    margin: float
    margin_guard: float
    horizon: int
    worst_alpha: Optional[MultiIndex] = None
    approximate: bool = True
    densities: Dict[Tuple[int, ...], float] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.sparse

    def as_dict(self) -> Dict[str, Any]:
        return {
            'sparse': self.sparse,
            'N': self.N,
            'max_density': self.max_density,
            'margin': self.margin,
            'margin_guard': self.margin_guard,
            'horizon': self.horizon,
            'worst_alpha': list(self.worst_alpha) if self.worst_alpha is not None else None,
            'approximate': self.approximate,
        }


def is_N_sparse(
    J: IndexSet,
    gamma: Direction,
    N: int,
    alphas: Optional[Sequence[IndexLike]] = None,
    horizon: Optional[int] = None,
    threads: Optional[int] = None,
) -> SparsenessVerdict:
    """
    Крайно-хоризонтна проверка: max density < 1/N − 2/horizon

    The margin reported is 1/N − max density; it plays the role of the slack
    ε in "(N + ε)-sparse".
    """
    if N < 1:
        raise ValidationError("N must be >= 1")
    horizon = Config.SPARSE_HORIZON if horizon is None else horizon
    sample = (
        graded_lex(J.dimension, SPARSE_SAMPLE_DEGREE)
        if alphas is None
        else [MultiIndex.coerce(a) for a in alphas]
    )
    if not sample:
        raise ValidationError("the base point sample is empty")
    workers = max(1, threads or Config.THREADS)

    def measure(a: MultiIndex) -> float:
        return line_density(J, gamma, a, horizon)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(measure, sample))
    else:
        values = [measure(a) for a in sample]

    worst = max(range(len(sample)), key=lambda i: values[i])
    max_density = values[worst]
    guard = 2.0 / horizon
    verdict = SparsenessVerdict(
        sparse=max_density < 1.0 / N - guard,
        N=N,
        max_density=max_density,
        margin=1.0 / N - max_density,
        margin_guard=guard,
        horizon=horizon,
        worst_alpha=sample[worst],
        densities={tuple(a): v for a, v in zip(sample, values)},
    )
    logger.info(
        f"📊 {J.description}: max density {max_density:.4f} over {len(sample)} rays, "
        f"{N}-sparse={verdict.sparse} (horizon {horizon}, approximate)"
    )
    return verdict


@dataclass
class ZSetReport:
    members: List[int]
    density: float
    harmonic_sum: float
    horizon: int

    def as_dict(self) -> Dict[str, Any]:
        return {
            'count': len(self.members),
            'density': self.density,
            'harmonic_sum': self.harmonic_sum,
            'horizon': self.horizon,
            'head': self.members[:50],
        }


def zset(
    J: IndexSet,
    alphas: Sequence[IndexLike],
    betas: Sequence[IndexLike],
    gamma: Direction,
    horizon: int,
) -> ZSetReport:
    """
    t ∈ [0, horizon] с α_j + tγ ∉ J и β_j + tγ ∉ J за всички j

    The harmonic partial sum Σ(t+1)⁻¹ over the members is reported as a
    divergence indicator only.
    """
    if len(alphas) != len(betas) or not alphas:
        raise ValidationError("alphas and betas must be non-empty and of equal length")
    if horizon < 0:
        raise ValidationError("horizon must be >= 0")
    bases = [MultiIndex.coerce(a) for a in alphas] + [MultiIndex.coerce(b) for b in betas]
    for b in bases:
        _check(J, gamma, b)
    members = [
        t for t in range(horizon + 1)
        if not any(J.predicate(b.along(gamma.gamma, t)) for b in bases)
    ]
    density = len(members) / (horizon + 1)
    harmonic = math.fsum(1.0 / (t + 1) for t in members)
    logger.debug(f"🔍 Z-set: {len(members)} members up to {horizon}, density {density:.4f}")
    return ZSetReport(members, density, harmonic, horizon)
