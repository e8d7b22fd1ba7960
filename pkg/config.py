"""
⚙️ Configuration Management
Process-wide settings from the environment plus per-experiment JSON configs
"""
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from constants import (
    DEFAULT_RANK_TOL,
    EXPERIMENT_KINDS,
    HARMONIC_DEGREE,
    POINT_MERGE_TOL,
    RADIAL_QUADRATURE_POINTS,
    RECOVERY_MERGE_TOL,
    SPARSE_HORIZON,
    VANDERMONDE_BUDGET,
)
from exceptions import ConfigurationError

load_dotenv()

logger = logging.getLogger(__name__)


class Config:
    """Основна конфигурация"""

    # Numerics
    RANK_TOL = float(os.getenv('RANK_TOL', DEFAULT_RANK_TOL))
    RADIAL_QUADRATURE_POINTS = int(os.getenv('RADIAL_QUADRATURE_POINTS', RADIAL_QUADRATURE_POINTS))
    POINT_MERGE_TOL = float(os.getenv('POINT_MERGE_TOL', POINT_MERGE_TOL))
    RECOVERY_MERGE_TOL = float(os.getenv('RECOVERY_MERGE_TOL', RECOVERY_MERGE_TOL))
    HARMONIC_DEGREE = int(os.getenv('HARMONIC_DEGREE', HARMONIC_DEGREE))
    SPARSE_HORIZON = int(os.getenv('SPARSE_HORIZON', SPARSE_HORIZON))

    # Budgets and parallelism
    VANDERMONDE_BUDGET = int(os.getenv('VANDERMONDE_BUDGET', VANDERMONDE_BUDGET))
    THREADS = int(os.getenv('THREADS', 1))

    # Output
    OUTPUT_DIR = os.getenv('OUTPUT_DIR', 'results')

    # Logging
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()
    LOG_FILE = os.getenv('LOG_FILE', 'logs/toeplitz_lab.log')

    @classmethod
    def validate(cls) -> bool:
        """Валидира конфигурацията"""
        errors = []

        if not 0 < cls.RANK_TOL < 1:
            errors.append(f"❌ RANK_TOL {cls.RANK_TOL} must lie in (0, 1)")

        if cls.RADIAL_QUADRATURE_POINTS < 1:
            errors.append(f"❌ RADIAL_QUADRATURE_POINTS {cls.RADIAL_QUADRATURE_POINTS} must be >= 1")

        if cls.VANDERMONDE_BUDGET < 1:
            errors.append(f"❌ VANDERMONDE_BUDGET {cls.VANDERMONDE_BUDGET} must be >= 1")

        if cls.THREADS < 1:
            errors.append(f"❌ THREADS {cls.THREADS} must be >= 1")

        if cls.SPARSE_HORIZON < 1:
            errors.append(f"❌ SPARSE_HORIZON {cls.SPARSE_HORIZON} must be >= 1")

        if errors:
            for error in errors:
                logger.warning(error)
            return False

        return True

    @classmethod
    def log_config(cls) -> None:
        """Логира текущата конфигурация"""
        logger.info("⚙️  Toeplitz lab configuration:")
        logger.info(f"  📏 Rank tolerance: {cls.RANK_TOL:g}")
        logger.info(f"  🔢 Radial quadrature points: {cls.RADIAL_QUADRATURE_POINTS}")
        logger.info(f"  💰 Vandermonde budget: {cls.VANDERMONDE_BUDGET}")
        logger.info(f"  🧵 Threads: {cls.THREADS}")
        logger.info(f"  📁 Output directory: {cls.OUTPUT_DIR}")


_TOP_LEVEL_KEYS = {
    'kind', 'weight', 'basis', 'truncations', 'rank_tol', 'exact',
    'output_dir', 'seed', 'threads', 'params',
}


@dataclass
class ExperimentConfig:
    """One experiment as read from a JSON config file"""

    kind: str
    weight: Dict[str, Any] = field(default_factory=dict)
    basis: Dict[str, Any] = field(default_factory=dict)
    truncations: List[int] = field(default_factory=lambda: [8])
    rank_tol: float = Config.RANK_TOL
    exact: bool = False
    output_dir: str = Config.OUTPUT_DIR
    seed: int = 0
    threads: int = Config.THREADS
    params: Dict[str, Any] = field(default_factory=dict)
    source: Optional[str] = None

    def with_overrides(
        self,
        rank_tol: Optional[float] = None,
        exact: Optional[bool] = None,
        threads: Optional[int] = None,
        output_dir: Optional[str] = None,
    ) -> 'ExperimentConfig':
        """Прилага CLI флаговете върху файловата конфигурация"""
        if rank_tol is not None:
            _check_tolerance('rank_tol', rank_tol)
            self.rank_tol = rank_tol
        if exact:
            self.exact = True
        if threads is not None:
            if isinstance(threads, bool) or threads < 1:
                raise ConfigurationError("threads must be >= 1", key='threads')
            self.threads = threads
        if output_dir is not None:
            self.output_dir = output_dir
        return self


def _check_tolerance(key: str, value: Any) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not 0 < value < 1:
        raise ConfigurationError(f"tolerance must be a number in (0, 1), got {value!r}", key=key)


def _check_files(weight: Dict[str, Any], base_dir: Path) -> None:
    for key in ('values_file',):
        if key in weight:
            path = Path(weight[key])
            if not path.is_absolute():
                path = base_dir / path
            if not path.exists():
                raise ConfigurationError(f"referenced file not found: {path}", key=f"weight.{key}")
            weight[key] = str(path)


def parse_experiment_config(text: str, source: Optional[str] = None) -> ExperimentConfig:
    """
    Парсва JSON текст до ExperimentConfig

    Args:
        text: JSON document
        source: Path the text was read from (for relative file references)

    Returns:
        ExperimentConfig

    Raises:
        ConfigurationError: syntax errors carry line/column, schema errors the key
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"invalid JSON: {e.msg}", line=e.lineno, column=e.colno) from e

    if not isinstance(raw, dict):
        raise ConfigurationError("top level must be an object")

    unknown = sorted(set(raw) - _TOP_LEVEL_KEYS)
    if unknown:
        raise ConfigurationError("unknown key", key=unknown[0])

    kind = raw.get('kind')
    if kind not in EXPERIMENT_KINDS:
        raise ConfigurationError(
            f"kind must be one of {sorted(EXPERIMENT_KINDS)}, got {kind!r}", key='kind'
        )

    for key in ('weight', 'basis', 'params'):
        if key in raw and not isinstance(raw[key], dict):
            raise ConfigurationError("must be an object", key=key)

    truncations = raw.get('truncations', [8])
    if (
        not isinstance(truncations, list)
        or not truncations
        or not all(isinstance(n, int) and not isinstance(n, bool) and n >= 1 for n in truncations)
    ):
        raise ConfigurationError("must be a non-empty list of positive integers", key='truncations')

    rank_tol = raw.get('rank_tol', Config.RANK_TOL)
    _check_tolerance('rank_tol', rank_tol)

    seed = raw.get('seed', 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigurationError("must be an integer", key='seed')

    threads = raw.get('threads', Config.THREADS)
    if not isinstance(threads, int) or isinstance(threads, bool) or threads < 1:
        raise ConfigurationError("must be a positive integer", key='threads')

    exact = raw.get('exact', False)
    if not isinstance(exact, bool):
        raise ConfigurationError("must be true or false", key='exact')

    weight = dict(raw.get('weight', {}))
    base_dir = Path(source).parent if source else Path.cwd()
    _check_files(weight, base_dir)

    return ExperimentConfig(
        kind=kind,
        weight=weight,
        basis=dict(raw.get('basis', {})),
        truncations=list(truncations),
        rank_tol=float(rank_tol),
        exact=exact,
        output_dir=str(raw.get('output_dir', Config.OUTPUT_DIR)),
        seed=seed,
        threads=threads,
        params=dict(raw.get('params', {})),
        source=source,
    )


def load_experiment_config(path: str) -> ExperimentConfig:
    """Зарежда конфигурация на експеримент от файл"""
    config_path = Path(path)
    if not config_path.exists():
        raise ConfigurationError(f"config file not found: {path}")
    text = config_path.read_text(encoding='utf-8')
    config = parse_experiment_config(text, source=str(config_path))
    logger.info(f"📋 Loaded {config.kind} experiment from {path}")
    return config
