"""
Custom exceptions for the Toeplitz rank laboratory
"""
from typing import Any, Dict, Optional


class ToeplitzLabError(Exception):
    """Base exception for the application"""

    pass


class ValidationError(ToeplitzLabError):
    """Input validation error"""

    pass


class ConfigurationError(ToeplitzLabError):
    """Configuration related error"""

    def __init__(
        self,
        message: str,
        key: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        self.message = message
        self.key = key
        self.line = line
        self.column = column
        super().__init__(self.message)

    def __str__(self) -> str:
        where = []
        if self.key:
            where.append(f"key '{self.key}'")
        if self.line is not None:
            where.append(f"line {self.line}, column {self.column}")
        return f"{self.message} ({', '.join(where)})" if where else self.message


class DomainError(ToeplitzLabError):
    """Point or support lies outside the admissible domain"""

    pass


class QuadratureError(ToeplitzLabError):
    """Quadrature rule too weak for the declared polynomial degree"""

    pass


class BudgetExceededError(ToeplitzLabError):
    """Brute-force expansion would exceed the configured budget"""

    def __init__(self, message: str, estimate: int, budget: int):
        self.message = message
        self.estimate = estimate
        self.budget = budget
        super().__init__(f"{message}: estimated {estimate} terms, budget {budget}")


class RankExceededError(ToeplitzLabError):
    """Numerical rank larger than the caller allowed"""

    def __init__(self, rank: int, limit: int):
        self.rank = rank
        self.limit = limit
        super().__init__(f"numerical rank {rank} exceeds limit {limit}")


class RecoveryError(ToeplitzLabError):
    """Point-mass recovery failed"""

    def __init__(self, message: str, condition: Optional[Dict[str, Any]] = None):
        self.message = message
        self.condition = condition or {}
        super().__init__(self.message)


class GridResolutionError(ToeplitzLabError):
    """Grid does not resolve the function"""

    pass


class BasisBreakdownError(ToeplitzLabError):
    """Gram-Schmidt lost linear independence"""

    pass


class PropertyFailure(ToeplitzLabError):
    """A declared property did not hold"""

    pass
