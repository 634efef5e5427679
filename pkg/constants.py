from typing import Final, Optional

TOOL_NAME: Final[str] = "iterdiag"
TOOL_VERSION: Final[str] = "0.1.0"
REPORT_SCHEMA: Final[int] = 1

# Environment variables
MAX_ORDER_ENV_VAR: Final[str] = "ITERDIAG_MAX_ORDER"
DENSE_CAP_ENV_VAR: Final[str] = "ITERDIAG_DENSE_CAP"
ORACLE_BUDGET_ENV_VAR: Final[str] = "ITERDIAG_ORACLE_BUDGET"
ORACLE_SECONDS_ENV_VAR: Final[str] = "ITERDIAG_ORACLE_SECONDS"
POWER_SPLITS_ENV_VAR: Final[str] = "ITERDIAG_POWER_SPLITS"
ORBIT_MAX_ORDER_ENV_VAR: Final[str] = "ITERDIAG_ORBIT_MAX_ORDER"
THREADS_ENV_VAR: Final[str] = "ITERDIAG_THREADS"
CACHE_DIR_ENV_VAR: Final[str] = "ITERDIAG_CACHE_DIR"
LOG_LEVEL_ENV_VAR: Final[str] = "ITERDIAG_LOG_LEVEL"
MEMORY_BYTES_ENV_VAR: Final[str] = "ITERDIAG_MEMORY_BYTES"

# Budgets
DEFAULT_MAX_ORDER: Final[int] = 6
HARD_MAX_ORDER: Final[int] = 7
DEFAULT_DENSE_CAP: Final[int] = 256
DEFAULT_MEMORY_BYTES: Final[int] = 4 * 2**30
DEFAULT_ORACLE_BUDGET: Final[int] = 10**7
DEFAULT_ORACLE_SECONDS: Final[float] = 60.0
DEFAULT_POWER_SPLITS: Final[int] = 5_000_000
DEFAULT_ORBIT_MAX_ORDER: Final[int] = 8
DEFAULT_THREADS: Final[int] = 1
DEFAULT_LOG_LEVEL: Final[str] = "WARNING"

# Sampled closure checks switch on at this order
CLOSURE_SAMPLE_ORDER: Final[int] = 5
CLOSURE_SAMPLES: Final[int] = 1000

# Transition cache
CACHE_MAGIC: Final[bytes] = b"ITDT"
CACHE_VERSION: Final[int] = 1

LOG_FORMAT: Final[str] = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# CLI exit codes
EXIT_OK: Final[int] = 0
EXIT_VALIDATION: Final[int] = 2
EXIT_BUDGET: Final[int] = 3
EXIT_CONSISTENCY: Final[int] = 4
EXIT_USAGE: Final[int] = 64

# Counting kinds
KIND_TRANSVERSAL: Final[str] = "transversal"
KIND_NEAR: Final[str] = "near"
KIND_DIAGONAL: Final[str] = "diagonal"

# Existence rule labels
RULE_ALL_D: Final[str] = "all_d"
RULE_EVEN_D: Final[str] = "even_d_only"
RULE_THRESHOLD: Final[str] = "threshold"


# Errors
class InputValidationError(Exception):
    """Custom exception for input validation errors"""

    pass


class CayleyFormatError(InputValidationError):
    """Malformed Cayley table text."""

    pass


class LatinSquareError(InputValidationError):
    """A row or column of a table repeats a symbol."""

    def __init__(self, axis: str, index: int, symbol: int):
        self.axis = axis
        self.index = index
        self.symbol = symbol
        super().__init__(f"{axis} {index} repeats symbol {symbol}")


class StructureError(InputValidationError):
    """The table lacks the algebraic structure an operation requires."""

    pass


class BudgetExceededError(Exception):
    """A computation would exceed a configured memory, state or time budget."""

    def __init__(self, message: str, estimate: Optional[int] = None):
        self.estimate = estimate
        super().__init__(message)


class ConsistencyError(Exception):
    """A proved structural statement failed to hold; always an internal bug."""

    pass


class CacheFormatError(Exception):
    """A transition cache file has the wrong magic, version or order."""

    pass
