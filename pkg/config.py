import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

import constants


class Settings(BaseModel):
    """Budgets and runtime switches, read from the environment."""

    max_order: int = Field(
        default=constants.DEFAULT_MAX_ORDER,
        description="Largest order n for the full transition matrix",
    )
    allow_n7: bool = Field(
        default=False, description="Permit the full transition matrix at order 7"
    )
    dense_cap: int = Field(
        default=constants.DEFAULT_DENSE_CAP,
        description="Largest matrix order n^n for dense powers",
    )
    memory_bytes: int = Field(
        default=constants.DEFAULT_MEMORY_BYTES,
        description="Memory budget for the transition matrix build, in bytes",
    )
    oracle_budget: int = Field(
        default=constants.DEFAULT_ORACLE_BUDGET,
        description="Largest number n!^d of collections the oracle enumerates",
    )
    oracle_seconds: float = Field(
        default=constants.DEFAULT_ORACLE_SECONDS,
        description="Wall-clock guard for oracle enumeration",
    )
    power_splits: int = Field(
        default=constants.DEFAULT_POWER_SPLITS,
        description="Largest number of sub-multiset splits examined for P^k",
    )
    orbit_max_order: int = Field(
        default=constants.DEFAULT_ORBIT_MAX_ORDER,
        description="Largest order for the multiset-orbit chain",
    )
    threads: int = Field(default=constants.DEFAULT_THREADS, ge=1)
    cache_dir: Optional[str] = Field(
        default=None, description="Directory for cached transition matrices"
    )
    log_level: str = Field(default=constants.DEFAULT_LOG_LEVEL)
    seed: int = Field(default=0, description="Seed for randomized checks")


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return default
    try:
        return int(value)
    except ValueError:
        raise constants.InputValidationError(
            f"Environment variable {name} must be an integer, got {value!r}"
        )


def _env_float(name: str, default: float) -> float:
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return default
    try:
        return float(value)
    except ValueError:
        raise constants.InputValidationError(
            f"Environment variable {name} must be a number, got {value!r}"
        )


def load_settings() -> Settings:
    """Load settings from the environment (and a `.env` file, if present)."""
    load_dotenv()
    return Settings(
        max_order=_env_int(constants.MAX_ORDER_ENV_VAR, constants.DEFAULT_MAX_ORDER),
        dense_cap=_env_int(constants.DENSE_CAP_ENV_VAR, constants.DEFAULT_DENSE_CAP),
        memory_bytes=_env_int(
            constants.MEMORY_BYTES_ENV_VAR, constants.DEFAULT_MEMORY_BYTES
        ),
        oracle_budget=_env_int(
            constants.ORACLE_BUDGET_ENV_VAR, constants.DEFAULT_ORACLE_BUDGET
        ),
        oracle_seconds=_env_float(
            constants.ORACLE_SECONDS_ENV_VAR, constants.DEFAULT_ORACLE_SECONDS
        ),
        power_splits=_env_int(
            constants.POWER_SPLITS_ENV_VAR, constants.DEFAULT_POWER_SPLITS
        ),
        orbit_max_order=_env_int(
            constants.ORBIT_MAX_ORDER_ENV_VAR, constants.DEFAULT_ORBIT_MAX_ORDER
        ),
        threads=max(1, _env_int(constants.THREADS_ENV_VAR, constants.DEFAULT_THREADS)),
        cache_dir=os.getenv(constants.CACHE_DIR_ENV_VAR) or None,
        log_level=os.getenv(constants.LOG_LEVEL_ENV_VAR, constants.DEFAULT_LOG_LEVEL),
    )
