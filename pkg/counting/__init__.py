"""Exact counts of transversals, near transversals and diagonals in G[d], with leading-order predictions."""

from counting.counts import (
    count_diagonals,
    count_near_transversals,
    count_series,
    count_transversals,
    near_transversal_census,
)
from counting.predict import (
    AsymptoticModel,
    CountReport,
    ExistenceRule,
    build_model,
    compare,
    existence_rule,
    predict,
)

__all__ = [
    "AsymptoticModel",
    "CountReport",
    "ExistenceRule",
    "build_model",
    "compare",
    "count_diagonals",
    "count_near_transversals",
    "count_series",
    "count_transversals",
    "existence_rule",
    "near_transversal_census",
    "predict",
]
