"""Brute-force diagonal enumeration and constructive witnesses."""

from oracle.enumerate import CrossCheckReport, OracleResult, cross_check, enumerate_diagonals
from oracle.witness import DiagonalWitness, concat_witnesses, reduce_to_canonical, verify_witness

__all__ = [
    "CrossCheckReport",
    "DiagonalWitness",
    "OracleResult",
    "concat_witnesses",
    "cross_check",
    "enumerate_diagonals",
    "reduce_to_canonical",
    "verify_witness",
]
