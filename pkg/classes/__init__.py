"""Equivalence classes, periods and units of the transition matrix, and the checks built on them."""

from classes.checks import (
    block_parity_check,
    closure_checks,
    group_class_description,
    product_checks,
    u1_closure_experiment,
    unit_census,
)
from classes.convergence import ConvergenceReport, convergence_report
from classes.decompose import ClassDecomposition, EquivalenceClass, decompose, summarize

__all__ = [
    "ClassDecomposition",
    "ConvergenceReport",
    "EquivalenceClass",
    "block_parity_check",
    "closure_checks",
    "convergence_report",
    "decompose",
    "group_class_description",
    "product_checks",
    "summarize",
    "u1_closure_experiment",
    "unit_census",
]
