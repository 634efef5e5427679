"""Transition matrix, exact propagation, the lumped multiset chain and isotopy relations."""

from transition.isotopy import IsotopyRelationReport, isotopy_relation_check
from transition.matrix import TransitionMatrix, build_transition
from transition.orbits import OrbitChain
from transition.propagate import CountVector, dense_power, propagate, propagate_range, propagate_steps

__all__ = [
    "CountVector",
    "IsotopyRelationReport",
    "OrbitChain",
    "TransitionMatrix",
    "build_transition",
    "dense_power",
    "isotopy_relation_check",
    "propagate",
    "propagate_range",
    "propagate_steps",
]
