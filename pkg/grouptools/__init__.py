"""Loop and group invariants: commutator subloop, Hall-Paige, Denes-Hermann, P^k sets."""

from grouptools.commutator import GroupAnalysis, abelianization, commutator_subgroup_closure
from grouptools.hall_paige import (
    DenesHermannReport,
    analyze_group,
    denes_hermann_check,
    hall_paige_check,
)
from grouptools.powers import PowerProfile, power_sets

__all__ = [
    "DenesHermannReport",
    "GroupAnalysis",
    "PowerProfile",
    "abelianization",
    "analyze_group",
    "commutator_subgroup_closure",
    "denes_hermann_check",
    "hall_paige_check",
    "power_sets",
]
