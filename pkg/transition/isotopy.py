import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field

from algebra.cayley import CayleyTable
from algebra.isotopy import Isotopy, apply_isotopy
from algebra.tuples import symbol_action_codes
from constants import ConsistencyError, StructureError
from transition.matrix import TransitionMatrix, build_transition

logger = logging.getLogger(__name__)


class IsotopyRelationReport(BaseModel):
    component: str = Field(..., description="alpha, beta, gamma or identity")
    relation: str
    pairs_checked: int
    holds: bool


def isotopy_relation_check(
    G: CayleyTable,
    H: CayleyTable,
    iso: Isotopy,
    T: Optional[TransitionMatrix] = None,
    R: Optional[TransitionMatrix] = None,
) -> IsotopyRelationReport:
    """Compare the transition matrices T of G and R of H = iso(G).

    Rows: t(U, V) = r(alpha(U), V). Columns: T = R. Symbols: t(U, V) = r(U, gamma(V)).

    Raises:
        StructureError: H is not iso(G), or more than one component is nontrivial
        ConsistencyError: the relation fails
    """
    components = iso.nontrivial_components()
    if len(components) > 1:
        raise StructureError(f"isotopy must have a single nontrivial component, got {components}")
    if apply_isotopy(G, iso) != H:
        raise StructureError("H is not the image of G under the isotopy")
    T = T if T is not None else build_transition(G)
    R = R if R is not None else build_transition(H)

    component = components[0] if components else "identity"
    if component == "alpha":
        relation = "t(U,V) = r(alpha(U),V)"
        alpha_codes = symbol_action_codes(G.n, iso.alpha.zero_based)
        holds = bool(np.array_equal(R.targets[alpha_codes], T.targets))
    elif component == "gamma":
        relation = "t(U,V) = r(U,gamma(V))"
        gamma_codes = symbol_action_codes(G.n, iso.gamma.zero_based)
        holds = bool(np.array_equal(np.sort(gamma_codes[T.targets], axis=1), R.targets))
    else:
        relation = "T = R"
        holds = bool(np.array_equal(T.targets, R.targets))

    if not holds:
        logger.error(f"Isotopy relation {relation} failed")
        raise ConsistencyError(f"isotopy relation {relation} does not hold")
    return IsotopyRelationReport(
        component=component, relation=relation, pairs_checked=T.size**2, holds=holds
    )
