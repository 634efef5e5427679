import logging
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field
from sympy import multiplicity

from algebra.cayley import CayleyTable
from algebra.probes import find_identity, is_associative
from constants import ConsistencyError, StructureError
from grouptools.commutator import GroupAnalysis, abelianization

logger = logging.getLogger(__name__)


class DenesHermannReport(BaseModel):
    """Products of all orderings of the group elements, compared against G' and gG'."""

    p1: Tuple[int, ...] = Field(..., description="P(G), 1-based")
    matches: str = Field(..., description="Either \"G'\" or \"gG'\"")
    coset: Tuple[int, ...] = Field(..., description="The coset P(G) was matched against")


def _require_group(G: CayleyTable) -> int:
    identity = find_identity(G)
    if identity is None or not is_associative(G):
        raise StructureError("the table is not a group")
    return identity


def element_order(G: CayleyTable, x: int, identity: int) -> int:
    order, power = 1, x
    while power != identity:
        power = G.multiply(power, x)
        order += 1
    return order


def element_power(G: CayleyTable, x: int, k: int, identity: int) -> int:
    result = identity
    for _ in range(k):
        result = G.multiply(result, x)
    return result


def hall_paige_check(G: CayleyTable) -> Tuple[bool, Optional[int]]:
    """Decide the Hall-Paige condition for a group.

    With 2^a exactly dividing n, the Sylow 2-subgroups are cyclic iff some
    element has order 2^a. The smallest such element x is used.

    Returns:
        (hall_paige, involution_g) where involution_g = x^(2^(a-1)) when the condition fails
    """
    identity = _require_group(G)
    a = int(multiplicity(2, G.n))
    if a == 0:
        return True, None
    target = 2**a
    for x in G.symbols:
        if element_order(G, x, identity) == target:
            g = element_power(G, x, 2 ** (a - 1), identity)
            logger.info(f"Cyclic Sylow 2-subgroup generated by {x}; involution {g}")
            return False, g
    return True, None


def analyze_group(G: CayleyTable) -> GroupAnalysis:
    """Abelianization for loops, completed with the Hall-Paige verdict for groups."""
    analysis = abelianization(G)
    if not analysis.is_group:
        return analysis
    hall_paige, involution = hall_paige_check(G)
    if involution is not None and involution in analysis.commutator:
        raise ConsistencyError(f"involution {involution} lies in the commutator subgroup")
    return analysis.model_copy(update={"hall_paige": hall_paige, "involution_g": involution})


def _bits(mask: int) -> List[int]:
    return [x for x in range(mask.bit_length()) if mask >> x & 1]


def ordering_products(G: CayleyTable) -> Tuple[int, ...]:
    """P(G): left-nested products of all orderings of all n elements, by subset DP.

    reach[S] is the set (bitmask) of products of orderings of the subset S.
    """
    n = G.n
    t = G.zero_based.tolist()
    reach = [0] * (1 << n)
    for x in range(n):
        reach[1 << x] = 1 << x
    for mask in range(1, 1 << n):
        if mask & (mask - 1) == 0:
            continue
        achieved = 0
        for last in _bits(mask):
            for prefix in _bits(reach[mask ^ (1 << last)]):
                achieved |= 1 << t[prefix][last]
        reach[mask] = achieved
    return tuple(x + 1 for x in _bits(reach[(1 << n) - 1]))


def denes_hermann_check(
    G: CayleyTable, analysis: Optional[GroupAnalysis] = None
) -> DenesHermannReport:
    """Compute P(G) and verify it is G' (Hall-Paige) or gG' (otherwise).

    Raises:
        StructureError: not a group
        ConsistencyError: P(G) is not the predicted coset
    """
    _require_group(G)
    if analysis is None or analysis.hall_paige is None:
        analysis = analyze_group(G)
    p1 = ordering_products(G)
    if analysis.hall_paige:
        matches, coset = "G'", analysis.commutator
    else:
        g = analysis.involution_g
        matches = "gG'"
        coset = tuple(sorted(G.multiply(g, c) for c in analysis.commutator))
    if p1 != coset:
        logger.error(f"P(G) = {p1} but the predicted coset {matches} is {coset}")
        raise ConsistencyError(f"P(G) = {p1} differs from {matches} = {coset}")
    return DenesHermannReport(p1=p1, matches=matches, coset=coset)
