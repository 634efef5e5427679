import logging
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field
from scipy.cluster.hierarchy import DisjointSet
from sympy import multiplicity

from algebra.cayley import CayleyTable
from algebra.probes import find_identity, is_associative
from constants import ConsistencyError, StructureError

logger = logging.getLogger(__name__)


class GroupAnalysis(BaseModel):
    """Commutator subloop, its cosets and (for groups) the Hall-Paige verdict. Symbols are 1-based."""

    is_group: bool
    identity: int
    commutator: Tuple[int, ...] = Field(..., description="G' as the congruence class of the identity")
    cosets: Tuple[Tuple[int, ...], ...] = Field(..., description="Classes of the abelianization congruence")
    hall_paige: Optional[bool] = Field(default=None, description="Groups only")
    involution_g: Optional[int] = Field(
        default=None, description="Order-2 element of a cyclic Sylow 2-subgroup, non-Hall-Paige groups only"
    )
    sylow2_valuation: int = Field(..., description="a with 2^a exactly dividing n")

    def coset_index(self, x: int) -> int:
        for index, coset in enumerate(self.cosets):
            if x in coset:
                return index
        raise StructureError(f"symbol {x} lies in no coset")

    def coset_labels(self) -> List[int]:
        """0-based symbol -> coset index."""
        labels = [0] * sum(len(coset) for coset in self.cosets)
        for index, coset in enumerate(self.cosets):
            for x in coset:
                labels[x - 1] = index
        return labels


def _groups(sets: DisjointSet) -> List[List[int]]:
    return sorted((sorted(subset) for subset in sets.subsets()), key=lambda group: group[0])


def abelianization_classes(G: CayleyTable) -> List[List[int]]:
    """Classes (0-based) of the smallest congruence with a commutative, associative quotient."""
    n = G.n
    t = [list(row) for row in G.zero_based.tolist()]
    sets = DisjointSet(range(n))
    for x in range(n):
        for y in range(n):
            sets.merge(t[x][y], t[y][x])
            for z in range(n):
                sets.merge(t[x][t[y][z]], t[t[x][y]][z])

    changed = True
    while changed:
        changed = False
        for members in _groups(sets):
            representative = members[0]
            for a in members[1:]:
                for b in range(n):
                    changed |= sets.merge(t[a][b], t[representative][b])
                    changed |= sets.merge(t[b][a], t[b][representative])
    return _groups(sets)


def abelianization(G: CayleyTable) -> GroupAnalysis:
    """Commutator subloop G' and its cosets, via the abelianization congruence.

    Raises:
        StructureError: G has no identity element
    """
    identity = find_identity(G)
    if identity is None:
        raise StructureError("abelianization needs a loop: the table has no identity element")
    classes = abelianization_classes(G)
    cosets = tuple(tuple(x + 1 for x in members) for members in classes)
    commutator = next(coset for coset in cosets if identity in coset)
    if any(len(coset) != len(commutator) for coset in cosets):
        raise ConsistencyError(f"cosets of G' have unequal sizes: {cosets}")
    logger.info(f"Commutator subloop of order {len(commutator)}, {len(cosets)} cosets")
    return GroupAnalysis(
        is_group=is_associative(G),
        identity=identity,
        commutator=commutator,
        cosets=cosets,
        sylow2_valuation=int(multiplicity(2, G.n)),
    )


def commutator_subgroup_closure(G: CayleyTable) -> Tuple[int, ...]:
    """The subgroup generated by all g h g^-1 h^-1, by brute-force closure. Groups only."""
    identity = find_identity(G)
    if identity is None or not is_associative(G):
        raise StructureError("commutator closure needs a group")
    inverse = {
        g: next(h for h in G.symbols if G.multiply(g, h) == identity) for g in G.symbols
    }
    generated = {
        G.multiply(G.multiply(G.multiply(g, h), inverse[g]), inverse[h])
        for g in G.symbols
        for h in G.symbols
    }
    generated.add(identity)
    frontier = set(generated)
    while frontier:
        products = {G.multiply(a, b) for a in frontier for b in generated}
        products |= {G.multiply(b, a) for a in frontier for b in generated}
        frontier = products - generated
        generated |= frontier
    return tuple(sorted(generated))
