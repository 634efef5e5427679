import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field

from algebra.cayley import CayleyTable
from algebra.tuples import Permutation

logger = logging.getLogger(__name__)


class StructureProbe(BaseModel):
    """Structural facts about a quasigroup, checked exhaustively."""

    is_associative: bool
    is_commutative: bool
    identity: Optional[int] = Field(default=None, description="Two-sided identity, 1-based")
    is_loop: bool
    is_group: bool
    has_right_inverse_property: Optional[Permutation] = Field(
        default=None,
        description="Witness pi with (g * h) * pi(h) = g for all g, h, if one exists",
    )


def is_associative(G: CayleyTable) -> bool:
    t = G.zero_based
    # all triples (x, y, z): (x*y)*z against x*(y*z)
    left = t[t[:, :, None], np.arange(G.n)[None, None, :]]
    right = t[np.arange(G.n)[:, None, None], t[None, :, :]]
    return bool(np.array_equal(left, right))


def find_identity(G: CayleyTable) -> Optional[int]:
    t = G.zero_based
    symbols = np.arange(G.n)
    for e in range(G.n):
        if np.array_equal(t[e, :], symbols) and np.array_equal(t[:, e], symbols):
            return e + 1
    return None


def right_inverse_witness(G: CayleyTable) -> Optional[Permutation]:
    """Find pi such that right translation by pi(h) inverts right translation by h."""
    t = G.zero_based
    image = []
    for h in range(G.n):
        # inverse of x -> x*h, as an array indexed by y
        inverse = np.argsort(t[:, h])
        matches = [k for k in range(G.n) if np.array_equal(t[:, k], inverse)]
        if not matches:
            return None
        image.append(matches[0] + 1)
    return Permutation(n=G.n, image=tuple(image))


def structure_probe(G: CayleyTable) -> StructureProbe:
    associative = is_associative(G)
    identity = find_identity(G)
    t = G.zero_based
    probe = StructureProbe(
        is_associative=associative,
        is_commutative=bool(np.array_equal(t, t.T)),
        identity=identity,
        is_loop=identity is not None,
        is_group=associative and identity is not None,
        has_right_inverse_property=right_inverse_witness(G),
    )
    logger.info(
        f"Probed table of order {G.n}: group={probe.is_group} loop={probe.is_loop}"
    )
    return probe
