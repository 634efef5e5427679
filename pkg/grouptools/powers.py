import itertools
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from algebra.cayley import CayleyTable
from constants import DEFAULT_POWER_SPLITS, BudgetExceededError, ConsistencyError, InputValidationError

logger = logging.getLogger(__name__)


class PowerProfile(BaseModel):
    """P^k(G) for k = 1..k_max and their union. Symbols are 1-based."""

    k_max: int
    p_sets: Tuple[Tuple[int, ...], ...] = Field(..., description="p_sets[k-1] is P^k(G)")
    p_infinity: Tuple[int, ...] = Field(..., description="Union of the computed P^k")
    stabilized: bool = Field(
        ..., description="P^k = P^(k+2) held for both parities at the top of the range"
    )

    def p(self, k: int) -> Tuple[int, ...]:
        return self.p_sets[k - 1]


def _bits(mask: int) -> Tuple[int, ...]:
    return tuple(x for x in range(mask.bit_length()) if mask >> x & 1)


class _SetProduct:
    """Memoized products of symbol sets, sets given as bitmasks."""

    def __init__(self, G: CayleyTable):
        self.t = G.zero_based.tolist()
        self.cache: Dict[Tuple[int, int], int] = {}

    def __call__(self, left: int, right: int) -> int:
        key = (left, right)
        cached = self.cache.get(key)
        if cached is not None:
            return cached
        right_bits = _bits(right)
        result = 0
        for a in _bits(left):
            row = self.t[a]
            for b in right_bits:
                result |= 1 << row[b]
        self.cache[key] = result
        return result


def _sub_indices(counts: Tuple[int, ...], weights: List[int]) -> List[int]:
    """Mixed-radix indices of every sub-multiset of `counts`."""
    indices = np.zeros(1, dtype=np.int64)
    for count, weight in zip(counts, weights):
        indices = (indices[:, None] + np.arange(count + 1, dtype=np.int64) * weight).ravel()
    return indices.tolist()


def power_sets(
    G: CayleyTable, k_max: Optional[int] = None, max_splits: int = DEFAULT_POWER_SPLITS
) -> PowerProfile:
    """P^k(G) by dynamic programming over sub-multisets.

    A multiset M with multiplicities m_x (0 <= m_x <= k_max) is a state; the
    products achievable from M (any order, any bracketing) are the union over
    splits M = M1 + M2 of achievable(M1) * achievable(M2).

    Raises:
        BudgetExceededError: the ((k_max + 1)(k_max + 2) / 2)^n splits exceed `max_splits`
    """
    n = G.n
    k_max = 2 * n if k_max is None else k_max
    if k_max < 1:
        raise InputValidationError("k_max must be at least 1")
    radix = k_max + 1
    states = radix**n
    # each multiset with multiplicities c_x has prod(c_x + 1) sub-multisets
    splits = (radix * (radix + 1) // 2) ** n
    if splits > max_splits:
        raise BudgetExceededError(
            f"P^k up to k = {k_max} needs {splits} sub-multiset splits, budget is {max_splits}",
            estimate=splits,
        )

    weights = [radix**x for x in range(n)]
    product = _SetProduct(G)
    achieved: List[int] = [0] * states
    for x in range(n):
        achieved[weights[x]] = 1 << x

    multisets = sorted(itertools.product(range(radix), repeat=n), key=sum)
    for counts in multisets:
        if sum(counts) < 2:
            continue
        index = sum(c * w for c, w in zip(counts, weights))
        result = 0
        pairs = set()
        for left in _sub_indices(counts, weights):
            if left == 0 or left == index:
                continue
            pairs.add((achieved[left], achieved[index - left]))
        for left_mask, right_mask in pairs:
            result |= product(left_mask, right_mask)
        achieved[index] = result

    p_masks = [achieved[k * sum(weights)] for k in range(1, k_max + 1)]
    for k in range(1, k_max - 1):
        if p_masks[k - 1] & ~p_masks[k + 1]:
            raise ConsistencyError(f"P^{k} is not contained in P^{k + 2}")
    union = 0
    for mask in p_masks:
        union |= mask
    stabilized = (
        k_max >= 4
        and p_masks[k_max - 1] == p_masks[k_max - 3]
        and p_masks[k_max - 2] == p_masks[k_max - 4]
    )
    if stabilized and product(union, union) & ~union:
        raise ConsistencyError("P^infinity is not closed under multiplication")
    if not stabilized:
        logger.warning(f"P^k has not visibly stabilized by k = {k_max}")

    def symbols(mask: int) -> Tuple[int, ...]:
        return tuple(x + 1 for x in _bits(mask))

    profile = PowerProfile(
        k_max=k_max,
        p_sets=tuple(symbols(mask) for mask in p_masks),
        p_infinity=symbols(union),
        stabilized=stabilized,
    )
    logger.info(f"P^infinity = {profile.p_infinity} from k <= {k_max}")
    return profile
