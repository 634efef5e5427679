"""Transition chain lumped onto multisets of tuple entries.

Permuting the coordinates of U, V and W together preserves U * W = V, so
t(U^pi, V^pi) = t(U, V) and the chain lumps exactly onto multisets. Counts
that only depend on the multiset of the type (transversals, near
transversals) can be taken on C(2n-1, n) states instead of n^n.
"""

import itertools
import logging
from typing import Dict, Optional, Tuple

import numpy as np

from algebra.cayley import CayleyTable
from algebra.tuples import code_weights, distinct_counts, permutation_array
from constants import DEFAULT_ORBIT_MAX_ORDER, BudgetExceededError, StructureError

logger = logging.getLogger(__name__)

ROW_BATCH_ELEMENTS = 2**22


class OrbitChain:
    """Lazily built lumped chain; rows are computed the first time a state is reached."""

    def __init__(self, G: CayleyTable, max_order: int = DEFAULT_ORBIT_MAX_ORDER):
        if G.n > max_order:
            raise BudgetExceededError(
                f"orbit chain for order {G.n} exceeds the limit {max_order}", estimate=G.n
            )
        self.G = G
        self.n = G.n
        self.states = np.array(
            list(itertools.combinations_with_replacement(range(self.n), self.n)), dtype=np.int64
        ).reshape(-1, self.n)
        self.state_codes = self.states @ code_weights(self.n)
        self.distinct = distinct_counts(self.states)
        self._rows: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}
        logger.info(f"Orbit chain of order {self.n} with {len(self.states)} states")

    @property
    def size(self) -> int:
        return len(self.states)

    def state_of(self, digits0: np.ndarray) -> int:
        code = int(np.sort(np.asarray(digits0)) @ code_weights(self.n))
        index = int(np.searchsorted(self.state_codes, code))
        if index >= self.size or self.state_codes[index] != code:
            raise StructureError(f"no multiset state for {digits0}")
        return index

    @property
    def permutation_state(self) -> int:
        return self.state_of(np.arange(self.n))

    def near_states(self) -> np.ndarray:
        return np.flatnonzero(self.distinct >= self.n - 1)

    def _build_rows(self, states: np.ndarray) -> None:
        table = self.G.zero_based
        perms = permutation_array(self.n)
        weights = code_weights(self.n)
        batch = max(1, ROW_BATCH_ELEMENTS // (perms.shape[0] * self.n))
        for start in range(0, len(states), batch):
            chunk = states[start : start + batch]
            representatives = self.states[chunk]
            images = table[representatives[:, None, :], perms[None, :, :]]
            images.sort(axis=2)
            targets = np.searchsorted(self.state_codes, images @ weights)
            for offset, state in enumerate(chunk):
                columns, counts = np.unique(targets[offset], return_counts=True)
                self._rows[int(state)] = (columns, counts.astype(np.int64))

    def row(self, state: int) -> Tuple[np.ndarray, np.ndarray]:
        """(target states, multiplicities); multiplicities sum to n!."""
        if state not in self._rows:
            self._build_rows(np.array([state]))
        return self._rows[state]

    def step(self, entries: np.ndarray) -> np.ndarray:
        support = np.flatnonzero(entries)
        missing = np.array([s for s in support if int(s) not in self._rows], dtype=np.int64)
        if len(missing):
            self._build_rows(missing)
        out = np.zeros(self.size, dtype=object)
        for state in support:
            columns, counts = self._rows[int(state)]
            out[columns] += int(entries[state]) * counts.astype(object)
        return out

    def propagate(self, d: int, seed: Optional[int] = None) -> np.ndarray:
        """Lumped row of T^d from the multiset state `seed` (default: the permutations)."""
        entries = np.zeros(self.size, dtype=object)
        entries[self.permutation_state if seed is None else seed] = 1
        for _ in range(d):
            entries = self.step(entries)
        return entries
