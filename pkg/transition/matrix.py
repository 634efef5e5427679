import logging
import math
from typing import Dict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from algebra.cayley import CayleyTable
from algebra.tuples import TupleCode, code_weights, permutation_array, tuple_space
from constants import (
    DEFAULT_MAX_ORDER,
    DEFAULT_MEMORY_BYTES,
    HARD_MAX_ORDER,
    BudgetExceededError,
    ConsistencyError,
    StructureError,
)

logger = logging.getLogger(__name__)

# int32 targets, an equally sized sort buffer, and int64 build scratch
BYTES_PER_TRANSITION = 12
BUILD_CHUNK_ELEMENTS = 2**22


class TransitionMatrix(BaseModel):
    """T with t(U, V) = number of permutations W such that U * W = V.

    For a fixed U the map W -> U * W is injective, so every row holds exactly
    n! ones. Row U is stored as its n! target codes in ascending order.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int = Field(..., ge=1)
    table_digest: str = Field(..., description="Digest of the Cayley table T was built from")
    targets: np.ndarray = Field(..., description="Shape (n^n, n!), each row sorted ascending")

    @property
    def size(self) -> int:
        return self.n**self.n

    @property
    def degree(self) -> int:
        return math.factorial(self.n)

    def _code(self, U) -> int:
        if isinstance(U, TupleCode):
            if U.n != self.n:
                raise StructureError(f"tuple {U} has order {U.n}, matrix has order {self.n}")
            return U.code
        return int(U)

    def row(self, U) -> Dict[int, int]:
        """Sparse row {V.code: t(U, V)} in ascending code order."""
        return {int(v): 1 for v in self.targets[self._code(U)]}

    def t(self, U, V) -> int:
        row = self.targets[self._code(U)]
        v = self._code(V)
        position = int(np.searchsorted(row, v))
        return int(position < len(row) and row[position] == v)

    def column_sums(self) -> np.ndarray:
        return np.bincount(self.targets.ravel(), minlength=self.size)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.size, self.size), dtype=object)
        dense[np.arange(self.size)[:, None], self.targets] = 1
        return dense


def memory_estimate(n: int) -> int:
    return BYTES_PER_TRANSITION * n**n * math.factorial(n)


def check_budget(
    n: int,
    max_order: int = DEFAULT_MAX_ORDER,
    allow_n7: bool = False,
    memory_bytes: int = DEFAULT_MEMORY_BYTES,
) -> None:
    estimate = memory_estimate(n)
    if n > HARD_MAX_ORDER or (n > max_order and not (allow_n7 and n == HARD_MAX_ORDER)):
        raise BudgetExceededError(
            f"order {n} exceeds the transition matrix limit {max_order}; needs about {estimate} bytes",
            estimate=estimate,
        )
    if estimate > memory_bytes:
        raise BudgetExceededError(
            f"transition matrix of order {n} needs about {estimate} bytes, budget is {memory_bytes}",
            estimate=estimate,
        )


def successor_codes(G: CayleyTable) -> np.ndarray:
    """code(U * W_j) for every U and the j-th permutation W_j in lexicographic order."""
    n = G.n
    table = G.zero_based
    digits = tuple_space(n)
    perms = permutation_array(n)
    weights = code_weights(n)
    size, degree = digits.shape[0], perms.shape[0]
    successors = np.empty((size, degree), dtype=np.int32)
    chunk = max(1, BUILD_CHUNK_ELEMENTS // size)
    for start in range(0, degree, chunk):
        block = perms[start : start + chunk]
        codes = np.zeros((size, block.shape[0]), dtype=np.int64)
        for i in range(n):
            codes += table[digits[:, i][:, None], block[None, :, i]] * weights[i]
        successors[:, start : start + block.shape[0]] = codes
    return successors


def verify_transition(T: TransitionMatrix) -> None:
    """Every row has n! distinct targets and every column sum is n!."""
    if T.targets.shape != (T.size, T.degree):
        raise ConsistencyError(f"transition targets have shape {T.targets.shape}")
    if T.degree > 1 and not np.all(np.diff(T.targets, axis=1) > 0):
        raise ConsistencyError("a transition row repeats a target")
    column_sums = T.column_sums()
    if not np.all(column_sums == T.degree):
        bad = int(np.flatnonzero(column_sums != T.degree)[0])
        raise ConsistencyError(
            f"column {bad} sums to {int(column_sums[bad])}, expected {T.degree}"
        )


def build_transition(
    G: CayleyTable,
    max_order: int = DEFAULT_MAX_ORDER,
    allow_n7: bool = False,
    memory_bytes: int = DEFAULT_MEMORY_BYTES,
) -> TransitionMatrix:
    """Build the n^n x n^n transition matrix of G and check its row and column sums.

    Raises:
        BudgetExceededError: the order or the memory estimate is over budget
    """
    check_budget(G.n, max_order, allow_n7, memory_bytes)
    logger.info(f"Building transition matrix of order {G.n}^{G.n}")
    targets = successor_codes(G)
    targets.sort(axis=1)
    targets.setflags(write=False)
    T = TransitionMatrix(n=G.n, table_digest=G.digest, targets=targets)
    verify_transition(T)
    return T
