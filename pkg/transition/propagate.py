import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterator, List, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from algebra.tuples import TupleCode
from constants import DEFAULT_DENSE_CAP, BudgetExceededError, InputValidationError, StructureError
from transition.matrix import TransitionMatrix

logger = logging.getLogger(__name__)

INT64_LIMIT = 2**63 - 1
# rows scattered per np.add.at call
SCATTER_ELEMENTS = 2**21


class CountVector(BaseModel):
    """Row `seed` of T^d: entry V is the number of seed-diagonals of type V in G[d]."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    depth: int = Field(..., ge=0)
    entries: np.ndarray = Field(..., description="Dense counts indexed by code; int64 or object")

    def get(self, V: Union[TupleCode, int]) -> int:
        code = V.code if isinstance(V, TupleCode) else int(V)
        return int(self.entries[code])

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.entries)

    def items(self) -> Iterator[Tuple[int, int]]:
        for code in self.support():
            yield int(code), int(self.entries[code])

    def as_dict(self) -> Dict[int, int]:
        return dict(self.items())

    def total(self) -> int:
        return sum(int(value) for _, value in self.items())

    def sum_over(self, codes: np.ndarray) -> int:
        return sum(int(value) for value in self.entries[codes])


def unit_vector(T: TransitionMatrix, seed: Union[TupleCode, int]) -> CountVector:
    code = T._code(seed)
    if not 0 <= code < T.size:
        raise InputValidationError(f"seed code {code} outside 0..{T.size - 1}")
    entries = np.zeros(T.size, dtype=np.int64)
    entries[code] = 1
    return CountVector(n=T.n, depth=0, entries=entries)


def _scatter(T: TransitionMatrix, entries: np.ndarray, rows: np.ndarray) -> np.ndarray:
    out = np.zeros(T.size, dtype=entries.dtype)
    per_call = max(1, SCATTER_ELEMENTS // T.degree)
    for start in range(0, len(rows), per_call):
        block = rows[start : start + per_call]
        np.add.at(out, T.targets[block].ravel(), np.repeat(entries[block], T.degree))
    return out


def step(T: TransitionMatrix, vector: CountVector, threads: int = 1) -> CountVector:
    """One vector-matrix product, exact.

    Counts stay int64 while the next total fits, then move to Python integers.
    """
    if vector.n != T.n:
        raise StructureError(f"vector of order {vector.n} used with matrix of order {T.n}")
    entries = vector.entries
    if entries.dtype != object and vector.total() * T.degree > INT64_LIMIT:
        logger.debug(f"Switching to arbitrary-precision counts at depth {vector.depth}")
        entries = entries.astype(object)
    rows = np.flatnonzero(entries)
    if threads > 1 and len(rows) > threads:
        chunks = np.array_split(rows, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials: List[np.ndarray] = list(
                pool.map(lambda chunk: _scatter(T, entries, chunk), chunks)
            )
        out = partials[0]
        for partial in partials[1:]:
            out = out + partial
    else:
        out = _scatter(T, entries, rows)
    return CountVector(n=T.n, depth=vector.depth + 1, entries=out)


def propagate_steps(
    T: TransitionMatrix, vector: CountVector, steps: int, threads: int = 1
) -> CountVector:
    if steps < 0:
        raise InputValidationError("the number of steps must be nonnegative")
    for _ in range(steps):
        vector = step(T, vector, threads)
        logger.debug(f"Propagated to depth {vector.depth}, support {len(vector.support())}")
    return vector


def propagate(
    T: TransitionMatrix, seed: Union[TupleCode, int], d: int, threads: int = 1
) -> CountVector:
    """Row `seed` of T^d by d successive exact vector-matrix products."""
    if d < 0:
        raise InputValidationError("d must be nonnegative")
    return propagate_steps(T, unit_vector(T, seed), d, threads)


def propagate_range(
    T: TransitionMatrix, seed: Union[TupleCode, int], d_max: int, threads: int = 1
) -> Iterator[CountVector]:
    """Yield row `seed` of T^d for d = 0..d_max."""
    vector = unit_vector(T, seed)
    yield vector
    for _ in range(d_max):
        vector = step(T, vector, threads)
        yield vector


def dense_power(T: TransitionMatrix, d: int, dense_cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Exact T^d as an object array of Python integers.

    Raises:
        BudgetExceededError: n^n exceeds `dense_cap`
    """
    if T.size > dense_cap:
        raise BudgetExceededError(
            f"dense power needs an {T.size} x {T.size} matrix, cap is {dense_cap}",
            estimate=T.size,
        )
    if d < 0:
        raise InputValidationError("d must be nonnegative")
    result = np.identity(T.size, dtype=np.int64).astype(object)
    base = T.to_dense()
    while d:
        if d & 1:
            result = result.dot(base)
        base = base.dot(base)
        d >>= 1
    return result
