import logging
from fractions import Fraction
from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from algebra.cayley import CayleyTable
from algebra.tuples import TupleCode, distinct_counts, permutation_codes, tuple_space
from classes.decompose import ClassDecomposition
from constants import (
    DEFAULT_ORBIT_MAX_ORDER,
    KIND_NEAR,
    KIND_TRANSVERSAL,
    ConsistencyError,
    InputValidationError,
    StructureError,
)
from transition.matrix import TransitionMatrix, build_transition
from transition.orbits import OrbitChain
from transition.propagate import propagate, propagate_range

logger = logging.getLogger(__name__)

METHODS = ("auto", "full", "orbit")


class NearCensusRow(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    unit: int
    contains_permutations: bool
    near_types: int
    expected: Fraction


class NearCensusReport(BaseModel):
    r: int
    period: int
    rows: List[NearCensusRow]


def near_type_codes(n: int) -> np.ndarray:
    """Codes of tuples with at least n - 1 distinct entries."""
    return np.flatnonzero(distinct_counts(tuple_space(n)) >= n - 1)


def _resolve_method(G: CayleyTable, method: str, orbit_max_order: int) -> str:
    if method not in METHODS:
        raise InputValidationError(f"unknown counting method {method!r}; expected one of {METHODS}")
    if method == "auto":
        return "orbit" if G.n <= orbit_max_order else "full"
    return method


def count_series(
    G: CayleyTable,
    kind: str,
    d_max: int,
    T: Optional[TransitionMatrix] = None,
    chain: Optional[OrbitChain] = None,
    method: str = "auto",
    threads: int = 1,
    orbit_max_order: int = DEFAULT_ORBIT_MAX_ORDER,
) -> List[int]:
    """Transversal or near-transversal counts of G[d] for d = 1..d_max.

    The orbit method runs on the multiset-lumped chain; the full method
    propagates the identity permutation through T.
    """
    if kind not in (KIND_TRANSVERSAL, KIND_NEAR):
        raise InputValidationError(f"count_series takes {KIND_TRANSVERSAL} or {KIND_NEAR}, got {kind!r}")
    if d_max < 1:
        raise InputValidationError("d must be at least 1")
    method = _resolve_method(G, method, orbit_max_order)
    counts: List[int] = []
    if method == "orbit":
        chain = chain if chain is not None else OrbitChain(G, orbit_max_order)
        if chain.G != G:
            raise StructureError("orbit chain was built for a different table")
        entries = np.zeros(chain.size, dtype=object)
        entries[chain.permutation_state] = 1
        wanted = np.array([chain.permutation_state]) if kind == KIND_TRANSVERSAL else chain.near_states()
        for d in range(1, d_max + 1):
            entries = chain.step(entries)
            counts.append(int(sum(entries[wanted])))
    else:
        T = T if T is not None else build_transition(G)
        if T.table_digest != G.digest:
            raise StructureError("transition matrix was built for a different table")
        wanted = permutation_codes(G.n) if kind == KIND_TRANSVERSAL else near_type_codes(G.n)
        for vector in propagate_range(T, TupleCode.identity(G.n), d_max, threads):
            if vector.depth:
                counts.append(vector.sum_over(wanted))
    logger.info(f"{kind} counts for d = 1..{d_max} via the {method} chain")
    return counts


def count_transversals(G: CayleyTable, d: int, **options) -> int:
    """Number of transversals of G[d]: identity-permutation diagonals whose type is a permutation."""
    return count_series(G, KIND_TRANSVERSAL, d, **options)[-1]


def count_near_transversals(G: CayleyTable, d: int, **options) -> int:
    """Number of diagonals of G[d] whose type has at least n - 1 distinct symbols."""
    return count_series(G, KIND_NEAR, d, **options)[-1]


def count_diagonals(
    G: CayleyTable,
    U: Union[TupleCode, int],
    V: Union[TupleCode, int],
    d: int,
    T: Optional[TransitionMatrix] = None,
    threads: int = 1,
) -> int:
    """Number of U-diagonals of type V in G[d], i.e. (T^d)_{U,V}."""
    T = T if T is not None else build_transition(G)
    if T.table_digest != G.digest:
        raise StructureError("transition matrix was built for a different table")
    return propagate(T, U, d, threads).get(V)


def near_transversal_census(D: ClassDecomposition, G: CayleyTable) -> NearCensusReport:
    """Near-transversal types in each unit of the permutation class.

    The unit holding the permutations has ((n/2)(r-1)+1) n! of them, any other unit (n/2) r n!.
    """
    D.check_table(G)
    n = G.n
    u1 = D.class_containing(TupleCode.identity(n))
    near = np.zeros(n**n, dtype=bool)
    near[near_type_codes(n)] = True
    factorial = len(permutation_codes(n))
    permutation_unit = D.tuple_index(TupleCode.identity(n))[1]
    rows = []
    for index, unit in enumerate(u1.units):
        holds_permutations = index == permutation_unit
        if holds_permutations:
            expected = (Fraction(n, 2) * (u1.r - 1) + 1) * factorial
        else:
            expected = Fraction(n, 2) * u1.r * factorial
        count = int(near[unit].sum())
        if count != expected:
            logger.error(f"Unit {index} holds {count} near-transversal types, expected {expected}")
            raise ConsistencyError(f"near-transversal census of unit {index} is {count}, expected {expected}")
        rows.append(
            NearCensusRow(
                unit=index,
                contains_permutations=holds_permutations,
                near_types=count,
                expected=expected,
            )
        )
    return NearCensusReport(r=u1.r, period=u1.period, rows=rows)
