import itertools
import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from algebra.cayley import CayleyTable
from algebra.probes import find_identity
from algebra.tuples import Permutation, TupleCode, encode_digits
from classes.decompose import ClassDecomposition
from constants import (
    DEFAULT_ORACLE_BUDGET,
    DEFAULT_ORACLE_SECONDS,
    BudgetExceededError,
    ConsistencyError,
    InputValidationError,
    StructureError,
)
from oracle.witness import DiagonalWitness
from transition.matrix import TransitionMatrix, build_transition
from transition.propagate import propagate_range

logger = logging.getLogger(__name__)

CLOCK_CHECK_INTERVAL = 4096


class OracleResult(BaseModel):
    seed: TupleCode
    d: int
    counts: Dict[int, int] = Field(..., description="Type code -> number of diagonals, ascending")
    witnesses: List[DiagonalWitness] = []

    @property
    def total(self) -> int:
        return sum(self.counts.values())


class CrossCheckReport(BaseModel):
    n: int
    d_max: int
    seeds: List[str]
    pairs_checked: int
    skipped_depths: List[int] = Field(default_factory=list, description="Depths over the oracle budget")
    classes_match: Optional[bool] = Field(default=None, description="Set when a decomposition was supplied")


def _enumerate_branch(
    table: Tuple[Tuple[int, ...], ...],
    start: Tuple[int, ...],
    first: Optional[Tuple[int, ...]],
    d: int,
    deadline: float,
    max_witnesses: int,
) -> Tuple[Dict[Tuple[int, ...], int], List[Tuple[Tuple[int, ...], ...]]]:
    """Fold every collection of d permutations (with the first one fixed if given) onto `start`."""
    n = len(start)
    perms = list(itertools.permutations(range(n)))
    counts: Dict[Tuple[int, ...], int] = {}
    witnesses: List[Tuple[Tuple[int, ...], ...]] = []
    heads = [first] if first is not None else perms
    tails = itertools.product(perms, repeat=d - 1) if d > 1 else [()]
    tails = list(tails)
    visited = 0
    for head in heads:
        for tail in tails:
            current = start
            for W in (head,) + tail:
                current = tuple(table[current[k]][W[k]] for k in range(n))
            counts[current] = counts.get(current, 0) + 1
            if len(witnesses) < max_witnesses:
                witnesses.append((head,) + tail)
            visited += 1
            if visited % CLOCK_CHECK_INTERVAL == 0 and time.monotonic() > deadline:
                raise BudgetExceededError("oracle enumeration ran past its time budget")
    return counts, witnesses


def _run_branch(args) -> Tuple[Dict[Tuple[int, ...], int], List[Tuple[Tuple[int, ...], ...]]]:
    return _enumerate_branch(*args)


def enumerate_diagonals(
    G: CayleyTable,
    seed: TupleCode,
    d: int,
    budget: int = DEFAULT_ORACLE_BUDGET,
    seconds: float = DEFAULT_ORACLE_SECONDS,
    workers: int = 1,
    max_witnesses: int = 0,
) -> OracleResult:
    """Count seed-diagonals of every type in G[d] by trying all n!^d permutation collections.

    Raises:
        BudgetExceededError: n!^d exceeds `budget`, or enumeration exceeds `seconds`
    """
    if seed.n != G.n:
        raise StructureError(f"seed {seed} has order {seed.n}, table has order {G.n}")
    if d < 0:
        raise InputValidationError("d must be nonnegative")
    collections = math.factorial(G.n) ** d
    if collections > budget:
        raise BudgetExceededError(
            f"oracle needs {collections} collections, budget is {budget}", estimate=collections
        )
    if d == 0:
        return OracleResult(
            seed=seed,
            d=0,
            counts={seed.code: 1},
            witnesses=[DiagonalWitness(seed=seed, result=seed)] if max_witnesses else [],
        )

    table = tuple(tuple(x - 1 for x in row) for row in G.table)
    start = tuple(x - 1 for x in seed.digits)
    deadline = time.monotonic() + seconds
    if workers > 1:
        heads = list(itertools.permutations(range(G.n)))
        jobs = [(table, start, head, d, deadline, max_witnesses) for head in heads]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            branches = list(pool.map(_run_branch, jobs))
    else:
        branches = [_enumerate_branch(table, start, None, d, deadline, max_witnesses)]

    merged: Dict[int, int] = {}
    raw_witnesses = []
    for counts, witnesses in branches:
        for digits, count in counts.items():
            code = encode_digits(G.n, [x + 1 for x in digits])
            merged[code] = merged.get(code, 0) + count
        raw_witnesses.extend(witnesses)
    if sum(merged.values()) != collections:
        raise ConsistencyError(f"oracle visited {sum(merged.values())} collections, expected {collections}")

    result_witnesses = []
    for steps in raw_witnesses[:max_witnesses]:
        perms = tuple(Permutation(n=G.n, image=tuple(x + 1 for x in W)) for W in steps)
        current = start
        for W in steps:
            current = tuple(table[current[k]][W[k]] for k in range(G.n))
        result_witnesses.append(
            DiagonalWitness(
                seed=seed, steps=perms, result=TupleCode(n=G.n, digits=tuple(x + 1 for x in current))
            )
        )
    return OracleResult(
        seed=seed, d=d, counts=dict(sorted(merged.items())), witnesses=result_witnesses
    )


def default_seeds(G: CayleyTable, seed: int = 0) -> List[TupleCode]:
    """All tuples for n <= 3; otherwise the identity permutation, the constant identity tuple and one random tuple."""
    n = G.n
    if n <= 3:
        return [TupleCode.from_code(n, code) for code in range(n**n)]
    identity = find_identity(G) or 1
    rng = random.Random(seed)
    chosen = [
        TupleCode.identity(n),
        TupleCode.constant(n, identity),
        TupleCode.from_code(n, rng.randrange(n**n)),
    ]
    unique: List[TupleCode] = []
    for V in chosen:
        if V not in unique:
            unique.append(V)
    return unique


def cross_check(
    G: CayleyTable,
    d_max: int,
    T: Optional[TransitionMatrix] = None,
    D: Optional[ClassDecomposition] = None,
    seeds: Optional[Sequence[TupleCode]] = None,
    budget: int = DEFAULT_ORACLE_BUDGET,
    seconds: float = DEFAULT_ORACLE_SECONDS,
    seed: int = 0,
) -> CrossCheckReport:
    """Compare the oracle with exact propagation for every seed and d <= d_max within budget.

    Raises:
        ConsistencyError: a count or a reached class differs, naming the seed, depth and type
    """
    T = T if T is not None else build_transition(G)
    seeds = list(seeds) if seeds is not None else default_seeds(G, seed)
    admissible = [d for d in range(d_max + 1) if math.factorial(G.n) ** d <= budget]
    skipped = [d for d in range(d_max + 1) if d not in admissible]
    pairs = 0
    for U in seeds:
        for vector in propagate_range(T, U, max(admissible)):
            if vector.depth not in admissible:
                continue
            oracle = enumerate_diagonals(G, U, vector.depth, budget, seconds)
            exact = vector.as_dict()
            if exact != oracle.counts:
                codes = sorted(set(exact) | set(oracle.counts))
                bad = next(c for c in codes if exact.get(c, 0) != oracle.counts.get(c, 0))
                logger.error(f"Oracle mismatch from {U} at d = {vector.depth}")
                raise ConsistencyError(
                    f"seed {U}, d = {vector.depth}, type {TupleCode.from_code(G.n, bad)}: "
                    f"propagation {exact.get(bad, 0)}, oracle {oracle.counts.get(bad, 0)}"
                )
            pairs += 1
            if D is not None:
                class_id, unit = D.tuple_index(U)
                reached = np.array(list(oracle.counts), dtype=np.int64)
                period = D.classes[class_id].period
                if np.any(D.class_of[reached] != class_id) or np.any(
                    D.unit_of[reached] != (unit + vector.depth) % period
                ):
                    raise ConsistencyError(
                        f"seed {U}, d = {vector.depth}: oracle reaches outside the predicted unit"
                    )
    logger.info(f"Oracle agreed with propagation on {pairs} (seed, d) pairs")
    return CrossCheckReport(
        n=G.n,
        d_max=d_max,
        seeds=[str(U) for U in seeds],
        pairs_checked=pairs,
        skipped_depths=skipped,
        classes_match=None if D is None else True,
    )
