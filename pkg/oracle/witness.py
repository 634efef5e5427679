import logging
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel

from algebra.cayley import CayleyTable
from algebra.probes import find_identity, is_associative
from algebra.tuples import Permutation, TupleCode, multiply_tuples, pi_product
from constants import ConsistencyError, InputValidationError, StructureError

logger = logging.getLogger(__name__)


class DiagonalWitness(BaseModel):
    """A seed-diagonal of type `result`: folding the steps onto the seed gives the result."""

    seed: TupleCode
    steps: Tuple[Permutation, ...] = ()
    result: TupleCode

    @property
    def length(self) -> int:
        return len(self.steps)


def fold_steps(G: CayleyTable, seed: TupleCode, steps: Sequence[Permutation]) -> TupleCode:
    current = seed
    for W in steps:
        current = multiply_tuples(G, current, TupleCode(n=W.n, digits=W.image))
    return current


def verify_witness(G: CayleyTable, w: DiagonalWitness) -> bool:
    if w.seed.n != G.n or w.result.n != G.n or any(W.n != G.n for W in w.steps):
        return False
    return fold_steps(G, w.seed, w.steps) == w.result


def concat_witnesses(first: DiagonalWitness, second: DiagonalWitness) -> DiagonalWitness:
    """A U-diagonal of type V followed by a V-diagonal of type X is a U-diagonal of type X."""
    if first.result != second.seed:
        raise InputValidationError(
            f"cannot join a witness ending at {first.result} to one starting at {second.seed}"
        )
    return DiagonalWitness(seed=first.seed, steps=first.steps + second.steps, result=second.result)


def _right_solver(G: CayleyTable) -> List[List[int]]:
    """solve[x][y] = z with x * z = y, 1-based."""
    solve = [[0] * (G.n + 1) for _ in range(G.n + 1)]
    for x in G.symbols:
        for z in G.symbols:
            solve[x][G.multiply(x, z)] = z
    return solve


def _fill(n: int, chosen: dict, chosen_prime: dict) -> Tuple[Permutation, Permutation]:
    """Complete two partial assignments position -> symbol into permutations, ascending."""
    spare = sorted(set(range(1, n + 1)) - set(chosen.values()))
    spare_prime = sorted(set(range(1, n + 1)) - set(chosen_prime.values()))
    free = [j for j in range(1, n + 1) if j not in chosen]
    free_prime = [j for j in range(1, n + 1) if j not in chosen_prime]
    w = {**chosen, **dict(zip(free, spare))}
    w_prime = {**chosen_prime, **dict(zip(free_prime, spare_prime))}
    return (
        Permutation(n=n, image=tuple(w[j] for j in range(1, n + 1))),
        Permutation(n=n, image=tuple(w_prime[j] for j in range(1, n + 1))),
    )


def _greedy_round(
    G: CayleyTable, V: TupleCode, a: int, i: int, solve: List[List[int]]
) -> Tuple[Permutation, Permutation]:
    """One step of G[2] fixing the least position j != i with v_j != a, keeping every a in place."""
    n = G.n
    p = next(j for j in range(1, n + 1) if j != i and V.digits[j - 1] != a)
    w_p = 1
    chosen = {p: w_p}
    chosen_prime = {p: solve[G.multiply(V.digits[p - 1], w_p)][a]}
    keep = [j for j in range(1, n + 1) if j not in (i, p) and V.digits[j - 1] == a]
    # (a * w) * w' = a determines w' from w
    for j in keep:
        for w in G.symbols:
            w_prime = solve[G.multiply(a, w)][a]
            if w not in chosen.values() and w_prime not in chosen_prime.values():
                chosen[j], chosen_prime[j] = w, w_prime
                break
        else:
            raise ConsistencyError(f"no disjoint pair left for position {j}")
    return _fill(n, chosen, chosen_prime)


def _group_round(
    G: CayleyTable, V: TupleCode, k: int, identity: int, inverse: dict
) -> Tuple[Permutation, Permutation]:
    """One step of G[2] taking (.., v_{k-1}, v_k, e, ..) to (.., v_{k-1} v_k, e, e, ..)."""
    n = G.n
    g = 1
    v_k = V.digits[k - 1]
    chosen = {k: g, k - 1: G.multiply(v_k, g)}
    chosen_prime = {k: G.multiply(inverse[g], inverse[v_k]), k - 1: inverse[g]}
    rest = [j for j in range(1, n + 1) if j not in chosen]
    spare = [w for w in G.symbols if w not in chosen.values()]
    for j, w in zip(rest, spare):
        chosen[j], chosen_prime[j] = w, inverse[w]
    return _fill(n, chosen, chosen_prime)


def reduce_to_canonical(
    G: CayleyTable,
    V: TupleCode,
    a: Optional[int] = None,
    i: int = 1,
    group_variant: bool = False,
) -> DiagonalWitness:
    """Build a V-diagonal of even length at most 2(n-1) whose type is a_i(b) for some b.

    Each pair of steps is one step of G[2] and fixes one more coordinate to a,
    choosing the lexicographically least admissible pairs. The group variant
    (a = e, i = 1) keeps Pi(V) invariant and ends exactly at e_1(Pi(V)).

    Raises:
        StructureError: group variant on a table that is not a group
        ConsistencyError: the pair selection fails
    """
    n = G.n
    if V.n != n:
        raise StructureError(f"tuple {V} has order {V.n}, table has order {n}")
    if not 1 <= i <= n:
        raise InputValidationError(f"coordinate {i} outside 1..{n}")
    steps: List[Permutation] = []
    current = V

    if group_variant:
        identity = find_identity(G)
        if identity is None or not is_associative(G):
            raise StructureError("the group variant needs a group")
        if (a is not None and a != identity) or i != 1:
            raise InputValidationError("the group variant ends at e_1(Pi(V))")
        inverse = {x: next(y for y in G.symbols if G.multiply(x, y) == identity) for x in G.symbols}
        target = TupleCode.canonical(n, identity, 1, pi_product(G, V))
        while True:
            non_identity = [j for j in range(2, n + 1) if current.digits[j - 1] != identity]
            if not non_identity:
                break
            W, W_prime = _group_round(G, current, non_identity[-1], identity, inverse)
            steps += [W, W_prime]
            current = fold_steps(G, current, (W, W_prime))
        if current != target:
            raise ConsistencyError(f"group reduction of {V} ended at {current}, not {target}")
    else:
        if a is None or not 1 <= a <= n:
            raise InputValidationError(f"symbol {a} outside 1..{n}")
        solve = _right_solver(G)
        while any(current.digits[j - 1] != a for j in range(1, n + 1) if j != i):
            W, W_prime = _greedy_round(G, current, a, i, solve)
            steps += [W, W_prime]
            current = fold_steps(G, current, (W, W_prime))
            if len(steps) > 2 * (n - 1):
                raise ConsistencyError(f"reduction of {V} did not finish within {n - 1} rounds")

    witness = DiagonalWitness(seed=V, steps=tuple(steps), result=current)
    logger.debug(f"Reduced {V} to {current} in {len(steps)} steps")
    return witness
