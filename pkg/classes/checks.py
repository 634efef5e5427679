import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from algebra.cayley import CayleyTable
from algebra.probes import find_identity
from algebra.tuples import (
    TupleCode,
    code_weights,
    constant_codes,
    coordinate_action_codes,
    encode_rows,
    permutation_array,
    permutation_codes,
    pi_products,
    tuple_space,
)
from classes.decompose import ClassDecomposition
from constants import (
    CLOSURE_SAMPLE_ORDER,
    CLOSURE_SAMPLES,
    ConsistencyError,
    StructureError,
)
from grouptools.commutator import GroupAnalysis
from grouptools.powers import PowerProfile
from transition.matrix import TransitionMatrix

logger = logging.getLogger(__name__)

EXHAUSTIVE_PAIR_LIMIT = 10**7


class UnitCensus(BaseModel):
    V: str
    j: int
    counts: List[List[int]] = Field(..., description="counts[class][unit] = |unit ∩ V_j^*|")


class ClosureReport(BaseModel):
    permutation_closure: bool
    sampled: bool
    pairs_checked: int
    u1_class: int
    u1_period: int
    constants_co_classed: bool
    canonical_coverage: bool


class GroupClassReport(BaseModel):
    hall_paige: bool
    classes: int
    expected_classes: int
    unit_size: int
    unit_cosets: List[List[int]] = Field(
        ..., description="Per class, the coset index of Pi on each unit"
    )


class ProductCheckReport(BaseModel):
    u1_pi_values: List[int]
    within_p_infinity: bool
    conclusive: bool
    p: int = Field(..., description="|U_1| / n^(n-1)")
    p_within_bound: bool
    r1: int
    commutator_order: Optional[int] = None
    power_sets_in_one_coset: Optional[bool] = None


class BlockParityReport(BaseModel):
    k: int
    flips: bool = Field(..., description="One step flips parity (k odd) instead of preserving it")
    classes: int
    min_units: int
    holds: bool


class U1ClosureReport(BaseModel):
    closed: bool
    sampled: bool
    pairs_checked: int
    counterexample: Optional[Tuple[str, str, str]] = None


def _pi_all(G: CayleyTable) -> np.ndarray:
    return pi_products(G, tuple_space(G.n))


def unit_census(D: ClassDecomposition, V: TupleCode, j: int) -> UnitCensus:
    """Count V_j(1), ..., V_j(n) in every unit; each unit of a class must hold exactly r of them."""
    n = D.n
    if V.n != n:
        raise StructureError(f"tuple {V} has order {V.n}, decomposition has order {n}")
    if not 1 <= j <= n:
        raise StructureError(f"coordinate {j} outside 1..{n}")
    weight = int(code_weights(n)[j - 1])
    codes = V.code + (np.arange(1, n + 1) - V.digits[j - 1]) * weight
    counts = [[0] * c.period for c in D.classes]
    for code in codes:
        class_id, unit = D.tuple_index(int(code))
        counts[class_id][unit] += 1
    for c in D.classes:
        if any(count != c.r for count in counts[c.id]):
            logger.error(f"Census of {V}, coordinate {j}: class {c.id} counts {counts[c.id]}, r = {c.r}")
            raise ConsistencyError(f"unit census of class {c.id} is {counts[c.id]}, expected {c.r} each")
    return UnitCensus(V=str(V), j=j, counts=counts)


def closure_checks(D: ClassDecomposition, G: CayleyTable, seed: int = 0) -> ClosureReport:
    """Units closed under coordinate permutations; permutations and constants co-classed; coverage by a_j(b).

    Raises:
        ConsistencyError: any of the checks fails
    """
    D.check_table(G)
    n = D.n
    size = n**n
    sampled = n >= CLOSURE_SAMPLE_ORDER
    if sampled:
        rng = np.random.default_rng(seed)
        codes = rng.integers(0, size, CLOSURE_SAMPLES)
        perms = permutation_array(n)[rng.integers(0, len(permutation_array(n)), CLOSURE_SAMPLES)]
        images = encode_rows(n, np.take_along_axis(tuple_space(n)[codes], perms, axis=1))
        closed = bool(
            np.array_equal(D.class_of[images], D.class_of[codes])
            and np.array_equal(D.unit_of[images], D.unit_of[codes])
        )
        pairs = CLOSURE_SAMPLES
    else:
        closed = True
        for perm in permutation_array(n):
            images = coordinate_action_codes(n, perm)
            if not (
                np.array_equal(D.class_of[images], D.class_of)
                and np.array_equal(D.unit_of[images], D.unit_of)
            ):
                closed = False
                break
        pairs = size * len(permutation_array(n))
    if not closed:
        raise ConsistencyError("a unit is not closed under coordinate permutations")

    perm_classes = set(D.class_of[permutation_codes(n)].tolist())
    const_classes = set(D.class_of[constant_codes(n)].tolist())
    co_classed = len(perm_classes) == 1 and perm_classes == const_classes
    if not co_classed:
        raise ConsistencyError("permutations and constant tuples are not in a single class")
    u1 = D.classes[perm_classes.pop()]
    if u1.period > 2:
        raise ConsistencyError(f"the class of the permutations has period {u1.period} > 2")

    coverage = True
    weights = code_weights(n)
    for a in range(n):
        constant = a * int(weights.sum())
        for j in range(n):
            hit = {
                D.tuple_index(constant + (b - a) * int(weights[j])) for b in range(n)
            }
            if len(hit) != sum(c.period for c in D.classes):
                coverage = False
    if not coverage:
        raise ConsistencyError("some unit contains no tuple of the form a_j(b)")

    return ClosureReport(
        permutation_closure=closed,
        sampled=sampled,
        pairs_checked=pairs,
        u1_class=u1.id,
        u1_period=u1.period,
        constants_co_classed=co_classed,
        canonical_coverage=coverage,
    )


def group_class_description(
    D: ClassDecomposition, G: CayleyTable, A: GroupAnalysis
) -> GroupClassReport:
    """Describe the classes of a group through Pi and the cosets of G'.

    Hall-Paige: each class is one fiber {V : Pi(V) in hG'} with a single unit.
    Otherwise each class has two units, the fibers of hG' and hgG'.
    """
    D.check_table(G)
    if not A.is_group or A.hall_paige is None:
        raise StructureError("group_class_description needs a group analysis")
    n = D.n
    labels = np.array(A.coset_labels(), dtype=np.int64)
    coset_of_tuple = labels[_pi_all(G)]
    commutator_order = len(A.commutator)
    unit_size = commutator_order * n ** (n - 1)
    period = 1 if A.hall_paige else 2
    expected = n // (period * commutator_order)

    unit_cosets: List[List[int]] = []
    for c in D.classes:
        if c.period != period:
            raise ConsistencyError(f"class {c.id} has period {c.period}, expected {period}")
        cosets = []
        for unit in c.units:
            values = np.unique(coset_of_tuple[unit])
            if len(values) != 1 or len(unit) != unit_size:
                raise ConsistencyError(f"a unit of class {c.id} is not a single Pi-fiber of size {unit_size}")
            cosets.append(int(values[0]))
        # the two units differ by the involution g
        if not A.hall_paige:
            g_label = A.coset_index(A.involution_g)
            h = A.cosets[cosets[0]][0]
            shifted = A.coset_index(G.multiply(h, A.cosets[g_label][0]))
            if shifted != cosets[1]:
                raise ConsistencyError(f"units of class {c.id} are not hG' and hgG'")
        unit_cosets.append(cosets)
    if len(D.classes) != expected:
        raise ConsistencyError(f"{len(D.classes)} classes, expected n / (tau |G'|) = {expected}")
    if len({c.size for c in D.classes}) != 1:
        raise ConsistencyError("classes of a group differ in size")
    return GroupClassReport(
        hall_paige=A.hall_paige,
        classes=len(D.classes),
        expected_classes=expected,
        unit_size=unit_size,
        unit_cosets=unit_cosets,
    )


def product_checks(
    D: ClassDecomposition,
    G: CayleyTable,
    profile: PowerProfile,
    A: Optional[GroupAnalysis] = None,
) -> ProductCheckReport:
    """Pi over the class of the permutations against P^infinity, and r against |G'| for loops.

    Membership and size bounds depend on P^infinity and are only fatal when
    the power profile has stabilized.
    """
    D.check_table(G)
    n = D.n
    u1 = D.class_containing(TupleCode.identity(n))
    values = sorted(set((_pi_all(G)[u1.members] + 1).tolist()))
    within = set(values) <= set(profile.p_infinity)
    p = u1.size // n ** (n - 1)
    p_within = p <= len(profile.p_infinity)
    if not (within and p_within):
        if profile.stabilized:
            raise ConsistencyError(
                f"Pi over the permutation class {values} escapes P^infinity {profile.p_infinity}"
            )
        logger.warning("P^infinity has not stabilized; product checks are inconclusive")

    commutator_order = None
    in_one_coset = None
    if A is not None:
        if find_identity(G) != A.identity:
            raise StructureError("group analysis does not belong to this table")
        commutator_order = len(A.commutator)
        if u1.r > commutator_order:
            raise ConsistencyError(f"r = {u1.r} exceeds |G'| = {commutator_order}")
        in_one_coset = all(
            len({A.coset_index(x) for x in p_set}) == 1 for p_set in profile.p_sets
        )
        if not in_one_coset:
            raise ConsistencyError("some P^k meets more than one coset of G'")
    return ProductCheckReport(
        u1_pi_values=values,
        within_p_infinity=within,
        conclusive=profile.stabilized or (within and p_within),
        p=p,
        p_within_bound=p_within,
        r1=u1.r,
        commutator_order=commutator_order,
        power_sets_in_one_coset=in_one_coset,
    )


def block_parity_check(D: ClassDecomposition, G: CayleyTable, T: TransitionMatrix) -> BlockParityReport:
    """Parity of block tables: the number of entries from {k+1..2k}, mod 2.

    One step preserves parity when k is even and flips it when k is odd,
    so k even gives at least two classes and k odd gives every class two or more units.
    """
    D.check_table(G)
    n = G.n
    if n % 2:
        raise StructureError("block tables have even order")
    k = n // 2
    upper = np.arange(n) >= k
    table = G.zero_based
    expected_upper = upper[:, None] ^ upper[None, :]
    if not np.array_equal(upper[table], expected_upper):
        raise StructureError("the table is not of the form [[A', B'], [B'', A'']]")

    parity = upper[tuple_space(n)].sum(axis=1) % 2
    flips = k % 2 == 1
    if not np.all(parity[T.targets] == (parity[:, None] ^ int(flips))):
        raise ConsistencyError("a step does not act on parity as predicted")
    min_units = min(c.period for c in D.classes)
    if flips:
        holds = min_units >= 2
    else:
        holds = len(D.classes) >= 2 and all(
            len(np.unique(parity[c.members])) == 1 for c in D.classes
        )
    if not holds:
        raise ConsistencyError("parity does not separate the classes as predicted")
    return BlockParityReport(k=k, flips=flips, classes=len(D.classes), min_units=min_units, holds=holds)


def u1_closure_experiment(
    D: ClassDecomposition, G: CayleyTable, seed: int = 0, is_group: Optional[bool] = None
) -> U1ClosureReport:
    """Is the class of the permutations closed under entrywise multiplication in G^n?

    Observational for quasigroups. For groups the class is a subgroup, so a
    counterexample is an error.
    """
    D.check_table(G)
    n = D.n
    u1 = D.class_containing(TupleCode.identity(n))
    members = u1.members
    digits = tuple_space(n)
    table = G.zero_based
    weights = code_weights(n)
    sampled = len(members) ** 2 > EXHAUSTIVE_PAIR_LIMIT
    counterexample = None
    if sampled:
        rng = np.random.default_rng(seed)
        left = members[rng.integers(0, len(members), CLOSURE_SAMPLES)]
        right = members[rng.integers(0, len(members), CLOSURE_SAMPLES)]
        products = table[digits[left], digits[right]] @ weights
        bad = np.flatnonzero(D.class_of[products] != u1.id)
        if len(bad):
            counterexample = (int(left[bad[0]]), int(right[bad[0]]), int(products[bad[0]]))
        pairs = CLOSURE_SAMPLES
    else:
        chunk = max(1, EXHAUSTIVE_PAIR_LIMIT // (len(members) * n))
        for start in range(0, len(members), chunk):
            left = members[start : start + chunk]
            products = table[digits[left][:, None, :], digits[members][None, :, :]] @ weights
            bad = np.argwhere(D.class_of[products] != u1.id)
            if len(bad):
                row, column = bad[0]
                counterexample = (int(left[row]), int(members[column]), int(products[row, column]))
                break
        pairs = len(members) ** 2
    closed = counterexample is None
    if not closed and is_group:
        raise ConsistencyError("the permutation class of a group is not closed under multiplication")
    if not closed:
        logger.info(f"U_1 is not closed: {counterexample}")
    return U1ClosureReport(
        closed=closed,
        sampled=sampled,
        pairs_checked=pairs,
        counterexample=None
        if counterexample is None
        else tuple(str(TupleCode.from_code(n, code)) for code in counterexample),
    )
