import logging
import math
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from algebra.cayley import CayleyTable
from algebra.tuples import TupleCode
from classes.convergence import convergence_report
from classes.decompose import ClassDecomposition
from constants import (
    KIND_DIAGONAL,
    KIND_NEAR,
    KIND_TRANSVERSAL,
    RULE_ALL_D,
    RULE_EVEN_D,
    RULE_THRESHOLD,
    ConsistencyError,
    InputValidationError,
    StructureError,
)
from counting.counts import count_diagonals, count_series
from grouptools.commutator import GroupAnalysis
from transition.matrix import TransitionMatrix

logger = logging.getLogger(__name__)

KINDS = (KIND_TRANSVERSAL, KIND_NEAR, KIND_DIAGONAL)
EXISTENCE_DEPTH = 6
NEAR_TRANSVERSAL_NOTE = (
    "every Latin square is conjectured to have a near transversal; "
    "when G has one, G[d] has one for every d"
)


class AsymptoticModel(BaseModel):
    """Constants of the leading term for the class of the permutations."""

    n: int
    r: int = Field(..., description="Unit size of the permutation class divided by n^(n-1)")
    tau: int = Field(..., description="Period of the permutation class")
    class_id: int = 0
    commutator_size: Optional[int] = None
    parity_offset: int = Field(
        default=0, description="Transversal types are reachable iff d = parity_offset mod tau"
    )
    table_digest: str


class Prediction(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    predicted: Fraction
    exists: bool


class CountReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: str
    d: int
    exact: int
    predicted: Fraction
    relative_deviation: Optional[Fraction] = None
    exists: bool
    oracle: Optional[int] = None
    empirical_d0: Optional[int] = None


class ExistenceRule(BaseModel):
    transversal: str = Field(..., description="all_d, even_d_only or threshold")
    transversal_d0: Optional[int] = None
    empirical_d0: Optional[int] = Field(
        default=None,
        description="First d at which the identity row of T^d covers its whole unit",
    )
    tau: int
    near_first_d: Optional[int] = Field(
        default=None, description="First d with a near transversal, within the counted depths"
    )
    near_in_cayley_table: bool = Field(
        ..., description="G[1] has a near transversal, which gives one for every d"
    )
    note: str
    near_note: str = NEAR_TRANSVERSAL_NOTE


def build_model(
    G: CayleyTable,
    D: Optional[ClassDecomposition] = None,
    A: Optional[GroupAnalysis] = None,
) -> AsymptoticModel:
    """Read r and tau off the decomposition, or off G' and Hall-Paige for groups.

    When both are given for a group they must agree (r = |G'|, tau = 1 iff Hall-Paige).
    """
    group_constants = None
    if A is not None and A.is_group and A.hall_paige is not None:
        group_constants = (len(A.commutator), 1 if A.hall_paige else 2)
    if D is not None:
        D.check_table(G)
        u1 = D.class_containing(TupleCode.identity(G.n))
        if group_constants is not None and group_constants != (u1.r, u1.period):
            raise ConsistencyError(
                f"decomposition gives (r, tau) = {(u1.r, u1.period)}, group theory gives {group_constants}"
            )
        r, tau, class_id = u1.r, u1.period, u1.id
    elif group_constants is not None:
        (r, tau), class_id = group_constants, 0
    else:
        raise StructureError("a prediction needs a decomposition or a group analysis")
    return AsymptoticModel(
        n=G.n,
        r=r,
        tau=tau,
        class_id=class_id,
        commutator_size=None if A is None else len(A.commutator),
        table_digest=G.digest,
    )


def _leading(n: int, r: int, power: int) -> Fraction:
    return Fraction(math.factorial(n) ** power, r * n ** (n - 1))


def predict(
    G: CayleyTable,
    kind: str,
    d: int,
    D: Optional[ClassDecomposition] = None,
    A: Optional[GroupAnalysis] = None,
    U: Optional[Union[TupleCode, int]] = None,
    V: Optional[Union[TupleCode, int]] = None,
) -> Prediction:
    """Leading-order count of transversals, near transversals or U-diagonals of type V in G[d]."""
    if kind not in KINDS:
        raise InputValidationError(f"unknown kind {kind!r}; expected one of {KINDS}")
    n = G.n
    if kind == KIND_DIAGONAL:
        if D is None or U is None or V is None:
            raise StructureError("diagonal predictions need a decomposition and both tuples")
        D.check_table(G)
        (class_u, unit_u), (class_v, unit_v) = D.tuple_index(U), D.tuple_index(V)
        c = D.classes[class_u]
        exists = class_u == class_v and (unit_v - unit_u - d) % c.period == 0
        predicted = _leading(n, c.r, d) if exists else Fraction(0)
        return Prediction(predicted=predicted, exists=exists)

    if d < 1:
        raise InputValidationError("d must be at least 1")
    model = build_model(G, D, A)
    has_transversal = (d - model.parity_offset) % model.tau == 0
    if kind == KIND_TRANSVERSAL:
        predicted = _leading(n, model.r, d + 1) if has_transversal else Fraction(0)
        return Prediction(predicted=predicted, exists=has_transversal)
    if has_transversal:
        c = Fraction(n, 2) * (model.r - 1) + 1
    else:
        c = Fraction(n, 2) * model.r
    return Prediction(predicted=c * _leading(n, model.r, d + 1), exists=True)


def relative_deviation(exact: int, predicted: Fraction) -> Optional[Fraction]:
    if predicted == 0:
        return None
    return abs(Fraction(exact) / predicted - 1)


def existence_rule(
    G: CayleyTable,
    D: Optional[ClassDecomposition] = None,
    A: Optional[GroupAnalysis] = None,
    depth_limit: int = EXISTENCE_DEPTH,
    transition: Optional[TransitionMatrix] = None,
    **count_options,
) -> ExistenceRule:
    """Which d admit transversals and near transversals in G[d].

    Groups follow Hall-Paige. For quasigroups a period-2 permutation class
    gives even d only; with period 1 the exact counts up to `depth_limit`
    decide between all d and a threshold d0. Given `transition` and D, the
    empirical d0 of the convergence report from the identity tuple is
    reported alongside.
    """
    model = build_model(G, D, A)
    empirical_d0 = None
    if D is not None and transition is not None:
        identity = TupleCode.identity(G.n)
        empirical_d0 = convergence_report(transition, D, identity, depth_limit).empirical_d0
    transversals = count_series(G, KIND_TRANSVERSAL, depth_limit, **count_options)
    near = count_series(G, KIND_NEAR, depth_limit, **count_options)
    d0 = None
    if A is not None and A.is_group and A.hall_paige is not None:
        rule = RULE_ALL_D if A.hall_paige else RULE_EVEN_D
        if (model.tau == 1) != A.hall_paige:
            raise ConsistencyError("Hall-Paige verdict disagrees with the period of the permutation class")
        note = "groups: transversals follow the Hall-Paige condition; near transversals exist for every d"
    elif model.tau == 2:
        rule = RULE_EVEN_D
        note = "permutation class of period 2: transversals only for even d"
    else:
        positive = [count > 0 for count in transversals]
        if all(positive):
            rule = RULE_ALL_D
        else:
            rule = RULE_THRESHOLD
            tail_start = len(positive)
            while tail_start > 0 and positive[tail_start - 1]:
                tail_start -= 1
            d0 = tail_start + 1 if tail_start < len(positive) else None
        note = f"permutation class of period 1; transversal counts checked for d <= {depth_limit}"

    for d, count in enumerate(transversals, start=1):
        allowed = rule == RULE_ALL_D or (rule == RULE_EVEN_D and d % 2 == 0)
        if rule != RULE_THRESHOLD and allowed != (count > 0):
            raise ConsistencyError(f"transversal count {count} at d = {d} contradicts rule {rule}")

    near_first = next((d for d, count in enumerate(near, start=1) if count > 0), None)
    return ExistenceRule(
        transversal=rule,
        transversal_d0=d0,
        empirical_d0=empirical_d0,
        tau=model.tau,
        near_first_d=near_first,
        near_in_cayley_table=bool(near and near[0] > 0),
        note=note,
    )


def compare(
    G: CayleyTable,
    kind: str,
    d_range: Tuple[int, int],
    D: Optional[ClassDecomposition] = None,
    A: Optional[GroupAnalysis] = None,
    U: Optional[Union[TupleCode, int]] = None,
    V: Optional[Union[TupleCode, int]] = None,
    oracle_counts: Optional[dict] = None,
    **count_options,
) -> List[CountReport]:
    """Exact, predicted and (when supplied) oracle counts for d in d_range, inclusive.

    Raises:
        ConsistencyError: an exact count disagrees with the oracle or with the existence rule
    """
    low, high = d_range
    if low > high or low < (0 if kind == KIND_DIAGONAL else 1):
        raise InputValidationError(f"bad range {low}..{high}")
    if kind == KIND_DIAGONAL:
        T = count_options.get("T")
        exact = [count_diagonals(G, U, V, d, T=T) for d in range(low, high + 1)]
    else:
        exact = count_series(G, kind, high, **count_options)[low - 1 :]
    reports = []
    for d, value in zip(range(low, high + 1), exact):
        prediction = predict(G, kind, d, D, A, U, V)
        if not prediction.exists and value != 0 and kind != KIND_NEAR:
            raise ConsistencyError(f"{kind} count {value} at d = {d} where none can exist")
        oracle = None if oracle_counts is None else oracle_counts.get(d)
        if oracle is not None and oracle != value:
            logger.error(f"Exact {kind} count {value} differs from oracle {oracle} at d = {d}")
            raise ConsistencyError(f"exact {value} != oracle {oracle} at d = {d}")
        reports.append(
            CountReport(
                kind=kind,
                d=d,
                exact=value,
                predicted=prediction.predicted,
                relative_deviation=relative_deviation(value, prediction.predicted),
                exists=prediction.exists,
                oracle=oracle,
            )
        )
    return reports
