import logging
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from algebra.cayley import CayleyTable
from algebra.tuples import TupleCode, permutation_codes, pi_products, tuple_space
from constants import ConsistencyError, StructureError
from transition.matrix import TransitionMatrix

logger = logging.getLogger(__name__)


class EquivalenceClass(BaseModel):
    """An irreducible block of T, split into `period` units cycled by one multiplication step."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    id: int
    members: np.ndarray = Field(..., description="Member codes, ascending")
    period: int = Field(..., ge=1)
    units: List[np.ndarray] = Field(..., description="units[k] maps into units[(k+1) % period]")
    r: int = Field(..., description="Unit size divided by n^(n-1)")
    anchor: int = Field(..., description="Code of the member placed at level 0 of unit 0")

    @property
    def size(self) -> int:
        return len(self.members)


class ClassSummary(BaseModel):
    id: int
    size: int
    period: int
    r: int
    unit_sizes: List[int]
    anchor: str
    contains_permutations: bool
    pi_values: Optional[List[int]] = Field(
        default=None, description="Values of Pi over the class, when a table is supplied"
    )


class ClassDecomposition(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    table_digest: str
    classes: List[EquivalenceClass]
    class_of: np.ndarray = Field(..., description="Class id per code")
    unit_of: np.ndarray = Field(..., description="Unit index within its class, per code")

    def tuple_index(self, U: Union[TupleCode, int]) -> Tuple[int, int]:
        code = U.code if isinstance(U, TupleCode) else int(U)
        return int(self.class_of[code]), int(self.unit_of[code])

    def class_containing(self, U: Union[TupleCode, int]) -> EquivalenceClass:
        return self.classes[self.tuple_index(U)[0]]

    def check_table(self, G: CayleyTable) -> None:
        if G.digest != self.table_digest:
            raise StructureError("decomposition was computed for a different table")


def _support_graph(T: TransitionMatrix) -> csr_matrix:
    indptr = np.arange(0, T.size * T.degree + 1, T.degree, dtype=np.int64)
    data = np.ones(T.size * T.degree, dtype=np.int8)
    return csr_matrix((data, T.targets.ravel(), indptr), shape=(T.size, T.size))


def _bfs_levels(T: TransitionMatrix, roots: np.ndarray) -> np.ndarray:
    level = np.full(T.size, -1, dtype=np.int64)
    level[roots] = 0
    frontier = np.asarray(roots)
    depth = 0
    while len(frontier):
        depth += 1
        reached = np.unique(T.targets[frontier].ravel())
        frontier = reached[level[reached] < 0]
        level[frontier] = depth
    return level


def decompose(T: TransitionMatrix) -> ClassDecomposition:
    """Equivalence classes, periods and units of the transition matrix.

    Classes are ordered with the class of the identity permutation first,
    then by least member code. Units are anchored at the identity
    permutation in its class and at the least member elsewhere.

    Raises:
        ConsistencyError: strong and weak components disagree, or a unit size is not r * n^(n-1)
    """
    graph = _support_graph(T)
    strong_count, strong = connected_components(graph, directed=True, connection="strong")
    weak_count, weak = connected_components(graph, directed=True, connection="weak")
    pairs = np.unique(np.stack([strong, weak], axis=1), axis=0)
    if strong_count != weak_count or len(pairs) != strong_count:
        logger.error(f"{strong_count} strong components but {weak_count} weak components")
        raise ConsistencyError("strong and weak components differ; T is not doubly stochastic")

    identity_code = TupleCode.identity(T.n).code
    _, first_member = np.unique(strong, return_index=True)
    anchors = sorted(
        (int(code) for code in first_member),
        key=lambda code: (strong[code] != strong[identity_code], code),
    )
    anchors = [identity_code if strong[code] == strong[identity_code] else code for code in anchors]
    relabel = np.empty(strong_count, dtype=np.int64)
    for class_id, anchor in enumerate(anchors):
        relabel[strong[anchor]] = class_id
    class_of = relabel[strong]

    level = _bfs_levels(T, np.array(anchors, dtype=np.int64))
    if np.any(level < 0):
        raise ConsistencyError("BFS from the class anchors missed some tuples")
    row_gcd = np.gcd.reduce(np.abs(level[:, None] + 1 - level[T.targets]), axis=1)
    periods = np.zeros(strong_count, dtype=np.int64)
    np.gcd.at(periods, class_of, row_gcd)
    if np.any(periods == 0):
        raise ConsistencyError("a class has no closed walk")
    unit_of = level % periods[class_of]

    if not np.all(unit_of[T.targets] == (unit_of[:, None] + 1) % periods[class_of][:, None]):
        raise ConsistencyError("a transition does not advance the unit index by one")

    block = T.n ** (T.n - 1)
    classes = []
    for class_id, anchor in enumerate(anchors):
        members = np.flatnonzero(class_of == class_id)
        period = int(periods[class_id])
        units = [members[unit_of[members] == k] for k in range(period)]
        sizes = {len(unit) for unit in units}
        if len(sizes) != 1:
            raise ConsistencyError(f"class {class_id} has units of sizes {sorted(sizes)}")
        unit_size = sizes.pop()
        if unit_size % block or not 1 <= unit_size // block <= T.n:
            raise ConsistencyError(f"unit size {unit_size} of class {class_id} is not r * {block}")
        classes.append(
            EquivalenceClass(
                id=class_id,
                members=members,
                period=period,
                units=units,
                r=unit_size // block,
                anchor=anchor,
            )
        )
    logger.info(
        f"Decomposed {T.size} tuples into {len(classes)} classes with periods {[c.period for c in classes]}"
    )
    return ClassDecomposition(
        n=T.n, table_digest=T.table_digest, classes=classes, class_of=class_of, unit_of=unit_of
    )


def summarize(D: ClassDecomposition, G: Optional[CayleyTable] = None) -> List[ClassSummary]:
    """JSON-ready per-class summary; Pi values are included when G is given."""
    permutation_classes = set(D.class_of[permutation_codes(D.n)].tolist())
    pi_all = None
    if G is not None:
        D.check_table(G)
        pi_all = pi_products(G, tuple_space(D.n)) + 1
    summaries = []
    for c in D.classes:
        summaries.append(
            ClassSummary(
                id=c.id,
                size=c.size,
                period=c.period,
                r=c.r,
                unit_sizes=[len(unit) for unit in c.units],
                anchor=str(TupleCode.from_code(D.n, c.anchor)),
                contains_permutations=c.id in permutation_classes,
                pi_values=None if pi_all is None else sorted(set(pi_all[c.members].tolist())),
            )
        )
    return summaries
