import logging
from fractions import Fraction
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from algebra.tuples import TupleCode
from classes.decompose import ClassDecomposition
from constants import StructureError
from transition.matrix import TransitionMatrix
from transition.propagate import propagate_range

logger = logging.getLogger(__name__)


class ConvergenceRow(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    d: int
    deviation: Fraction = Field(..., description="max |T_{seed,V}(d) / n!^d - 1 / |unit||")
    support: int
    unit_size: int


class ConvergenceReport(BaseModel):
    seed: str
    class_id: int
    rows: List[ConvergenceRow]
    empirical_d0: Optional[int] = Field(
        default=None, description="First d whose support is the whole target unit"
    )


def convergence_report(
    T: TransitionMatrix,
    D: ClassDecomposition,
    seed: Union[TupleCode, int],
    d_max: int,
    threads: int = 1,
) -> ConvergenceReport:
    """Distance of row `seed` of T^d from the uniform distribution on its target unit, d = 1..d_max."""
    if T.table_digest != D.table_digest:
        raise StructureError("decomposition and transition matrix come from different tables")
    code = seed.code if isinstance(seed, TupleCode) else int(seed)
    class_id, unit = D.tuple_index(code)
    c = D.classes[class_id]
    rows = []
    d0 = None
    for vector in propagate_range(T, code, d_max, threads):
        if vector.depth == 0:
            continue
        target = c.units[(unit + vector.depth) % c.period]
        mass = T.degree**vector.depth
        size = len(target)
        worst = max(abs(int(value) * size - mass) for value in vector.entries[target])
        support = len(vector.support())
        rows.append(
            ConvergenceRow(
                d=vector.depth,
                deviation=Fraction(worst, mass * size),
                support=support,
                unit_size=size,
            )
        )
        if d0 is None and support == size:
            d0 = vector.depth
    logger.info(f"Convergence from {code}: empirical d0 = {d0}")
    return ConvergenceReport(
        seed=str(TupleCode.from_code(T.n, code)), class_id=class_id, rows=rows, empirical_d0=d0
    )
