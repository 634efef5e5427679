from typing import List

from pydantic import BaseModel, model_validator

from algebra.cayley import CayleyTable
from algebra.tuples import Permutation
from constants import StructureError


class Isotopy(BaseModel):
    """Row, column and symbol bijections (alpha, beta, gamma) with alpha(x).beta(y) = gamma(x*y)."""

    alpha: Permutation
    beta: Permutation
    gamma: Permutation

    @model_validator(mode="after")
    def _check_orders(self) -> "Isotopy":
        if not self.alpha.n == self.beta.n == self.gamma.n:
            raise StructureError("isotopy components must have the same order")
        return self

    @property
    def n(self) -> int:
        return self.alpha.n

    @classmethod
    def identity(cls, n: int) -> "Isotopy":
        e = Permutation.identity(n)
        return cls(alpha=e, beta=e, gamma=e)

    @classmethod
    def rows(cls, alpha: Permutation) -> "Isotopy":
        e = Permutation.identity(alpha.n)
        return cls(alpha=alpha, beta=e, gamma=e)

    @classmethod
    def columns(cls, beta: Permutation) -> "Isotopy":
        e = Permutation.identity(beta.n)
        return cls(alpha=e, beta=beta, gamma=e)

    @classmethod
    def symbols(cls, gamma: Permutation) -> "Isotopy":
        e = Permutation.identity(gamma.n)
        return cls(alpha=e, beta=e, gamma=gamma)

    def inverse(self) -> "Isotopy":
        return Isotopy(
            alpha=self.alpha.inverse(), beta=self.beta.inverse(), gamma=self.gamma.inverse()
        )

    def nontrivial_components(self) -> List[str]:
        return [
            name
            for name, component in (("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma))
            if not component.is_identity
        ]


def apply_isotopy(G: CayleyTable, iso: Isotopy) -> CayleyTable:
    """Return H with H(alpha(x), beta(y)) = gamma(x * y)."""
    if iso.n != G.n:
        raise StructureError(f"isotopy of order {iso.n} applied to table of order {G.n}")
    rows = [[0] * G.n for _ in range(G.n)]
    for x in G.symbols:
        for y in G.symbols:
            rows[iso.alpha(x) - 1][iso.beta(y) - 1] = iso.gamma(G.multiply(x, y))
    return CayleyTable.from_rows(rows)
