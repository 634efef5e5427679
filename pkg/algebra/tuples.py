import itertools
from functools import lru_cache, reduce
from typing import Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from algebra.cayley import CayleyTable
from constants import InputValidationError, StructureError


def encode_digits(n: int, digits: Sequence[int]) -> int:
    """Canonical code of a 1-based tuple, most significant digit first."""
    code = 0
    for digit in digits:
        code = code * n + (digit - 1)
    return code


def decode_code(n: int, code: int) -> Tuple[int, ...]:
    if not 0 <= code < n**n:
        raise InputValidationError(f"code {code} outside 0..{n**n - 1}")
    digits = []
    for _ in range(n):
        code, digit = divmod(code, n)
        digits.append(digit + 1)
    return tuple(reversed(digits))


class Permutation(BaseModel):
    """A bijection of 1..n given by its image tuple."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    image: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_bijection(self) -> "Permutation":
        if sorted(self.image) != list(range(1, self.n + 1)):
            raise InputValidationError(
                f"{self.image} is not a permutation of 1..{self.n}"
            )
        return self

    @classmethod
    def of(cls, image: Sequence[int]) -> "Permutation":
        return cls(n=len(image), image=tuple(image))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(n=n, image=tuple(range(1, n + 1)))

    def __call__(self, x: int) -> int:
        return self.image[x - 1]

    @property
    def is_identity(self) -> bool:
        return self.image == tuple(range(1, self.n + 1))

    @property
    def zero_based(self) -> np.ndarray:
        return np.array(self.image, dtype=np.int64) - 1

    def inverse(self) -> "Permutation":
        inverse = [0] * self.n
        for x, y in enumerate(self.image, start=1):
            inverse[y - 1] = x
        return Permutation(n=self.n, image=tuple(inverse))

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other."""
        return Permutation(n=self.n, image=tuple(self(other(x)) for x in range(1, self.n + 1)))


class TupleCode(BaseModel):
    """An element of I_n^n: a row/column index of the transition matrix."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    digits: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_digits(self) -> "TupleCode":
        if len(self.digits) != self.n:
            raise InputValidationError(
                f"tuple {self.digits} must have exactly {self.n} entries"
            )
        for digit in self.digits:
            if not 1 <= digit <= self.n:
                raise InputValidationError(f"tuple entry {digit} outside 1..{self.n}")
        return self

    @computed_field
    @property
    def code(self) -> int:
        return encode_digits(self.n, self.digits)

    @classmethod
    def of(cls, digits: Sequence[int]) -> "TupleCode":
        return cls(n=len(digits), digits=tuple(digits))

    @classmethod
    def from_code(cls, n: int, code: int) -> "TupleCode":
        return cls(n=n, digits=decode_code(n, code))

    @classmethod
    def identity(cls, n: int) -> "TupleCode":
        """The identity permutation (1, ..., n)."""
        return cls(n=n, digits=tuple(range(1, n + 1)))

    @classmethod
    def constant(cls, n: int, a: int) -> "TupleCode":
        return cls(n=n, digits=(a,) * n)

    @classmethod
    def canonical(cls, n: int, a: int, i: int, b: int) -> "TupleCode":
        """The tuple equal to a everywhere except coordinate i (1-based), which holds b."""
        digits = [a] * n
        digits[i - 1] = b
        return cls(n=n, digits=tuple(digits))

    @classmethod
    def parse(cls, text: str, n: int) -> "TupleCode":
        """Parse a comma-separated literal such as "1,2,3"."""
        try:
            digits = tuple(int(part) for part in text.split(","))
        except ValueError:
            raise InputValidationError(f"tuple literal {text!r} must be comma-separated integers")
        return cls(n=n, digits=digits)

    def replace(self, i: int, b: int) -> "TupleCode":
        """V_i(b)."""
        digits = list(self.digits)
        digits[i - 1] = b
        return TupleCode(n=self.n, digits=tuple(digits))

    @property
    def is_permutation(self) -> bool:
        return len(set(self.digits)) == self.n

    def __str__(self) -> str:
        return "(" + ",".join(str(d) for d in self.digits) + ")"


def _check_order(G: CayleyTable, *tuples: TupleCode) -> None:
    for V in tuples:
        if V.n != G.n:
            raise StructureError(f"tuple {V} has order {V.n}, table has order {G.n}")


def multiply_tuples(G: CayleyTable, U: TupleCode, W: TupleCode) -> TupleCode:
    """Entrywise product: V[i] = U[i] * W[i]."""
    _check_order(G, U, W)
    return TupleCode(
        n=G.n, digits=tuple(G.multiply(u, w) for u, w in zip(U.digits, W.digits))
    )


def pi_product(G: CayleyTable, V: Union[TupleCode, Sequence[int]]) -> int:
    """Left-nested product (...(v1 * v2) * ...) * vk of the entries of V."""
    entries = V.digits if isinstance(V, TupleCode) else tuple(V)
    if not entries:
        raise InputValidationError("cannot take the product of an empty tuple")
    for symbol in entries:
        if not 1 <= symbol <= G.n:
            raise StructureError(f"symbol {symbol} outside 1..{G.n}")
    product = entries[0]
    for symbol in entries[1:]:
        product = G.multiply(product, symbol)
    return product


def eval_iterated(G: CayleyTable, xs: Sequence[int]) -> int:
    """G[d](x_1, ..., x_{d+1}) for d = len(xs) - 1; G[0] is the identity map."""
    if not xs:
        raise InputValidationError("G[d] takes d + 1 >= 1 arguments")
    return reduce(G.multiply, xs)


def symbol_action(V: TupleCode, pi: Permutation) -> TupleCode:
    """pi(V) = (pi(v_1), ..., pi(v_n))."""
    if V.n != pi.n:
        raise StructureError(f"tuple order {V.n} differs from permutation order {pi.n}")
    return TupleCode(n=V.n, digits=tuple(pi(v) for v in V.digits))


def coordinate_action(V: TupleCode, pi: Permutation) -> TupleCode:
    """V^pi = (v_{pi(1)}, ..., v_{pi(n)})."""
    if V.n != pi.n:
        raise StructureError(f"tuple order {V.n} differs from permutation order {pi.n}")
    return TupleCode(n=V.n, digits=tuple(V.digits[pi(i) - 1] for i in range(1, V.n + 1)))


# Vectorized helpers over the whole tuple space. All arrays are 0-based and
# indexed by canonical code.


@lru_cache(maxsize=16)
def code_weights(n: int) -> np.ndarray:
    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    weights.setflags(write=False)
    return weights


@lru_cache(maxsize=8)
def tuple_space(n: int) -> np.ndarray:
    """Array of shape (n^n, n): row c holds the 0-based digits of code c."""
    digits = np.stack(np.unravel_index(np.arange(n**n), (n,) * n), axis=1).astype(np.int64)
    digits.setflags(write=False)
    return digits


def encode_rows(n: int, digits0: np.ndarray) -> np.ndarray:
    return digits0 @ code_weights(n)


@lru_cache(maxsize=16)
def permutation_array(n: int) -> np.ndarray:
    """All n! permutations as 0-based rows, in lexicographic order."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    perms.setflags(write=False)
    return perms


def permutation_codes(n: int) -> np.ndarray:
    return encode_rows(n, permutation_array(n))


def constant_codes(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int64) * int(code_weights(n).sum())


def pi_products(G: CayleyTable, digits0: np.ndarray) -> np.ndarray:
    """0-based Pi(V) for every row of `digits0`."""
    table = G.zero_based
    product = digits0[:, 0].copy()
    for column in range(1, digits0.shape[1]):
        product = table[product, digits0[:, column]]
    return product


def distinct_counts(digits0: np.ndarray) -> np.ndarray:
    ordered = np.sort(digits0, axis=1)
    return 1 + (np.diff(ordered, axis=1) != 0).sum(axis=1)


def symbol_action_codes(n: int, image0: np.ndarray) -> np.ndarray:
    """code(V) -> code(pi(V)) for a 0-based image array."""
    return encode_rows(n, image0[tuple_space(n)])


def coordinate_action_codes(n: int, perm0: np.ndarray) -> np.ndarray:
    """code(V) -> code(V^pi) for a 0-based permutation array."""
    return encode_rows(n, tuple_space(n)[:, perm0])
