import hashlib
import logging
from functools import lru_cache
from typing import IO, Iterable, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from constants import CayleyFormatError, LatinSquareError

logger = logging.getLogger(__name__)


def validate_latin(n: int, rows: Sequence[Sequence[int]]) -> None:
    """Check that `rows` is an n x n array over 1..n with no repeated symbol in any line.

    Raises:
        CayleyFormatError: wrong shape or a symbol outside 1..n
        LatinSquareError: a row or column repeats a symbol (1-based index)
    """
    if len(rows) != n:
        raise CayleyFormatError(f"expected {n} rows, found {len(rows)}")
    for index, row in enumerate(rows, start=1):
        if len(row) != n:
            raise CayleyFormatError(f"row {index} has {len(row)} entries, expected {n}")
        for symbol in row:
            if not 1 <= symbol <= n:
                raise CayleyFormatError(f"row {index}: symbol {symbol} outside 1..{n}")
        seen = set()
        for symbol in row:
            if symbol in seen:
                raise LatinSquareError("row", index, symbol)
            seen.add(symbol)
    for column in range(n):
        seen = set()
        for row in rows:
            symbol = row[column]
            if symbol in seen:
                raise LatinSquareError("column", column + 1, symbol)
            seen.add(symbol)


@lru_cache(maxsize=128)
def _zero_based(table: Tuple[Tuple[int, ...], ...]) -> np.ndarray:
    array = np.array(table, dtype=np.int64) - 1
    array.setflags(write=False)
    return array


class CayleyTable(BaseModel):
    """The binary operation of a quasigroup of order n; entry (a, b) is a*b, symbols 1-based."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Order of the quasigroup")
    table: Tuple[Tuple[int, ...], ...] = Field(
        ..., description="n x n array of symbols in 1..n"
    )

    @model_validator(mode="after")
    def _check_latin(self) -> "CayleyTable":
        validate_latin(self.n, self.table)
        return self

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "CayleyTable":
        table = tuple(tuple(int(x) for x in row) for row in rows)
        return cls(n=len(table), table=table)

    @property
    def zero_based(self) -> np.ndarray:
        """Read-only 0-based copy of the table for vectorized arithmetic."""
        return _zero_based(self.table)

    @property
    def symbols(self) -> range:
        return range(1, self.n + 1)

    @property
    def digest(self) -> str:
        return hashlib.sha256(format_cayley(self).encode("utf-8")).hexdigest()

    def multiply(self, a: int, b: int) -> int:
        return self.table[a - 1][b - 1]


def parse_cayley(source: Union[str, IO[str]]) -> CayleyTable:
    """Parse a Cayley table from text or a character stream.

    Line 1 holds the order n, followed by n lines of n whitespace-separated
    symbols in 1..n. Lines starting with `#` and blank lines are skipped.
    """
    text = source if isinstance(source, str) else source.read()
    lines = []
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append(stripped)
    if not lines:
        raise CayleyFormatError("empty input: expected the order n on the first line")

    header = lines[0].split()
    if len(header) != 1 or not header[0].isdigit():
        raise CayleyFormatError(f"first line must be the order n, got {lines[0]!r}")
    n = int(header[0])
    if n < 1:
        raise CayleyFormatError("order must be a positive integer")

    rows = []
    for index, line in enumerate(lines[1:], start=1):
        try:
            rows.append(tuple(int(token) for token in line.split()))
        except ValueError:
            raise CayleyFormatError(f"row {index}: non-integer entry in {line!r}")
    validate_latin(n, rows)
    logger.info(f"Parsed Cayley table of order {n}")
    return CayleyTable(n=n, table=tuple(rows))


def format_cayley(G: CayleyTable) -> str:
    """Serialize a table in the canonical file format (single spaces, trailing newline)."""
    lines = [str(G.n)]
    lines.extend(" ".join(str(symbol) for symbol in row) for row in G.table)
    return "\n".join(lines) + "\n"
