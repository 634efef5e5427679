import itertools
import logging
import random
from typing import List, Optional, Sequence, Set

from algebra.cayley import CayleyTable, validate_latin
from constants import InputValidationError

logger = logging.getLogger(__name__)

EXAMPLE1_ROWS = (
    (1, 2),
    (2, 1),
)

EXAMPLE2_ROWS = (
    (2, 1, 4, 3),
    (1, 2, 3, 4),
    (3, 4, 1, 2),
    (4, 3, 2, 1),
)

CATALOG_NAMES = ("cyclic", "direct_product", "example1", "example2", "block", "random", "symmetric")


def cyclic(n: int) -> CayleyTable:
    """Z_n with a*b = ((a-1) + (b-1) mod n) + 1; the identity is 1."""
    if n < 1:
        raise InputValidationError("cyclic order must be positive")
    return CayleyTable.from_rows(
        [[(a + b) % n + 1 for b in range(n)] for a in range(n)]
    )


def direct_product(G: CayleyTable, H: CayleyTable) -> CayleyTable:
    """G x H with (g, h) encoded as (g-1)*|H| + h."""
    m = H.n

    def encode(g: int, h: int) -> int:
        return (g - 1) * m + h

    elements = [(g, h) for g in G.symbols for h in H.symbols]
    return CayleyTable.from_rows(
        [
            [encode(G.multiply(g1, g2), H.multiply(h1, h2)) for (g2, h2) in elements]
            for (g1, h1) in elements
        ]
    )


def example1() -> CayleyTable:
    return CayleyTable.from_rows(EXAMPLE1_ROWS)


def example2() -> CayleyTable:
    """The order-4 quasigroup obtained from Z_2^2 by swapping its first two rows."""
    return CayleyTable.from_rows(EXAMPLE2_ROWS)


def symmetric(n: int) -> CayleyTable:
    """S_n on permutations in lexicographic order, (p*q)(x) = p(q(x)); the identity is 1."""
    if not 1 <= n <= 4:
        raise InputValidationError("symmetric(n) is available for 1 <= n <= 4")
    perms = list(itertools.permutations(range(n)))
    index = {p: i + 1 for i, p in enumerate(perms)}
    return CayleyTable.from_rows(
        [[index[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]
    )


def _check_part(name: str, rows: Sequence[Sequence[int]], k: int, low: int) -> None:
    if len(rows) != k or any(len(row) != k for row in rows):
        raise InputValidationError(f"block part {name} must be {k} x {k}")
    expected = set(range(low, low + k))
    for row in rows:
        if set(row) != expected:
            raise InputValidationError(
                f"block part {name} must be a latin square on symbols {low}..{low + k - 1}"
            )
    for column in range(k):
        if {row[column] for row in rows} != expected:
            raise InputValidationError(
                f"block part {name} must be a latin square on symbols {low}..{low + k - 1}"
            )


def block(
    a_prime: Sequence[Sequence[int]],
    a_second: Sequence[Sequence[int]],
    b_prime: Sequence[Sequence[int]],
    b_second: Sequence[Sequence[int]],
) -> CayleyTable:
    """Assemble the order-2k table [[A', B'], [B'', A'']].

    A', A'' are latin squares on S_1 = {1..k}; B', B'' on S_2 = {k+1..2k}.
    """
    k = len(a_prime)
    if k < 1:
        raise InputValidationError("block parts must be non-empty")
    _check_part("A'", a_prime, k, 1)
    _check_part("A''", a_second, k, 1)
    _check_part("B'", b_prime, k, k + 1)
    _check_part("B''", b_second, k, k + 1)
    rows = [list(a_prime[i]) + list(b_prime[i]) for i in range(k)]
    rows += [list(b_second[i]) + list(a_second[i]) for i in range(k)]
    return CayleyTable.from_rows(rows)


def shift_symbols(G: CayleyTable, offset: int) -> List[List[int]]:
    return [[symbol + offset for symbol in row] for row in G.table]


def block_of_cyclic(k: int) -> CayleyTable:
    """Block table with A' = A'' = Z_k and B' = B'' = Z_k shifted onto k+1..2k."""
    base = cyclic(k)
    shifted = shift_symbols(base, k)
    return block(base.table, base.table, shifted, shifted)


def _random_row(
    n: int, used: List[Set[int]], rng: random.Random
) -> Optional[List[int]]:
    row = [0] * n
    taken: Set[int] = set()

    def place(column: int) -> bool:
        if column == n:
            return True
        candidates = [s for s in range(1, n + 1) if s not in taken and s not in used[column]]
        rng.shuffle(candidates)
        for symbol in candidates:
            row[column] = symbol
            taken.add(symbol)
            if place(column + 1):
                return True
            taken.discard(symbol)
        return False

    return row if place(0) else None


def random_latin(n: int, seed: int) -> CayleyTable:
    """Seeded latin square, built row by row with randomized backtracking.

    Every latin rectangle extends by a row, so each row search succeeds.
    The distribution is not uniform.
    """
    if n < 1:
        raise InputValidationError("random order must be positive")
    rng = random.Random(seed)
    used: List[Set[int]] = [set() for _ in range(n)]
    rows = []
    for _ in range(n):
        row = _random_row(n, used, rng)
        if row is None:
            raise InputValidationError(f"could not extend latin rectangle of order {n}")
        for column, symbol in enumerate(row):
            used[column].add(symbol)
        rows.append(row)
    validate_latin(n, rows)
    logger.info(f"Generated random latin square of order {n} with seed {seed}")
    return CayleyTable.from_rows(rows)


def catalog(name: str, *params: int, seed: Optional[int] = None) -> CayleyTable:
    """Build a named table. Parameters are integers; `direct_product` takes cyclic orders."""
    try:
        if name == "example1":
            return example1()
        if name == "example2":
            return example2()
        if name == "cyclic":
            (n,) = params
            return cyclic(n)
        if name == "symmetric":
            (n,) = params
            return symmetric(n)
        if name == "random":
            if len(params) == 2:
                n, seed = params
            else:
                (n,) = params
            return random_latin(n, seed if seed is not None else 0)
        if name == "block":
            (k,) = params
            return block_of_cyclic(k)
        if name == "direct_product":
            if len(params) < 2:
                raise InputValidationError("direct_product needs at least two cyclic orders")
            table = cyclic(params[0])
            for order in params[1:]:
                table = direct_product(table, cyclic(order))
            return table
    except ValueError:
        raise InputValidationError(f"wrong number of parameters for catalog entry {name!r}")
    raise InputValidationError(
        f"unknown catalog entry {name!r}; expected one of {', '.join(CATALOG_NAMES)}"
    )


def from_spec(spec: str, seed: Optional[int] = None) -> CayleyTable:
    """Resolve a compact source such as `example2`, `cyclic:5`, `random:5:7`, `direct_product:2x4`."""
    name, _, rest = spec.partition(":")
    params: List[int] = []
    if rest:
        separator = "x" if name == "direct_product" else ":"
        try:
            params = [int(part) for part in rest.split(separator)]
        except ValueError:
            raise InputValidationError(f"bad catalog parameters in {spec!r}")
    return catalog(name, *params, seed=seed)
