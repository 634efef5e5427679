import logging
import math
import struct
from pathlib import Path
from typing import Optional

import numpy as np

from algebra.cayley import CayleyTable
from config import Settings
from constants import CACHE_MAGIC, CACHE_VERSION, CacheFormatError, ConsistencyError
from db.setup import setup
from db.varint import decode_varints, encode_varints
from transition.matrix import TransitionMatrix, build_transition, verify_transition

logger = logging.getLogger(__name__)

# magic, format version, order n, sha256 of the Cayley table
HEADER = struct.Struct(">4sHH32s")
CACHE_SUFFIX = ".itdt"


def cache_path(cache_dir: str, G: CayleyTable) -> Path:
    return Path(cache_dir) / f"{G.digest}{CACHE_SUFFIX}"


def dump_transition(T: TransitionMatrix) -> bytes:
    """Header, then per row: the number of distinct targets, followed by (code, value) pairs in ascending code order."""
    size, degree = T.targets.shape
    targets = T.targets.astype(np.int64)
    # targets are sorted within a row, so equal codes form runs
    starts = np.ones(targets.shape, dtype=bool)
    starts[:, 1:] = targets[:, 1:] != targets[:, :-1]
    run_starts = np.flatnonzero(starts.ravel())
    run_values = np.diff(np.append(run_starts, targets.size))
    distinct = starts.sum(axis=1)
    before = np.cumsum(distinct) - distinct
    row_offsets = np.arange(size) + 2 * before

    run_rows = run_starts // degree
    run_positions = row_offsets[run_rows] + 1 + 2 * (np.arange(len(run_starts)) - before[run_rows])
    values = np.empty(size + 2 * len(run_starts), dtype=np.int64)
    values[row_offsets] = distinct
    values[run_positions] = targets.ravel()[run_starts]
    values[run_positions + 1] = run_values
    header = HEADER.pack(CACHE_MAGIC, CACHE_VERSION, T.n, bytes.fromhex(T.table_digest))
    return header + encode_varints(values)


def parse_transition(data: bytes, n: int, table_digest: Optional[str] = None) -> TransitionMatrix:
    """Parse a cached matrix, rejecting a wrong magic, version, order or table.

    Raises:
        CacheFormatError: the data does not describe a valid matrix for this table
    """
    if len(data) < HEADER.size:
        raise CacheFormatError("cache file shorter than its header")
    magic, version, order, digest = HEADER.unpack_from(data)
    if magic != CACHE_MAGIC:
        raise CacheFormatError(f"bad magic {magic!r}")
    if version != CACHE_VERSION:
        raise CacheFormatError(f"cache version {version}, expected {CACHE_VERSION}")
    if order != n:
        raise CacheFormatError(f"cache holds order {order}, expected {n}")
    if table_digest is not None and digest.hex() != table_digest:
        raise CacheFormatError("cache was built from a different table")

    size, degree = n**n, math.factorial(n)
    values = decode_varints(data[HEADER.size :])
    targets = np.empty((size, degree), dtype=np.int32)
    position = 0
    for row in range(size):
        if position >= len(values):
            raise CacheFormatError(f"cache ends after {row} of {size} rows")
        count = int(values[position])
        pairs = values[position + 1 : position + 1 + 2 * count]
        if count < 1 or len(pairs) != 2 * count:
            raise CacheFormatError(f"row {row} is truncated")
        codes, weights = pairs[0::2], pairs[1::2]
        if np.any(np.diff(codes) <= 0) or codes[-1] >= size:
            raise CacheFormatError(f"row {row} codes are not ascending tuple codes")
        if np.any(weights < 1) or weights.sum() != degree:
            raise CacheFormatError(f"row {row} does not sum to n!")
        targets[row] = np.repeat(codes, weights)
        position += 1 + 2 * count
    if position != len(values):
        raise CacheFormatError(f"{len(values) - position} trailing varints after the last row")
    targets.setflags(write=False)
    T = TransitionMatrix(n=n, table_digest=digest.hex(), targets=targets)
    try:
        verify_transition(T)
    except ConsistencyError as e:
        raise CacheFormatError(f"cached matrix fails its sum checks: {str(e)}")
    return T


def save_transition(T: TransitionMatrix, cache_dir: str) -> bool:
    """
    Write a transition matrix to the cache.
    Returns True if successful, False otherwise.
    """
    path = Path(cache_dir) / f"{T.table_digest}{CACHE_SUFFIX}"
    try:
        setup(cache_dir)
        partial = path.with_suffix(".tmp")
        partial.write_bytes(dump_transition(T))
        partial.replace(path)
        logger.info(f"Cached transition matrix at {path}")
        return True
    except OSError as e:
        logger.error(f"Failed to cache transition matrix: {str(e)}")
        return False


def get_transition(cache_dir: str, G: CayleyTable) -> Optional[TransitionMatrix]:
    """
    Retrieve the cached transition matrix of G.
    Returns None if there is no usable cache entry.
    """
    path = cache_path(cache_dir, G)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        logger.info(f"No cached transition matrix at {path}")
        return None
    except OSError as e:
        logger.error(f"Failed to read cached transition matrix: {str(e)}")
        return None
    try:
        return parse_transition(data, G.n, G.digest)
    except CacheFormatError as e:
        logger.warning(f"Ignoring corrupt cache file {path}: {str(e)}")
        return None


def load_or_build(G: CayleyTable, settings: Settings) -> TransitionMatrix:
    """Transition matrix of G, through the cache when `settings.cache_dir` is set."""
    if settings.cache_dir:
        cached = get_transition(settings.cache_dir, G)
        if cached is not None:
            logger.info("Loaded transition matrix from cache")
            return cached
    T = build_transition(
        G,
        max_order=settings.max_order,
        allow_n7=settings.allow_n7,
        memory_bytes=settings.memory_bytes,
    )
    if settings.cache_dir:
        save_transition(T, settings.cache_dir)
    return T
