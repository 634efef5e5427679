import numpy as np

from constants import CacheFormatError

MAX_VARINT_BYTES = 9


def encode_varints(values: np.ndarray) -> bytes:
    """Unsigned LEB128 encoding of a nonnegative int64 array."""
    values = np.asarray(values, dtype=np.int64).ravel()
    if len(values) and values.min() < 0:
        raise ValueError("varints must be nonnegative")
    width = 1
    while width < MAX_VARINT_BYTES and len(values) and values.max() >= 1 << (7 * width):
        width += 1
    shifts = 7 * np.arange(width, dtype=np.int64)
    groups = (values[:, None] >> shifts[None, :]) & 0x7F
    # a byte is emitted when it is the first one or higher bits remain
    present = np.ones_like(groups, dtype=bool)
    present[:, 1:] = values[:, None] >= (1 << shifts[None, 1:])
    more = np.zeros_like(present)
    more[:, :-1] = present[:, 1:]
    encoded = (groups | (more.astype(np.int64) << 7)).astype(np.uint8)
    return encoded[present].tobytes()


def decode_varints(data: bytes) -> np.ndarray:
    raw = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    if len(raw) == 0:
        return np.zeros(0, dtype=np.int64)
    if raw[-1] & 0x80:
        raise CacheFormatError("truncated varint at end of data")
    ends = np.flatnonzero(raw < 0x80)
    starts = np.concatenate(([0], ends[:-1] + 1))
    lengths = ends - starts + 1
    if lengths.max() > MAX_VARINT_BYTES:
        raise CacheFormatError("varint longer than 9 bytes")
    group = np.repeat(np.arange(len(starts)), lengths)
    position = np.arange(len(raw)) - starts[group]
    return np.add.reduceat((raw & 0x7F) << (7 * position), starts)
