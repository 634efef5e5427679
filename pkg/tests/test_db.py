import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from config import Settings
from constants import CACHE_MAGIC, CacheFormatError
from db.transitions import (
    HEADER,
    cache_path,
    dump_transition,
    get_transition,
    load_or_build,
    parse_transition,
    save_transition,
)
from db.varint import decode_varints, encode_varints


def test_varint_bytes():
    encoded = encode_varints(np.array([0, 1, 127, 128, 300]))
    assert encoded == bytes([0x00, 0x01, 0x7F, 0x80, 0x01, 0xAC, 0x02])
    assert decode_varints(encoded).tolist() == [0, 1, 127, 128, 300]


@given(st.lists(st.integers(min_value=0, max_value=2**62), max_size=50))
def test_varints_decode_what_they_encode(values):
    assert decode_varints(encode_varints(np.array(values, dtype=np.int64))).tolist() == values


def test_truncated_varint():
    with pytest.raises(CacheFormatError):
        decode_varints(bytes([0x80]))


def test_cache_header(t_z2):
    data = dump_transition(t_z2)
    magic, version, order, digest = HEADER.unpack_from(data)
    assert magic == CACHE_MAGIC
    assert version == 1
    assert order == 2
    assert digest.hex() == t_z2.table_digest
    # (1,1): two targets with value 1
    assert data[HEADER.size : HEADER.size + 5] == bytes([2, 1, 1, 2, 1])


def test_rows_are_stored_as_distinct_targets(t_quasigroup):
    values = decode_varints(dump_transition(t_quasigroup)[HEADER.size :])
    distinct = [len(np.unique(row)) for row in t_quasigroup.targets]
    assert len(values) == len(distinct) + 2 * sum(distinct)
    assert values[0] == distinct[0]
    assert values[2 : 1 + 2 * distinct[0] : 2].sum() == t_quasigroup.degree


def test_parse_restores_matrix(t_quasigroup, quasigroup):
    T = parse_transition(dump_transition(t_quasigroup), 4, quasigroup.digest)
    assert np.array_equal(T.targets, t_quasigroup.targets)


def test_parse_rejects_foreign_data(t_z2, z3):
    data = dump_transition(t_z2)
    with pytest.raises(CacheFormatError):
        parse_transition(b"XXXX" + data[4:], 2)
    with pytest.raises(CacheFormatError):
        parse_transition(data, 3)
    with pytest.raises(CacheFormatError):
        parse_transition(data, 2, z3.digest)
    with pytest.raises(CacheFormatError):
        parse_transition(data[:-2], 2)
    with pytest.raises(CacheFormatError):
        parse_transition(data[:10], 2)


def test_parse_rejects_broken_sums(t_z2):
    data = bytearray(dump_transition(t_z2))
    # second target of row (1,1) becomes (1,2), repeating the first
    data[HEADER.size + 3] = 1
    with pytest.raises(CacheFormatError):
        parse_transition(bytes(data), 2)


def test_save_and_get(tmp_path, z2, t_z2):
    cache_dir = str(tmp_path / "cache")
    assert get_transition(cache_dir, z2) is None
    assert save_transition(t_z2, cache_dir)
    assert cache_path(cache_dir, z2).exists()
    cached = get_transition(cache_dir, z2)
    assert np.array_equal(cached.targets, t_z2.targets)


def test_corrupt_cache_file_is_ignored(tmp_path, z2):
    cache_dir = str(tmp_path)
    cache_path(cache_dir, z2).write_bytes(b"not a cache file at all, clearly too short")
    assert get_transition(cache_dir, z2) is None


def test_load_or_build_fills_the_cache(tmp_path, z3):
    settings = Settings(cache_dir=str(tmp_path))
    built = load_or_build(z3, settings)
    assert cache_path(str(tmp_path), z3).exists()
    loaded = load_or_build(z3, settings)
    assert np.array_equal(built.targets, loaded.targets)
