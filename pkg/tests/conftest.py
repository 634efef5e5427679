import pytest

from algebra.catalog import cyclic, direct_product, example1, example2, symmetric
from algebra.cayley import CayleyTable, format_cayley, parse_cayley
from transition.matrix import build_transition


@pytest.fixture
def z2() -> CayleyTable:
    return example1()


@pytest.fixture
def z3() -> CayleyTable:
    return cyclic(3)


@pytest.fixture
def z4() -> CayleyTable:
    return cyclic(4)


@pytest.fixture
def z2sq() -> CayleyTable:
    return direct_product(cyclic(2), cyclic(2))


@pytest.fixture
def quasigroup() -> CayleyTable:
    """Z_2^2 with its first two rows swapped: no identity, classes of period 1, 1 and 2."""
    return example2()


@pytest.fixture
def s3_path(tmp_path):
    path = tmp_path / "s3.txt"
    path.write_text(format_cayley(symmetric(3)), encoding="utf-8")
    return path


@pytest.fixture
def s3(s3_path) -> CayleyTable:
    return parse_cayley(s3_path.read_text(encoding="utf-8"))


@pytest.fixture
def t_z2(z2):
    return build_transition(z2)


@pytest.fixture
def t_quasigroup(quasigroup):
    return build_transition(quasigroup)
