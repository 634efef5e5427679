import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra.catalog import (
    block_of_cyclic,
    catalog,
    cyclic,
    direct_product,
    example2,
    from_spec,
    random_latin,
    symmetric,
)
from algebra.cayley import CayleyTable, format_cayley, parse_cayley
from algebra.isotopy import Isotopy, apply_isotopy
from algebra.probes import find_identity, is_associative, structure_probe
from algebra.tuples import (
    Permutation,
    TupleCode,
    coordinate_action,
    eval_iterated,
    multiply_tuples,
    pi_product,
    symbol_action,
)
from constants import CayleyFormatError, InputValidationError, LatinSquareError


def test_parse_skips_comments_and_blank_lines():
    G = parse_cayley("# Z_2\n2\n\n1 2\n2 1\n")
    assert G.n == 2
    assert G.table == ((1, 2), (2, 1))


def test_parse_rejects_empty_input():
    with pytest.raises(CayleyFormatError):
        parse_cayley("  \n# nothing\n")


def test_parse_rejects_bad_header():
    with pytest.raises(CayleyFormatError):
        parse_cayley("2 2\n1 2\n2 1\n")


def test_parse_rejects_symbol_out_of_range():
    with pytest.raises(CayleyFormatError):
        parse_cayley("2\n1 3\n2 1\n")


def test_parse_rejects_wrong_row_count():
    with pytest.raises(CayleyFormatError):
        parse_cayley("3\n1 2 3\n2 3 1\n")


def test_latin_error_names_the_line():
    with pytest.raises(LatinSquareError) as info:
        parse_cayley("2\n1 1\n2 2\n")
    assert info.value.axis == "row"
    assert info.value.index == 1
    assert info.value.symbol == 1


def test_latin_error_on_column():
    with pytest.raises(LatinSquareError) as info:
        parse_cayley("2\n1 2\n1 2\n")
    assert info.value.axis == "column"


def test_format_is_canonical_and_digest_stable(z3):
    text = format_cayley(z3)
    assert text == "3\n1 2 3\n2 3 1\n3 1 2\n"
    assert parse_cayley("3\n1  2 3\n2 3 1\n3 1   2\n").digest == z3.digest
    assert len(z3.digest) == 64


def test_tuple_codes_most_significant_first():
    assert TupleCode.identity(3).code == 5
    assert TupleCode.from_code(3, 5).digits == (1, 2, 3)
    assert TupleCode.from_code(2, 0).digits == (1, 1)
    assert TupleCode.from_code(2, 3).digits == (2, 2)


def test_canonical_tuple():
    assert TupleCode.canonical(3, 1, 2, 3).digits == (1, 3, 1)
    assert TupleCode.canonical(3, 2, 1, 2) == TupleCode.constant(3, 2)


def test_tuple_validation():
    with pytest.raises(InputValidationError):
        TupleCode(n=3, digits=(1, 2))
    with pytest.raises(InputValidationError):
        TupleCode(n=2, digits=(1, 3))
    with pytest.raises(InputValidationError):
        TupleCode.parse("1,x", 2)
    with pytest.raises(InputValidationError):
        Permutation.of((1, 1, 2))


def test_tuple_products(z3):
    U = TupleCode.of((1, 2, 3))
    W = TupleCode.of((2, 2, 2))
    assert multiply_tuples(z3, U, W).digits == (2, 3, 1)
    assert pi_product(z3, U) == 1
    assert eval_iterated(z3, [2, 2, 2]) == 1
    assert eval_iterated(z3, [3]) == 3


def test_actions():
    V = TupleCode.of((1, 1, 3))
    cycle = Permutation.of((2, 3, 1))
    assert symbol_action(V, cycle).digits == (2, 2, 1)
    assert coordinate_action(V, cycle).digits == (1, 3, 1)
    assert cycle.inverse().compose(cycle).is_identity


def test_structure_of_small_tables(z2, s3, quasigroup):
    assert structure_probe(z2).is_group
    probe = structure_probe(s3)
    assert probe.is_group and not probe.is_commutative
    assert probe.identity == 1
    assert probe.has_right_inverse_property is not None
    probe = structure_probe(quasigroup)
    assert not probe.is_loop
    assert not probe.is_group
    assert find_identity(quasigroup) is None


def test_row_isotopy_of_klein_group_gives_second_example(z2sq):
    swap = Isotopy.rows(Permutation.of((2, 1, 3, 4)))
    assert apply_isotopy(z2sq, swap) == example2()
    assert swap.nontrivial_components() == ["alpha"]
    assert apply_isotopy(apply_isotopy(z2sq, swap), swap.inverse()) == z2sq


def test_catalog_entries(z2sq):
    assert from_spec("direct_product:2x2") == z2sq
    assert from_spec("cyclic:3") == cyclic(3)
    assert catalog("symmetric", 3) == symmetric(3)
    assert is_associative(symmetric(3))
    assert block_of_cyclic(2).n == 4
    assert from_spec("random:5:7") == random_latin(5, 7)
    with pytest.raises(InputValidationError):
        from_spec("nonsense")
    with pytest.raises(InputValidationError):
        from_spec("cyclic:2:3")


def test_direct_product_identity():
    G = direct_product(cyclic(2), cyclic(4))
    assert G.n == 8
    assert find_identity(G) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=7), st.integers(min_value=0, max_value=10**6))
def test_random_latin_is_latin_and_seeded(n, seed):
    G = random_latin(n, seed)
    assert isinstance(G, CayleyTable)
    assert G == random_latin(n, seed)
    for row in G.table:
        assert sorted(row) == list(range(1, n + 1))
