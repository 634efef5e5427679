import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra.catalog import from_spec
from algebra.tuples import Permutation, TupleCode, pi_product
from classes.decompose import decompose
from constants import BudgetExceededError, InputValidationError, StructureError
from oracle.enumerate import cross_check, default_seeds, enumerate_diagonals
from oracle.witness import (
    DiagonalWitness,
    concat_witnesses,
    fold_steps,
    reduce_to_canonical,
    verify_witness,
)
from transition.matrix import build_transition
from transition.propagate import propagate


def test_enumeration_of_z2(z2):
    result = enumerate_diagonals(z2, TupleCode.identity(2), 2)
    assert result.counts == {1: 2, 2: 2}
    assert result.total == 4


def test_enumeration_at_depth_zero(z3):
    seed = TupleCode.of((1, 1, 2))
    assert enumerate_diagonals(z3, seed, 0).counts == {seed.code: 1}


def test_enumeration_matches_propagation(quasigroup, t_quasigroup):
    seed = TupleCode.of((2, 1, 1, 4))
    assert enumerate_diagonals(quasigroup, seed, 2).counts == propagate(t_quasigroup, seed, 2).as_dict()


def test_enumeration_budget(z3):
    with pytest.raises(BudgetExceededError) as info:
        enumerate_diagonals(z3, TupleCode.identity(3), 5, budget=1000)
    assert info.value.estimate == 6**5


def test_enumeration_time_guard(z3):
    with pytest.raises(BudgetExceededError):
        enumerate_diagonals(z3, TupleCode.identity(3), 6, seconds=0.0)


def test_parallel_enumeration_agrees(z3):
    seed = TupleCode.identity(3)
    assert (
        enumerate_diagonals(z3, seed, 3, workers=2).counts
        == enumerate_diagonals(z3, seed, 3).counts
    )


def test_witnesses_fold_to_their_types(quasigroup):
    result = enumerate_diagonals(quasigroup, TupleCode.identity(4), 2, max_witnesses=5)
    assert len(result.witnesses) == 5
    for witness in result.witnesses:
        assert witness.length == 2
        assert verify_witness(quasigroup, witness)


def test_cross_check_small_orders(z3, t_quasigroup, quasigroup):
    T = build_transition(z3)
    report = cross_check(z3, 5, T=T, D=decompose(T))
    assert report.pairs_checked == 27 * 6
    assert report.classes_match
    assert report.skipped_depths == []
    report = cross_check(quasigroup, 3, T=t_quasigroup, budget=24**2)
    assert report.skipped_depths == [3]
    assert len(report.seeds) == len(default_seeds(quasigroup))


@pytest.mark.slow
@pytest.mark.parametrize("source", ["example2", "cyclic:4", "direct_product:2x2"])
def test_cross_check_order_four_to_depth_three(source):
    G = from_spec(source)
    T = build_transition(G)
    report = cross_check(G, 3, T=T, D=decompose(T))
    assert report.skipped_depths == []
    assert report.pairs_checked == len(report.seeds) * 4
    assert report.classes_match


def test_witness_concatenation(z2):
    U = TupleCode.identity(2)
    swap = Permutation.of((2, 1))
    first = DiagonalWitness(seed=U, steps=(swap,), result=fold_steps(z2, U, (swap,)))
    second = DiagonalWitness(
        seed=first.result, steps=(swap,), result=fold_steps(z2, first.result, (swap,))
    )
    joined = concat_witnesses(first, second)
    assert joined.length == 2
    assert verify_witness(z2, joined)
    with pytest.raises(InputValidationError):
        concat_witnesses(second, second)


def test_verify_rejects_wrong_result(z2):
    U = TupleCode.identity(2)
    witness = DiagonalWitness(seed=U, steps=(Permutation.identity(2),), result=U)
    assert not verify_witness(z2, witness)


CATALOG_TABLES = [
    "example1",
    "example2",
    "cyclic:3",
    "cyclic:4",
    "cyclic:5",
    "direct_product:2x2",
    "symmetric:3",
    "block:1",
    "random:5:3",
]


def _tuples(n):
    return st.lists(st.integers(1, n), min_size=n, max_size=n).map(TupleCode.of)


@pytest.mark.parametrize("source", CATALOG_TABLES)
@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_greedy_reduction_reaches_canonical_form(source, data):
    G = from_spec(source)
    V = data.draw(_tuples(G.n))
    a = data.draw(st.integers(1, G.n))
    i = data.draw(st.integers(1, G.n))
    witness = reduce_to_canonical(G, V, a=a, i=i)
    assert verify_witness(G, witness)
    assert witness.length % 2 == 0
    assert witness.length <= 2 * (G.n - 1)
    assert all(x == a for j, x in enumerate(witness.result.digits, start=1) if j != i)


@pytest.mark.parametrize("source", ["cyclic:3", "cyclic:4", "cyclic:5", "direct_product:2x2", "symmetric:3"])
@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_group_reduction_keeps_the_product(source, data):
    G = from_spec(source)
    V = data.draw(_tuples(G.n))
    witness = reduce_to_canonical(G, V, group_variant=True)
    assert verify_witness(G, witness)
    assert witness.length <= 2 * (G.n - 1)
    assert witness.result == TupleCode.canonical(G.n, 1, 1, pi_product(G, V))


def test_reduction_of_a_finished_tuple_is_empty(z3):
    V = TupleCode.canonical(3, 2, 1, 3)
    assert reduce_to_canonical(z3, V, a=2, i=1).length == 0


def test_group_variant_needs_a_group(quasigroup):
    with pytest.raises(StructureError):
        reduce_to_canonical(quasigroup, TupleCode.identity(4), group_variant=True)


def test_reduction_arguments(z3):
    with pytest.raises(InputValidationError):
        reduce_to_canonical(z3, TupleCode.identity(3), a=4)
    with pytest.raises(InputValidationError):
        reduce_to_canonical(z3, TupleCode.identity(3), a=1, i=0)
