import time

import numpy as np
import pytest

from algebra.catalog import cyclic
from algebra.isotopy import Isotopy, apply_isotopy
from algebra.tuples import Permutation, TupleCode
from classes.decompose import decompose
from constants import BudgetExceededError, ConsistencyError, StructureError
from counting.counts import count_series
from transition.isotopy import isotopy_relation_check
from transition.matrix import (
    TransitionMatrix,
    build_transition,
    check_budget,
    memory_estimate,
    verify_transition,
)
from transition.orbits import OrbitChain
from transition.propagate import CountVector, dense_power, propagate, propagate_range, step

# rows and columns (1,1), (1,2), (2,1), (2,2)
Z2_MATRIX = [
    [0, 1, 1, 0],
    [1, 0, 0, 1],
    [1, 0, 0, 1],
    [0, 1, 1, 0],
]


def test_z2_matrix(t_z2):
    assert t_z2.to_dense().tolist() == Z2_MATRIX
    assert t_z2.row(TupleCode.of((1, 1))) == {1: 1, 2: 1}
    assert t_z2.t(TupleCode.of((1, 2)), TupleCode.of((2, 2))) == 1
    assert t_z2.t(1, 2) == 0


def test_rows_and_columns_sum_to_factorial(z3, quasigroup):
    for G in (z3, quasigroup):
        T = build_transition(G)
        assert T.targets.shape == (G.n**G.n, T.degree)
        assert np.all(T.column_sums() == T.degree)


def test_verify_rejects_repeated_targets(t_z2):
    broken = TransitionMatrix(
        n=2, table_digest=t_z2.table_digest, targets=np.array([[1, 1], [0, 3], [0, 3], [1, 2]])
    )
    with pytest.raises(ConsistencyError):
        verify_transition(broken)


def test_order_and_memory_budgets(z3):
    with pytest.raises(BudgetExceededError):
        build_transition(cyclic(7))
    with pytest.raises(BudgetExceededError) as info:
        build_transition(z3, memory_bytes=100)
    assert info.value.estimate == memory_estimate(3) == 12 * 27 * 6
    check_budget(7, allow_n7=True, memory_bytes=10**12)
    with pytest.raises(BudgetExceededError):
        check_budget(8, allow_n7=True, memory_bytes=10**15)


def test_propagation_of_z2(t_z2):
    vectors = list(propagate_range(t_z2, TupleCode.identity(2), 2))
    assert [v.depth for v in vectors] == [0, 1, 2]
    assert vectors[1].as_dict() == {0: 1, 3: 1}
    assert vectors[2].as_dict() == {1: 2, 2: 2}
    assert vectors[2].total() == 4


def test_propagation_matches_dense_power(z3):
    T = build_transition(z3)
    power = dense_power(T, 4)
    for code in (0, 5, 17):
        assert propagate(T, code, 4).entries.tolist() == [int(x) for x in power[code]]


def test_dense_power_cap(z3):
    T = build_transition(z3)
    with pytest.raises(BudgetExceededError):
        dense_power(T, 2, dense_cap=10)


def test_counts_switch_to_python_integers(t_z2):
    entries = np.array([2**62, 0, 0, 0], dtype=np.int64)
    vector = step(t_z2, CountVector(n=2, depth=0, entries=entries))
    assert vector.entries.dtype == object
    assert vector.get(1) == 2**62
    assert vector.total() == 2**63


def test_threaded_propagation_agrees(quasigroup, t_quasigroup):
    seed = TupleCode.of((1, 1, 2, 3))
    single = propagate(t_quasigroup, seed, 3)
    threaded = propagate(t_quasigroup, seed, 3, threads=3)
    assert single.as_dict() == threaded.as_dict()


def test_propagate_checks_order(t_z2):
    with pytest.raises(StructureError):
        propagate(t_z2, TupleCode.identity(3), 1)


def test_orbit_chain_agrees_with_full_chain(z3, quasigroup):
    for G in (z3, quasigroup):
        T = build_transition(G)
        for kind in ("transversal", "near"):
            full = count_series(G, kind, 4, T=T, method="full")
            assert count_series(G, kind, 4, method="orbit") == full


def test_orbit_rows_sum_to_factorial(z3):
    chain = OrbitChain(z3)
    assert chain.size == 10
    for state in range(chain.size):
        _, counts = chain.row(state)
        assert int(counts.sum()) == 6


def test_orbit_chain_order_limit():
    with pytest.raises(BudgetExceededError):
        OrbitChain(cyclic(5), max_order=4)


def test_row_isotopy_relation(z2sq, quasigroup):
    iso = Isotopy.rows(Permutation.of((2, 1, 3, 4)))
    report = isotopy_relation_check(z2sq, quasigroup, iso)
    assert report.component == "alpha"
    assert report.holds


def test_column_and_symbol_isotopy_relations(z3):
    cycle = Permutation.of((2, 3, 1))
    for iso, component in ((Isotopy.columns(cycle), "beta"), (Isotopy.symbols(cycle), "gamma")):
        report = isotopy_relation_check(z3, apply_isotopy(z3, iso), iso)
        assert report.component == component
        assert report.holds


def test_isotopy_with_two_components_is_rejected(z3):
    cycle = Permutation.of((2, 3, 1))
    iso = Isotopy(alpha=cycle, beta=cycle, gamma=Permutation.identity(3))
    with pytest.raises(StructureError):
        isotopy_relation_check(z3, apply_isotopy(z3, iso), iso)


@pytest.mark.slow
@pytest.mark.parametrize("n, seconds", [(5, 1.0), (6, 60.0)])
def test_build_and_decompose_time(n, seconds):
    start = time.perf_counter()
    T = build_transition(cyclic(n))
    decompose(T)
    assert time.perf_counter() - start < seconds


@pytest.mark.slow
def test_step_rate_at_order_six():
    T = build_transition(cyclic(6))
    vector = CountVector(n=6, depth=0, entries=np.ones(T.size, dtype=np.int64))
    start = time.perf_counter()
    result = step(T, vector)
    elapsed = time.perf_counter() - start
    assert result.total() == T.size * T.degree
    assert T.size * T.degree / elapsed > 1e6
