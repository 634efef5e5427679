from fractions import Fraction

import pytest

from algebra.catalog import cyclic
from algebra.tuples import TupleCode
from classes.convergence import convergence_report
from classes.decompose import decompose
from constants import ConsistencyError, InputValidationError, StructureError
from counting.counts import (
    count_diagonals,
    count_near_transversals,
    count_series,
    count_transversals,
    near_transversal_census,
)
from counting.predict import build_model, compare, existence_rule, predict, relative_deviation
from grouptools.hall_paige import analyze_group
from transition.matrix import build_transition


@pytest.mark.parametrize("method", ["orbit", "full"])
def test_z2_series(z2, method):
    assert count_series(z2, "transversal", 4, method=method) == [0, 4, 0, 16]
    assert count_series(z2, "near", 4, method=method) == [2, 4, 8, 16]


def test_small_groups_in_the_cayley_table(z3, z2sq, z4):
    assert count_transversals(z3, 1) == 3
    assert count_transversals(z2sq, 1) == 8
    assert count_transversals(z4, 1) == 0
    assert count_near_transversals(z4, 1) > 0


def test_count_series_rejects_bad_arguments(z2):
    with pytest.raises(InputValidationError):
        count_series(z2, "diagonal", 2)
    with pytest.raises(InputValidationError):
        count_series(z2, "transversal", 0)
    with pytest.raises(InputValidationError):
        count_series(z2, "transversal", 2, method="magic")


def test_count_series_rejects_foreign_matrix(z2, t_quasigroup):
    with pytest.raises(StructureError):
        count_series(z2, "transversal", 2, T=t_quasigroup, method="full")


def test_count_diagonals(z2, t_z2):
    U, V = TupleCode.identity(2), TupleCode.of((1, 1))
    assert [count_diagonals(z2, U, V, d, T=t_z2) for d in range(4)] == [0, 1, 0, 4]


def test_near_census(z2, t_z2):
    report = near_transversal_census(decompose(t_z2), z2)
    assert report.period == 2
    assert [(row.near_types, row.expected) for row in report.rows] == [(2, 2), (2, 2)]
    assert report.rows[0].contains_permutations


def test_group_model_from_hall_paige(z3, z4):
    model = build_model(z3, A=analyze_group(z3))
    assert (model.r, model.tau) == (1, 1)
    model = build_model(z4, A=analyze_group(z4))
    assert (model.r, model.tau) == (1, 2)


def test_model_needs_a_source(quasigroup):
    with pytest.raises(StructureError):
        build_model(quasigroup)


def test_model_cross_checks_decomposition(z4):
    model = build_model(z4, D=decompose(build_transition(z4)), A=analyze_group(z4))
    assert model.tau == 2


def test_predictions(z3, z2):
    assert predict(z3, "transversal", 1, A=analyze_group(z3)).predicted == Fraction(4)
    analysis = analyze_group(z2)
    odd = predict(z2, "transversal", 1, A=analysis)
    assert not odd.exists and odd.predicted == 0
    assert predict(z2, "transversal", 2, A=analysis).predicted == Fraction(4)
    assert predict(z2, "near", 1, A=analysis).predicted == Fraction(2)
    assert predict(z2, "near", 2, A=analysis).predicted == Fraction(4)


def test_diagonal_prediction(z2, t_z2):
    D = decompose(t_z2)
    U = TupleCode.identity(2)
    reachable = predict(z2, "diagonal", 3, D=D, U=U, V=TupleCode.of((2, 2)))
    assert reachable.exists
    assert reachable.predicted == Fraction(8, 2)
    assert not predict(z2, "diagonal", 2, D=D, U=U, V=TupleCode.of((2, 2))).exists


def test_relative_deviation():
    assert relative_deviation(3, Fraction(4)) == Fraction(1, 4)
    assert relative_deviation(5, Fraction(0)) is None


def test_existence_rules(z2, z3, t_quasigroup, quasigroup):
    rule = existence_rule(z2, A=analyze_group(z2), depth_limit=4)
    assert rule.transversal == "even_d_only"
    assert rule.tau == 2
    assert rule.near_in_cayley_table
    assert rule.near_first_d == 1
    assert existence_rule(z3, A=analyze_group(z3), depth_limit=3).transversal == "all_d"
    rule = existence_rule(quasigroup, D=decompose(t_quasigroup), depth_limit=3)
    assert rule.tau == 1
    assert rule.near_in_cayley_table


def test_compare_z2(z2):
    reports = compare(
        z2, "transversal", (1, 4), A=analyze_group(z2), oracle_counts={1: 0, 2: 4, 3: 0, 4: 16}
    )
    assert [r.exact for r in reports] == [0, 4, 0, 16]
    assert [r.relative_deviation for r in reports] == [None, 0, None, 0]
    assert [r.oracle for r in reports] == [0, 4, 0, 16]


def test_compare_catches_oracle_disagreement(z2):
    with pytest.raises(ConsistencyError):
        compare(z2, "transversal", (2, 2), A=analyze_group(z2), oracle_counts={2: 5})


def test_compare_diagonals(z2, t_z2):
    D = decompose(t_z2)
    reports = compare(
        z2, "diagonal", (0, 3), D=D, U=TupleCode.identity(2), V=TupleCode.of((1, 1)), T=t_z2
    )
    assert [r.exact for r in reports] == [0, 1, 0, 4]
    assert [r.exists for r in reports] == [False, True, False, True]


NEGLIGIBLE = Fraction(1, 1000)


def _admissible_deviations(G, kind, d_max, **source):
    counts = count_series(G, kind, d_max, method="orbit")
    deviations = []
    for d, exact in enumerate(counts, start=1):
        prediction = predict(G, kind, d, **source)
        if prediction.exists:
            deviations.append((d, relative_deviation(exact, prediction.predicted)))
    return deviations


@pytest.mark.slow
@pytest.mark.parametrize(
    "name, kind",
    [
        ("z3", "transversal"),
        ("z3", "near"),
        ("z5", "transversal"),
        ("z2sq", "transversal"),
        ("quasigroup", "transversal"),
    ],
)
def test_deviation_vanishes_at_depth(name, kind, z3, z2sq, quasigroup, t_quasigroup):
    tables = {
        "z3": (z3, {"A": analyze_group(z3)}),
        "z5": (cyclic(5), {"A": analyze_group(cyclic(5))}),
        "z2sq": (z2sq, {"A": analyze_group(z2sq)}),
        "quasigroup": (quasigroup, {"D": decompose(t_quasigroup)}),
    }
    G, source = tables[name]
    deviations = _admissible_deviations(G, kind, 40, **source)
    values = [deviation for _, deviation in deviations]
    assert values[-1] < NEGLIGIBLE
    first_small = next(d for d, deviation in deviations if deviation < NEGLIGIBLE)
    assert all(deviation < NEGLIGIBLE for d, deviation in deviations if d >= first_small)
    onset = len(values) - 1
    while onset > 0 and values[onset - 1] >= values[onset]:
        onset -= 1
    assert values[onset] <= values[0]


def test_existence_rule_reports_convergence_onset(quasigroup, t_quasigroup):
    D = decompose(t_quasigroup)
    rule = existence_rule(quasigroup, D=D, depth_limit=8, transition=t_quasigroup)
    onset = convergence_report(t_quasigroup, D, TupleCode.identity(4), 8).empirical_d0
    assert onset is not None
    assert rule.empirical_d0 == onset
    assert "near transversal" in rule.near_note
    assert existence_rule(quasigroup, D=D, depth_limit=3).empirical_d0 is None
