import pytest

from algebra.catalog import cyclic, direct_product, example2, symmetric
from constants import BudgetExceededError, StructureError
from counting.counts import count_series
from grouptools.commutator import abelianization, commutator_subgroup_closure
from grouptools.hall_paige import (
    analyze_group,
    denes_hermann_check,
    element_order,
    hall_paige_check,
    ordering_products,
)
from grouptools.powers import power_sets

# symmetric(3) lists permutations lexicographically; 1, 4 and 5 are the even ones
ALTERNATING = (1, 4, 5)
ODD = (2, 3, 6)


def test_commutator_of_s3(s3):
    analysis = abelianization(s3)
    assert analysis.is_group
    assert analysis.commutator == ALTERNATING
    assert analysis.cosets == (ALTERNATING, ODD)
    assert commutator_subgroup_closure(s3) == ALTERNATING
    assert analysis.coset_labels() == [0, 1, 1, 0, 0, 1]


def test_abelian_groups_have_trivial_commutator(z4, z2sq):
    for G in (z4, z2sq):
        analysis = abelianization(G)
        assert analysis.commutator == (1,)
        assert len(analysis.cosets) == G.n


def test_abelianization_needs_a_loop(quasigroup):
    with pytest.raises(StructureError):
        abelianization(quasigroup)


def test_sylow_valuation(s3, z4):
    assert abelianization(s3).sylow2_valuation == 1
    assert abelianization(z4).sylow2_valuation == 2


def test_hall_paige_verdicts(z3, z4, z2sq, s3):
    assert hall_paige_check(z3) == (True, None)
    assert hall_paige_check(z2sq) == (True, None)
    # 2 generates Z_4 and its square is 3
    assert hall_paige_check(z4) == (False, 3)
    assert hall_paige_check(s3) == (False, 2)


def test_analyze_group_fills_verdict(s3):
    analysis = analyze_group(s3)
    assert analysis.hall_paige is False
    assert analysis.involution_g == 2
    assert analysis.involution_g not in analysis.commutator


def test_element_order(z4):
    assert [element_order(z4, x, 1) for x in z4.symbols] == [1, 4, 2, 4]


def test_ordering_products(z3, z4, s3):
    assert ordering_products(z3) == (1,)
    assert ordering_products(z4) == (3,)
    assert ordering_products(s3) == ODD


def test_denes_hermann(z3, z4, z2sq, s3):
    assert denes_hermann_check(z3).matches == "G'"
    assert denes_hermann_check(z2sq).p1 == (1,)
    report = denes_hermann_check(z4)
    assert report.matches == "gG'"
    assert report.coset == (3,)
    report = denes_hermann_check(s3)
    assert report.matches == "gG'"
    assert report.p1 == ODD


def test_denes_hermann_needs_a_group(quasigroup):
    with pytest.raises(StructureError):
        denes_hermann_check(quasigroup)


def test_power_sets_of_z4(z4):
    profile = power_sets(z4, k_max=4)
    assert profile.p(1) == (3,)
    assert profile.p(2) == (1,)
    assert profile.p_infinity == (1, 3)


def test_power_sets_of_second_example():
    profile = power_sets(example2(), k_max=4)
    assert profile.p(1) == (1, 2)
    assert profile.p_infinity == (1, 2)
    for k in range(1, 3):
        assert set(profile.p(k)) <= set(profile.p(k + 2))


def test_power_sets_budget(z4):
    with pytest.raises(BudgetExceededError) as info:
        power_sets(z4, k_max=50, max_splits=1000)
    assert info.value.estimate == (51 * 52 // 2) ** 4


def test_default_power_budget_refuses_order_five():
    with pytest.raises(BudgetExceededError) as info:
        power_sets(cyclic(5))
    assert info.value.estimate == 66**5


@pytest.mark.slow
def test_default_power_budget_admits_order_four(z4):
    assert power_sets(z4).k_max == 8


@pytest.mark.slow
@pytest.mark.parametrize(
    "G, hall_paige",
    [
        (cyclic(8), False),
        (direct_product(cyclic(2), cyclic(4)), True),
        (direct_product(direct_product(cyclic(2), cyclic(2)), cyclic(2)), True),
        (cyclic(7), True),
        (direct_product(cyclic(2), cyclic(3)), False),
    ],
)
def test_hall_paige_matches_transversal_existence(G, hall_paige):
    analysis = analyze_group(G)
    assert analysis.hall_paige is hall_paige
    assert denes_hermann_check(G, analysis).matches == ("G'" if hall_paige else "gG'")
    odd, even = count_series(G, "transversal", 2, method="orbit")
    assert (odd > 0) is hall_paige
    assert even > 0


@pytest.mark.parametrize(
    "G, hall_paige",
    [
        (cyclic(2), False),
        (cyclic(3), True),
        (cyclic(4), False),
        (cyclic(5), True),
        (cyclic(6), False),
        (direct_product(cyclic(2), cyclic(2)), True),
        (symmetric(3), False),
    ],
)
def test_small_groups_agree_on_all_criteria(G, hall_paige):
    analysis = analyze_group(G)
    assert analysis.hall_paige is hall_paige
    assert denes_hermann_check(G, analysis).matches == ("G'" if hall_paige else "gG'")
    counts = count_series(G, "transversal", 4, method="orbit")
    assert (counts[0] > 0) is hall_paige
    assert all(c > 0 for c in counts[1::2])
    assert all(c > 0 for c in counts) is hall_paige
