from decimal import Decimal

import numpy as np
import pytest

from src.core.costing import (
    aggregate_cost,
    balance_sum,
    financial_cost,
    holding_cost,
    inventory_trajectory,
    route_transport_cost,
    to_money,
    total_distance_km,
    transport_cost,
    trip_count,
)
from src.models.plan import Plan, PlanError


def _single_atm(make_instance, periods, initial, withdrawals):
    return make_instance(
        atms=[(1.0, 0.0)],
        periods=periods,
        withdrawals=[withdrawals],
        initial_balance=initial,
    )


def test_trajectory_of_visited_and_idle_atms(three_depot_instance, three_depot_plan):
    trajectory = inventory_trajectory(three_depot_instance, three_depot_plan)
    assert trajectory.balances["2"] == [150]
    assert trajectory.balances["4"] == [50]


def test_trajectory_matched_deposits_stay_at_zero(make_instance):
    inst = _single_atm(make_instance, 3, 0, [30, 40, 50])
    plan = Plan(deposits={"1": [30, 40, 50]})
    assert inventory_trajectory(inst, plan).balances["1"] == [0, 0, 0]


def test_trajectory_without_deposits(make_instance):
    inst = _single_atm(make_instance, 2, 100, [50, 50])
    trajectory = inventory_trajectory(inst, Plan())
    assert trajectory.balances["1"] == [50, 0]
    assert trajectory.lowest("1") == (2, 0)


def test_empty_plan_costs_nothing_to_move(three_depot_instance):
    assert transport_cost(three_depot_instance, Plan()) == 0
    assert trip_count(three_depot_instance, Plan()) == 0


def test_two_arc_route(minimal_instance):
    plan = Plan(routes={"1": {1: ["01", "1", "01"]}}, deposits={"1": [100]})
    assert transport_cost(minimal_instance, plan) == 20


def test_three_depot_route_with_unit_distances(three_depot_instance):
    n = three_depot_instance.n_nodes
    unit = (np.ones((n, n)) - np.eye(n)).tolist()
    inst = three_depot_instance.model_copy(update={"distance_km": unit})
    plan = Plan(routes={"1": {1: ["01", "1", "5", "2", "3", "01"]}})
    assert transport_cost(inst, plan) == 5


def test_fixed_cost_is_charged_once_per_used_route(minimal_instance):
    vehicle = minimal_instance.vehicles[0].model_copy(update={"fixed_cost": 1_000})
    inst = minimal_instance.model_copy(update={"vehicles": [vehicle]})
    used = Plan(routes={"1": {1: ["01", "1", "01"]}})
    idle = Plan(routes={"1": {1: ["01", "01"]}})
    assert transport_cost(inst, used) == 1_020
    assert transport_cost(inst, idle) == 0


def test_unknown_node_is_an_error(minimal_instance):
    with pytest.raises(PlanError, match="unknown node"):
        transport_cost(minimal_instance, Plan(routes={"1": {1: ["01", "7", "01"]}}))


def test_transport_cost_is_additive_over_routes(three_depot_instance, three_depot_plan):
    total = sum(
        (route_transport_cost(three_depot_instance, three_depot_instance.vehicle(v), three_depot_plan.route(v, 1)) for v in ("1", "4")),
        Decimal(0),
    )
    assert transport_cost(three_depot_instance, three_depot_plan) == to_money(total)


def test_adding_a_stop_never_lowers_transport_cost(three_depot_instance, three_depot_plan):
    longer = three_depot_plan.clone()
    longer.routes["1"][1] = ["01", "1", "5", "11", "2", "3", "01"]
    assert transport_cost(three_depot_instance, longer) >= transport_cost(three_depot_instance, three_depot_plan)


def test_financial_cost_of_draining_atm(make_instance):
    # balances 365,000 then 0
    inst = _single_atm(make_instance, 2, 730_000, [365_000, 365_000])
    plan = Plan(deposits={"1": [0, 0]})
    assert balance_sum(inst, plan) == 365_000
    assert financial_cost(inst, plan) == 50


def test_financial_cost_of_early_deposit(make_instance):
    inst = _single_atm(make_instance, 3, 0, [0, 0, 0])
    plan = Plan(deposits={"1": [7_300_000, 0, 0]})
    assert balance_sum(inst, plan) == 21_900_000
    assert financial_cost(inst, plan) == 3_000


def test_matched_single_period_costs_nothing(make_instance):
    inst = _single_atm(make_instance, 1, 0, [80])
    assert financial_cost(inst, Plan(deposits={"1": [80]})) == 0


def test_holding_cost_rounds_half_up(three_depot_instance):
    # IR / 365 = 1 / 7300
    assert holding_cost(three_depot_instance, 3_650) == 1
    assert holding_cost(three_depot_instance, 10_950) == 2
    assert holding_cost(three_depot_instance, 3_649) == 0


def test_balance_sum_matches_trajectory(three_depot_instance, three_depot_plan):
    trajectory = inventory_trajectory(three_depot_instance, three_depot_plan)
    assert balance_sum(three_depot_instance, three_depot_plan) == trajectory.total()
    assert financial_cost(three_depot_instance, three_depot_plan) == holding_cost(three_depot_instance, trajectory.total())


def test_balance_sum_identity_on_random_plans(make_instance):
    rng = np.random.default_rng(5)
    for _ in range(1_000):
        periods = int(rng.integers(1, 8))
        n = int(rng.integers(1, 5))
        inst = make_instance(
            atms=[(float(k), 1.0) for k in range(1, n + 1)],
            periods=periods,
            withdrawals=rng.integers(0, 10**9, size=(n, periods)).tolist(),
            initial_balance=rng.integers(0, 10**9, size=n).tolist(),
            interest_rate_annual=float(rng.choice([0.0, 0.05, 0.073])),
        )
        plan = Plan(deposits={a.id: rng.integers(0, 10**9, size=periods).tolist() for a in inst.atms})
        trajectory = inventory_trajectory(inst, plan)
        assert balance_sum(inst, plan) == trajectory.total()
        exact = Decimal(repr(inst.interest_rate_annual)) * trajectory.total() / 365
        assert financial_cost(inst, plan) == to_money(exact)


def _two_atms(make_instance, unit):
    """Balances sum to 10 units over three days"""
    inst = make_instance(atms=[(1.0, 0.0), (2.0, 0.0)], periods=3,
                         withdrawals=[[5 * unit, 7 * unit, 1 * unit], [2 * unit, 2 * unit, 9 * unit]],
                         initial_balance=[10 * unit, 4 * unit])
    plan = Plan(deposits={"1": [0, 3 * unit, 0], "2": [1 * unit, 0, 8 * unit]})
    return inst, plan


def test_scaling_money_scales_the_balance_sum(make_instance):
    assert balance_sum(*_two_atms(make_instance, 1_000)) == 1_000 * balance_sum(*_two_atms(make_instance, 1))


@pytest.mark.parametrize("k", [1, 10, 1_000, 1_000_000])
def test_scaling_money_scales_the_financial_cost(make_instance, k):
    # 7,300 VND-days cost exactly 1 VND at 5% a year
    inst, plan = _two_atms(make_instance, 730 * k)
    assert financial_cost(inst, plan) == k
    assert aggregate_cost(inst, plan, (0.0, 1.0)).aggregate == k


@pytest.mark.parametrize("k", [3, 17, 1_000, 123_457])
def test_rounded_financial_cost_scales_within_half_a_unit_per_factor(make_instance, k):
    base = financial_cost(*_two_atms(make_instance, 1_000_003))
    scaled = financial_cost(*_two_atms(make_instance, 1_000_003 * k))
    assert base == 1_370
    assert abs(scaled - k * base) <= (k + 1) / 2


def test_aggregate_cost_weights(three_depot_instance, three_depot_plan):
    f1 = transport_cost(three_depot_instance, three_depot_plan)
    f2 = financial_cost(three_depot_instance, three_depot_plan)
    assert aggregate_cost(three_depot_instance, three_depot_plan, (1.0, 0.0)).aggregate == f1
    assert aggregate_cost(three_depot_instance, three_depot_plan, (0.0, 1.0)).aggregate == f2

    cost = aggregate_cost(three_depot_instance, three_depot_plan)
    assert cost.aggregate == cost.transport + cost.financial
    assert cost.trips == 2
    assert cost.total_km == pytest.approx(29.1 + 16.5)
    assert total_distance_km(three_depot_instance, three_depot_plan) == pytest.approx(45.6)


def test_zero_weights_are_rejected(three_depot_instance, three_depot_plan):
    with pytest.raises(ValueError, match="both be zero"):
        aggregate_cost(three_depot_instance, three_depot_plan, (0.0, 0.0))
    with pytest.raises(ValueError, match="nonnegative"):
        aggregate_cost(three_depot_instance, three_depot_plan, (-1.0, 1.0))
