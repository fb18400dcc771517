import pytest

from src.core.feasibility import (
    NodeTime,
    check_plan,
    is_feasible,
    propagate_times,
    subtour_violations_bruteforce,
    subtour_violations_encoding,
)
from src.core.solver import solve_heuristic
from src.core.splitting import build_split_schedule
from src.models.plan import Plan, PlanError, RouteTiming
from src.models.scenario import ScenarioParams
from src.models.solve import SolveConfig
from src.models.split import SplitPolicy
from src.models.violation import ConstraintFamily as CF
from src.models.violation import render_violations
from src.tools.scenario import generate_scenario
from tests.injections import inject
from tests.mutations import MUTATIONS, second_visit

INJECTIONS_PER_FAMILY = 50


def _one_stop(make_instance, window):
    """ATM 30 km from the depot, 30 minutes away"""
    return make_instance(atms=[(30.0, 0.0)], window=window, withdrawals=[[0]])


def test_arrival_after_half_hour_drive(make_instance):
    inst = _one_stop(make_instance, (540, 1020))
    times = propagate_times(inst, ["01", "1", "01"], inst.vehicles[0], departure=570)
    assert times[0] == NodeTime("1", 600, 600)
    assert times[-1] == NodeTime("01", 630, 630)


def test_vehicle_waits_for_the_window(make_instance):
    inst = _one_stop(make_instance, (605, 1020))
    times = propagate_times(inst, ["01", "1", "01"], inst.vehicles[0], departure=570)
    assert times[0] == NodeTime("1", 600, 605)


def test_empty_route_has_no_timing(make_instance):
    inst = _one_stop(make_instance, (540, 1020))
    assert propagate_times(inst, [], inst.vehicles[0], departure=480) == []
    assert propagate_times(inst, ["01", "01"], inst.vehicles[0], departure=480) == []


def test_route_must_be_anchored(make_instance):
    inst = _one_stop(make_instance, (540, 1020))
    with pytest.raises(PlanError):
        propagate_times(inst, ["1", "01"], inst.vehicles[0], departure=480)


def test_three_depot_plan_is_feasible(three_depot_instance, three_depot_plan):
    assert check_plan(three_depot_instance, three_depot_plan) == []
    assert is_feasible(three_depot_instance, three_depot_plan)


def test_three_depot_timings_follow_the_recurrence(three_depot_instance, three_depot_plan):
    for vehicle_id in ("1", "4"):
        timing = three_depot_plan.timing_of(vehicle_id, 1)
        times = propagate_times(three_depot_instance, three_depot_plan.route(vehicle_id, 1),
                                three_depot_instance.vehicle(vehicle_id), timing.departure)
        for t in times[:-1]:
            assert timing.arrival[t.node] == t.arrival
            assert timing.service_start[t.node] == t.service_start


@pytest.mark.parametrize("family", list(MUTATIONS), ids=lambda f: f.value)
def test_each_mutation_breaks_exactly_its_family(three_depot_instance, three_depot_plan, family):
    inst, plan = MUTATIONS[family](three_depot_instance, three_depot_plan)
    violations = check_plan(inst, plan)
    assert [v.constraint for v in violations] == [family]
    # the fixture itself is untouched
    assert check_plan(three_depot_instance, three_depot_plan) == []


def test_double_visit_location_and_magnitude(three_depot_instance, three_depot_plan):
    inst, plan = second_visit(three_depot_instance, three_depot_plan)
    (violation,) = check_plan(inst, plan)
    assert (violation.location.kind, violation.location.id, violation.location.period) == ("atm", "2", 1)
    assert violation.magnitude == 1


def test_overload_by_one(three_depot_instance, three_depot_plan):
    inst, plan = MUTATIONS[CF.C4](three_depot_instance, three_depot_plan)
    (violation,) = check_plan(inst, plan)
    assert violation.magnitude == 1
    assert violation.location.id == "1"


def test_withdrawal_shortfall_magnitude(three_depot_instance, three_depot_plan):
    inst, plan = MUTATIONS[CF.C14](three_depot_instance, three_depot_plan)
    (violation,) = check_plan(inst, plan)
    assert violation.magnitude == 10
    assert (violation.location.id, violation.location.period) == ("2", 1)


def test_unvisited_deposit_is_a_c3_breach(three_depot_instance, three_depot_plan):
    plan = three_depot_plan.clone()
    plan.deposits["4"] = [100]
    (violation,) = check_plan(three_depot_instance, plan)
    assert violation.constraint == CF.C3
    assert violation.message == "deposit without a visit"


def test_missing_timing_is_one_c13_violation(three_depot_instance, three_depot_plan):
    plan = three_depot_plan.clone()
    del plan.timing["4"]
    violations = check_plan(three_depot_instance, plan)
    assert [(v.constraint, v.location.id) for v in violations] == [(CF.C13, "4")]


def test_used_flag_without_route(three_depot_instance, three_depot_plan):
    plan = three_depot_plan.clone()
    plan.usage["2"] = {1: 1}
    (violation,) = check_plan(three_depot_instance, plan)
    assert violation.constraint == CF.C5
    assert violation.location.id == "2"


def test_route_through_another_depot_skips_timing(three_depot_instance, three_depot_plan):
    plan = three_depot_plan.clone()
    plan.routes["1"][1] = ["01", "1", "5", "02", "2", "3", "01"]
    violations = check_plan(three_depot_instance, plan)
    assert [v.constraint for v in violations] == [CF.C5]


def test_violations_are_sorted_by_family(three_depot_instance, three_depot_plan):
    inst, plan = MUTATIONS[CF.C14](three_depot_instance, three_depot_plan)
    plan = plan.clone()
    plan.usage["1"] = {1: 2}
    plan.deposits["4"] = [100]
    families = [v.constraint for v in check_plan(inst, plan)]
    assert families == [CF.C3, CF.C14, CF.C17]


def test_rendered_violation_line(three_depot_instance, three_depot_plan):
    inst, plan = second_visit(three_depot_instance, three_depot_plan)
    assert render_violations(check_plan(inst, plan)) == "C3 atm:2@t1 excess=1 — visited by 2 vehicles"


def _tiny_subtour_case(make_instance):
    inst = make_instance(atms=[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)], withdrawals=[[0]] * 3)
    clean = Plan(routes={"1": {1: ["01", "1", "2", "3", "01"]}})
    looped = Plan(routes={"1": {1: ["01", "1", "2", "1", "3", "01"]}})
    return inst, clean, looped


def test_subset_and_encoding_checks_agree(make_instance):
    inst, clean, looped = _tiny_subtour_case(make_instance)
    assert subtour_violations_bruteforce(inst, clean) == subtour_violations_encoding(inst, clean) == set()
    assert subtour_violations_bruteforce(inst, looped) == subtour_violations_encoding(inst, looped) == {("1", 1)}


def test_subset_enumeration_is_limited_to_small_graphs(three_depot_instance, three_depot_plan):
    with pytest.raises(ValueError):
        subtour_violations_bruteforce(three_depot_instance, three_depot_plan)


def test_service_after_closing(make_instance):
    inst = _one_stop(make_instance, (540, 560))
    plan = Plan(
        routes={"1": {1: ["01", "1", "01"]}},
        assignment={"1": {1: ["01"]}},
        deposits={"1": [0]},
        timing={"1": {1: RouteTiming(departure=540, arrival={"1": 570}, service_start={"1": 570})}},
    )
    (violation,) = check_plan(inst, plan)
    assert violation.constraint == CF.C7
    assert violation.magnitude == 10


def test_invented_waiting_is_a_timing_breach(three_depot_instance, three_depot_plan):
    # ATM 7 is reached at 9h05 and open since 9h00, yet service is stored as starting at 10h00
    plan = three_depot_plan.clone()
    timing = plan.timing["4"][1]
    timing.service_start["7"] = 600
    timing.arrival["9"] = timing.service_start["9"] = 609
    timing.arrival["10"] = timing.service_start["10"] = 617

    (violation,) = check_plan(three_depot_instance, plan)
    assert violation.constraint == CF.C13
    assert (violation.location.id, violation.magnitude) == ("7", 55)


def test_stored_timings_must_equal_the_recurrence(three_depot_instance, three_depot_plan):
    plan = three_depot_plan.clone()
    plan.timing["1"][1].service_start["3"] = 620
    times = propagate_times(three_depot_instance, plan.route("1", 1), three_depot_instance.vehicle("1"), 570)
    assert {t.node: t.service_start for t in times[:-1]}["3"] == 616
    assert [v.constraint for v in check_plan(three_depot_instance, plan)] == [CF.C13]


@pytest.fixture(scope="module")
def feasible_plans():
    """Local-search plans for ten generated scenarios, all passing the checker"""
    cases = []
    for seed in range(10):
        inst = generate_scenario(ScenarioParams(n_atms=5 + seed % 3, periods=3, seed=seed))
        schedule = build_split_schedule(inst, SplitPolicy())
        result = solve_heuristic(inst, schedule, SolveConfig(seed=seed, max_iterations=3_000, max_restarts=2))
        if result.solved:
            cases.append((inst, result.plan))
    assert len(cases) >= 5
    for inst, plan in cases:
        assert check_plan(inst, plan) == []
    return cases


@pytest.mark.parametrize("family", list(CF), ids=lambda f: f.value)
def test_injected_breaches_are_reported_alone(feasible_plans, family):
    cases = inject(family, feasible_plans, INJECTIONS_PER_FAMILY, seed=int(family.value[1:]))
    assert len(cases) == INJECTIONS_PER_FAMILY
    for inst, plan in cases:
        assert [v.constraint for v in check_plan(inst, plan)] == [family]
