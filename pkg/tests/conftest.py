"""
Shared fixtures: the three-depot sample network with its two sample routes,
a one-ATM instance and a builder for small Euclidean instances.
"""

from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pytest

from src.core.search import plan_from_routes
from src.core.splitting import build_split_schedule
from src.models.instance import Atm, Depot, Instance, Vehicle
from src.models.plan import Plan, RouteTiming
from src.models.scenario import ScenarioParams
from src.models.split import SplitPolicy
from src.tools.scenario import generate_scenario

Point = Tuple[float, float]
Window = Tuple[int, int]

SAMPLE_DEPOTS = {"01": (0.0, 0.0), "02": (40.0, 0.0), "03": (20.0, 30.0)}
SAMPLE_ATMS = {
    "1": (5.0, 0.0), "2": (5.0, -5.0), "3": (0.0, -4.0), "4": (-5.0, 0.0),
    "5": (5.0, 5.0), "6": (21.0, 0.0), "7": (20.0, 25.0), "8": (45.0, 0.0),
    "9": (24.0, 25.0), "10": (24.0, 28.0), "11": (-3.0, 4.0), "12": (40.0, 5.0),
    "13": (15.0, 30.0), "14": (20.0, 35.0), "15": (25.0, 33.0), "16": (40.0, -5.0),
}
SAMPLE_VISITED = ("1", "5", "2", "3", "7", "9", "10")


def euclidean(points: Sequence[Point]) -> List[List[float]]:
    xy = np.asarray(points, dtype=float)
    diff = xy[:, None, :] - xy[None, :, :]
    return np.round(np.hypot(diff[..., 0], diff[..., 1]), 1).tolist()


def build_instance(
    atms: Sequence[Point],
    depots: Sequence[Point] = ((0.0, 0.0),),
    vehicles: Sequence[str] = ("01",),
    periods: int = 1,
    withdrawals: Optional[Sequence[Sequence[int]]] = None,
    initial_balance: Union[int, Sequence[int]] = 0,
    total_demand: Union[int, Sequence[int]] = 0,
    window: Union[Window, Sequence[Window]] = (480, 1020),
    service_time: int = 0,
    capacity: int = 1_000,
    cost_per_km: float = 1.0,
    fixed_cost: int = 0,
    speed_kmh: float = 60.0,
    **overrides,
) -> Instance:
    """
    Instance with Euclidean distances (km, one decimal). Depots are named
    01, 02, ...; ATMs 1, 2, ...; vehicles 1, 2, ... with the given home depots.
    Per-ATM values are passed as lists, shared ones as scalars or tuples.
    """
    def per_atm(value, k):
        return value[k] if isinstance(value, list) else value

    atm_models = []
    for k, xy in enumerate(atms):
        atm_models.append(Atm(
            id=str(k + 1),
            initial_balance=per_atm(initial_balance, k),
            service_window=per_atm(window, k),
            service_time=service_time,
            forecast_withdrawals=list(withdrawals[k]) if withdrawals else [0] * periods,
            total_demand=per_atm(total_demand, k),
            coordinates=xy,
        ))
    fields = dict(
        name="test",
        depots=[Depot(id=f"0{d + 1}", coordinates=xy) for d, xy in enumerate(depots)],
        atms=atm_models,
        vehicles=[
            Vehicle(id=str(h + 1), home_depot=home, capacity=capacity, cost_per_km=cost_per_km,
                    fixed_cost=fixed_cost, speed_kmh=speed_kmh)
            for h, home in enumerate(vehicles)
        ],
        periods=periods,
        distance_km=euclidean(list(depots) + list(atms)),
        depot_window=(420, 1080),
    )
    fields.update(overrides)
    return Instance(**fields)


@pytest.fixture
def make_instance():
    return build_instance


@pytest.fixture
def minimal_instance() -> Instance:
    """1 depot, 1 ATM 5 km away, 1 vehicle, one period"""
    return Instance(
        name="minimal",
        depots=[Depot(id="01")],
        atms=[Atm(id="1", initial_balance=0, service_window=(480, 1020), service_time=0,
                  forecast_withdrawals=[100], total_demand=100)],
        vehicles=[Vehicle(id="1", home_depot="01", capacity=1_000, cost_per_km=2.0)],
        periods=1,
        distance_km=[[0.0, 5.0], [5.0, 0.0]],
    )


@pytest.fixture
def three_depot_instance() -> Instance:
    """
    Three depots, sixteen ATMs. Coordinates make the nearest depot reproduce
    the sample grouping (ATM 6 goes to depot 02 only). Travel takes one
    minute per km, rounded up.
    """
    atms = [
        Atm(
            id=atm_id,
            initial_balance=100,
            service_window=(605, 1020) if atm_id == "2" else (540, 1020),
            service_time=5,
            forecast_withdrawals=[50],
            total_demand=100,
            coordinates=xy,
        )
        for atm_id, xy in SAMPLE_ATMS.items()
    ]
    points = list(SAMPLE_DEPOTS.values()) + list(SAMPLE_ATMS.values())
    return Instance(
        name="three-depot",
        notes="ATM 6 lies between depots 01 and 02; it is served from 02 here",
        depots=[Depot(id=d, coordinates=xy) for d, xy in SAMPLE_DEPOTS.items()],
        atms=atms,
        vehicles=[
            Vehicle(id="1", home_depot="01", capacity=1_000, cost_per_km=1.0, speed_kmh=60.0),
            Vehicle(id="2", home_depot="01", capacity=1_000, cost_per_km=1.0, speed_kmh=60.0),
            Vehicle(id="3", home_depot="02", capacity=1_000, cost_per_km=1.0, speed_kmh=60.0),
            Vehicle(id="4", home_depot="03", capacity=1_000, cost_per_km=1.0, speed_kmh=60.0),
        ],
        periods=1,
        distance_km=euclidean(points),
        interest_rate_annual=0.05,
        depot_window=(480, 1080),
        max_route_time_min=480,
        max_total_distance_km=500.0,
    )


@pytest.fixture
def three_depot_plan() -> Plan:
    """Routes 01-1-5-2-3-01 (leaving 9h30, ATM 2 reached 10h00, served 10h05) and 03-7-9-10-03"""
    return Plan(
        routes={
            "1": {1: ["01", "1", "5", "2", "3", "01"]},
            "4": {1: ["03", "7", "9", "10", "03"]},
        },
        assignment={
            **{atm: {1: ["01"]} for atm in ("1", "5", "2", "3")},
            **{atm: {1: ["03"]} for atm in ("7", "9", "10")},
        },
        deposits={atm: [100 if atm in SAMPLE_VISITED else 0] for atm in SAMPLE_ATMS},
        timing={
            "1": {1: RouteTiming(
                departure=570,
                arrival={"1": 575, "5": 585, "2": 600, "3": 616},
                service_start={"1": 575, "5": 585, "2": 605, "3": 616},
            )},
            "4": {1: RouteTiming(
                departure=540,
                arrival={"7": 545, "9": 554, "10": 562},
                service_start={"7": 545, "9": 554, "10": 562},
            )},
        },
    )


@pytest.fixture
def crossed_instance() -> Instance:
    """One depot, two vehicles, four ATMs in two rows; crossing the rows costs more"""
    return build_instance(
        atms=[(10.0, 10.0), (20.0, 10.0), (10.0, -10.0), (20.0, -10.0)],
        vehicles=("01", "01"),
        withdrawals=[[100]] * 4,
        total_demand=[100] * 4,
        max_total_distance_km=1000.0,
    )


@pytest.fixture
def small_scenario() -> Instance:
    """Benchmark parameters scaled down to six ATMs over three days"""
    return generate_scenario(ScenarioParams(n_atms=6, periods=3, seed=11))


@pytest.fixture
def plan_for():
    """Plan from visit orders {vehicle: {period: [atm ids]}} with deposits taken from a no-split schedule"""

    def build(inst: Instance, routes, policy: Optional[SplitPolicy] = None) -> Plan:
        schedule = build_split_schedule(inst, policy or SplitPolicy.no_split())
        return plan_from_routes(inst, routes, {a.id: schedule.deposits_for(a.id) for a in inst.atms})

    return build
