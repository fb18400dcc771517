"""
Simulated instances shaped like the benchmark setting.

Every random draw comes from one numpy Generator seeded by params.seed, so a
(params, seed) pair always yields the same instance.
"""

import logging
import math
from typing import List

import numpy as np

from src.models.instance import Atm, Depot, Instance, Vehicle, validate_instance
from src.models.scenario import ScenarioError, ScenarioParams, WithdrawalProfile
from src.models.split import SplitMode, SplitPolicy

logger = logging.getLogger(__name__)

DAYS_PER_WEEK = 7
WEEKEND = (6, 7)


def profile_weights(profile: WithdrawalProfile, periods: int) -> np.ndarray:
    """Relative withdrawal weight of every period"""
    if profile == WithdrawalProfile.FRONTLOADED:
        return np.arange(periods, 0, -1, dtype=float)
    if profile == WithdrawalProfile.WEEKEND_SPIKE:
        days = (np.arange(periods) % DAYS_PER_WEEK) + 1
        return np.where(np.isin(days, WEEKEND), 2.0, 1.0)
    return np.ones(periods)


def spread_withdrawals(total_units: int, weights: np.ndarray) -> List[int]:
    """
    Integer split of total_units proportional to weights (largest remainder,
    earlier periods first on ties); the parts sum to total_units exactly.
    """
    shares = total_units * weights / weights.sum()
    parts = np.floor(shares).astype(np.int64)
    leftover = int(total_units - parts.sum())
    order = np.argsort(-(shares - parts), kind="stable")
    parts[order[:leftover]] += 1
    return [int(x) for x in parts]


def generate_scenario(params: ScenarioParams) -> Instance:
    """
    Random instance for the given parameters.

    Depots and ATMs are placed uniformly in the square, distances are
    Euclidean km rounded to 0.1, totals are whole money units drawn from the
    demand range and I_0 equals the first day's withdrawals.

    Raises:
        ScenarioError: the generated instance breaks an instance invariant
    """
    rng = np.random.default_rng(params.seed)
    unit = params.money_unit
    n_nodes = params.n_depots + params.n_atms

    coords = rng.uniform(0.0, params.area_extent, size=(n_nodes, 2))
    diff = coords[:, None, :] - coords[None, :, :]
    distance = np.round(np.hypot(diff[..., 0], diff[..., 1]), 1)
    np.fill_diagonal(distance, 0.0)

    lo, hi = params.total_demand_range
    totals = rng.integers(math.ceil(lo / unit), hi // unit + 1, size=params.n_atms)
    weights = profile_weights(params.withdrawal_profile, params.periods)

    depots = [
        Depot(id=f"0{d + 1}", coordinates=(round(float(x), 3), round(float(y), 3)))
        for d, (x, y) in enumerate(coords[: params.n_depots])
    ]
    atms = []
    for a, (x, y) in enumerate(coords[params.n_depots:]):
        withdrawals = [units * unit for units in spread_withdrawals(int(totals[a]), weights)]
        atms.append(Atm(
            id=str(a + 1),
            initial_balance=withdrawals[0],
            service_window=params.atm_window,
            service_time=params.service_time_min,
            forecast_withdrawals=withdrawals,
            total_demand=int(totals[a]) * unit,
            coordinates=(round(float(x), 3), round(float(y), 3)),
        ))

    vehicles = [
        Vehicle(
            id=str(d * params.vehicles_per_depot + k + 1),
            home_depot=depot.id,
            capacity=params.vehicle_capacity,
            cost_per_km=params.cost_per_km,
            fixed_cost=params.fixed_cost_per_trip,
            speed_kmh=params.speed_kmh,
        )
        for d, depot in enumerate(depots)
        for k in range(params.vehicles_per_depot)
    ]

    inst = Instance(
        name=f"scenario-{params.n_atms}atm-{params.periods}d-seed{params.seed}",
        notes=f"generated, {params.withdrawal_profile.value} withdrawals",
        depots=depots,
        atms=atms,
        vehicles=vehicles,
        periods=params.periods,
        distance_km=distance.tolist(),
        interest_rate_annual=params.interest_rate,
        depot_window=params.depot_window,
        max_route_time_min=params.max_route_time_min,
        max_total_distance_km=params.max_total_distance_km,
    )
    defects = validate_instance(inst)
    if defects:
        raise ScenarioError("; ".join(str(d) for d in defects))
    logger.info(f"Generated {inst.name}: {params.n_atms} ATMs, {len(vehicles)} vehicles, {params.periods} periods")
    return inst


def benchmark_params(n_atms: int = 28, seed: int = 0) -> ScenarioParams:
    """Benchmark setting: 2 depots, 2 vehicles each, 7 days, 5% a year, 2.5-3.5B totals, 1.0-1.4B deposits"""
    return ScenarioParams(n_atms=n_atms, seed=seed)


def split_policy_for(params: ScenarioParams, mode: SplitMode = SplitMode.SPLIT) -> SplitPolicy:
    lower, upper = params.per_deposit_range
    return SplitPolicy(lower_bound=lower, upper_bound=upper, mode=mode)
