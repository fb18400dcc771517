"""
Objective functions: transportation cost f1, financial cost f2 and the
cash-balance trajectory behind f2.

Money is exact. Products are accumulated as Decimal and rounded half-up to
whole VND once, at the final sum.
"""

from decimal import ROUND_HALF_UP, Decimal
from typing import List, Optional, Tuple

from src.models.costs import CostBreakdown, InventoryTrajectory
from src.models.instance import Atm, Instance, Network, Vehicle
from src.models.plan import Plan, arcs_of, check_references
from src.models.solve import check_weights

DAYS_PER_YEAR = 365


def to_money(value: Decimal) -> int:
    return int(value.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def _decimal(value: float) -> Decimal:
    return Decimal(repr(float(value)))


def inventory_trajectory(inst: Instance, plan: Plan) -> InventoryTrajectory:
    """B_jt = I_0j + sum over k <= t of (d_jk - m_jk); negative balances are reported as is"""
    check_references(inst, plan)
    balances = {}
    for atm in inst.atms:
        deposits = plan.deposit_vector(atm.id, inst.periods)
        balance = atm.initial_balance
        row = []
        for d, m in zip(deposits, atm.forecast_withdrawals):
            balance += d - m
            row.append(balance)
        balances[atm.id] = row
    return InventoryTrajectory(balances=balances)


def route_transport_cost(inst: Instance, vehicle: Vehicle, route: List[str], network: Optional[Network] = None) -> Decimal:
    """Unrounded a_h * sum of c_ij over the route's arcs, plus F_h when the route is used"""
    net = network or Network.of(inst)
    arcs = arcs_of(route)
    if not arcs:
        return Decimal(0)
    km = sum((_decimal(net.distance[net.index[i], net.index[j]]) for i, j in arcs), Decimal(0))
    cost = _decimal(vehicle.cost_per_km) * km
    if len(route) > 2:
        cost += Decimal(vehicle.fixed_cost)
    return cost


def transport_cost(inst: Instance, plan: Plan) -> int:
    """f1; an empty plan costs 0"""
    check_references(inst, plan)
    net = Network.of(inst)
    total = Decimal(0)
    for vehicle in inst.vehicles:
        for period in range(1, inst.periods + 1):
            total += route_transport_cost(inst, vehicle, plan.route(vehicle.id, period), net)
    return to_money(total)


def atm_balance_sum(atm: Atm, deposits: List[int]) -> int:
    """p(I_0 + d_1 - m_1) + (p-1)(d_2 - m_2) + ... + (d_p - m_p) for one ATM"""
    p = len(atm.forecast_withdrawals)
    total = p * atm.initial_balance
    for t, (d, m) in enumerate(zip(deposits, atm.forecast_withdrawals)):
        total += (p - t) * (d - m)
    return total


def balance_sum(inst: Instance, plan: Plan) -> int:
    return sum(atm_balance_sum(atm, plan.deposit_vector(atm.id, inst.periods)) for atm in inst.atms)


def holding_cost(inst: Instance, balance: int) -> int:
    """IR/365 times a balance sum, rounded half-up"""
    return to_money(_decimal(inst.interest_rate_annual) * Decimal(balance) / DAYS_PER_YEAR)


def financial_cost(inst: Instance, plan: Plan) -> int:
    """f2 = IR/365 times the weighted balance sum, rounded half-up to 1 VND"""
    check_references(inst, plan)
    return holding_cost(inst, balance_sum(inst, plan))


def total_distance_km(inst: Instance, plan: Plan) -> float:
    net = Network.of(inst)
    total = Decimal(0)
    for vehicle in inst.vehicles:
        for period in range(1, inst.periods + 1):
            for i, j in arcs_of(plan.route(vehicle.id, period)):
                total += _decimal(net.distance[net.index[i], net.index[j]])
    return float(total)


def trip_count(inst: Instance, plan: Plan) -> int:
    """Non-empty (vehicle, period) routes"""
    return sum(
        1
        for vehicle in inst.vehicles
        for period in range(1, inst.periods + 1)
        if plan.stops(vehicle.id, period)
    )


def aggregate_cost(inst: Instance, plan: Plan, weights: Tuple[float, float] = (1.0, 1.0)) -> CostBreakdown:
    """
    Weighted-sum scalarization w1 * f1 + w2 * f2 with trip and distance totals.

    Raises:
        ValueError: if a weight is negative or both are zero
    """
    w1, w2 = check_weights(weights)
    f1 = transport_cost(inst, plan)
    f2 = financial_cost(inst, plan)
    return CostBreakdown(
        transport=f1,
        financial=f2,
        aggregate=w1 * f1 + w2 * f2,
        trips=trip_count(inst, plan),
        total_km=total_distance_km(inst, plan),
        weights=(w1, w2),
    )
