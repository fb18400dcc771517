"""
Exact solver for tiny instances, used as a verification oracle.

Deposits are fixed by the split schedule and every ATM is served from its
nearest depot, so only the routing is optimised: per (vehicle, period) the
shortest feasible visiting order of every ATM subset, then the cheapest
assignment of ATMs to vehicles per period, combined across periods under the
horizon distance cap.
"""

import itertools
import logging
import math
import time
from typing import Dict, List, Optional, Tuple

from src.core.costing import aggregate_cost
from src.core.feasibility import check_plan
from src.core.search import EPS, SearchContext, plan_from_routes
from src.core.state_machine import SolverError
from src.models.instance import Instance
from src.models.solve import ExactLimits, SolveResult, SolveStatus
from src.models.split import SplitSchedule

logger = logging.getLogger(__name__)

# mask over the period's candidate ATMs -> (km, visiting order as ATM positions)
SubsetRoutes = Dict[int, Tuple[float, Tuple[int, ...]]]


class _OutOfBudget(Exception):
    pass


class _Budget:
    def __init__(self, limits: ExactLimits):
        self.deadline = time.monotonic() + limits.time_limit
        self.max_nodes = limits.max_nodes
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes or (self.nodes % 1024 == 0 and time.monotonic() > self.deadline):
            raise _OutOfBudget()


def _subset_routes(ctx: SearchContext, h: int, t: int, candidates: List[int],
                   deposits: List[List[int]], budget: _Budget) -> SubsetRoutes:
    """Depth-first enumeration of visiting orders with capacity, window and depot-closing pruning"""
    net = ctx.net
    depot = net.home[h]
    cap = ctx.capacity[h]
    best: SubsetRoutes = {}

    def extend(mask, last, order, km, load, ready, waiting, slack, departure):
        budget.tick()
        if mask:
            back = ready + int(net.travel[h, last, depot])
            delay = max(0, min(slack, waiting))
            if back <= ctx.l0 and back - (departure + delay) <= ctx.t_max:
                total = km + float(net.distance[last, depot])
                if mask not in best or total < best[mask][0] - EPS:
                    best[mask] = (total, order)
        for k, a in enumerate(candidates):
            if mask >> k & 1:
                continue
            new_load = load + deposits[a][t]
            if new_load > cap:
                continue
            node = ctx.atm_node[a]
            if mask:
                start = departure
                r = ready + int(net.travel[h, last, node])
            else:
                start = max(ctx.e0, net.window_open[node] - int(net.travel[h, depot, node]))
                r = start + int(net.travel[h, depot, node])
            w = max(r, net.window_open[node])
            if w > net.window_close[node] or w + net.service[node] > ctx.l0:
                continue
            new_waiting = waiting + w - r
            extend(
                mask | (1 << k), node, order + (a,),
                km + float(net.distance[last, node]), new_load,
                w + net.service[node], new_waiting,
                min(slack, new_waiting + net.window_close[node] - w), start,
            )

    extend(0, depot, (), 0.0, 0, 0, 0, math.inf, 0)
    return best


def _period_options(ctx: SearchContext, vehicles: List[int], t: int, candidates: List[int],
                    routes: Dict[int, SubsetRoutes]):
    """Every feasible split of the period's ATMs among the depot's vehicles, cheapest first"""
    if not candidates:
        return [(0.0, {h: 0.0 for h in vehicles}, {})]
    options = []
    for owners in itertools.product(range(len(vehicles)), repeat=len(candidates)):
        masks = [0] * len(vehicles)
        for k, owner in enumerate(owners):
            masks[owner] |= 1 << k
        cost, kms, orders = 0.0, {}, {}
        for v, h in enumerate(vehicles):
            if not masks[v]:
                kms[h] = 0.0
                continue
            found = routes[h].get(masks[v])
            if found is None:
                break
            km, order = found
            cost += ctx.cost_per_km[h] * km + ctx.fixed[h]
            kms[h] = km
            orders[h] = order
        else:
            options.append((cost, kms, orders))
    options.sort(key=lambda o: o[0])
    return options


def _combine(ctx: SearchContext, vehicles: List[int], per_period, budget: _Budget):
    """Branch and bound over one option per period, keeping every vehicle within the distance cap"""
    remaining_bound = [0.0] * (len(per_period) + 1)
    for t in range(len(per_period) - 1, -1, -1):
        remaining_bound[t] = remaining_bound[t + 1] + (per_period[t][0][0] if per_period[t] else math.inf)
    best = [math.inf, None]

    def branch(t, cost, kms, chosen):
        budget.tick()
        if cost + remaining_bound[t] >= best[0] - EPS:
            return
        if t == len(per_period):
            best[0], best[1] = cost, list(chosen)
            return
        for option in per_period[t]:
            option_cost, option_kms, _ = option
            new_kms = {h: kms[h] + option_kms[h] for h in vehicles}
            if any(km > ctx.max_km + EPS for km in new_kms.values()):
                continue
            branch(t + 1, cost + option_cost, new_kms, chosen + [option])

    branch(0, 0.0, {h: 0.0 for h in vehicles}, [])
    return best[1]


def solve_exact(inst: Instance, schedule: Optional[SplitSchedule], limits: Optional[ExactLimits] = None,
                weights: Tuple[float, float] = (1.0, 1.0)) -> SolveResult:
    """
    Provably optimal routing for the schedule's deposits on a tiny instance.

    Returns status optimal, infeasible (no routing satisfies every constraint
    or the deposits themselves break one) or timeout (best found so far, if
    any).

    Raises:
        SolverError: the instance exceeds the ATM, vehicle or period caps
    """
    limits = limits or ExactLimits()
    if len(inst.atms) > limits.max_atms or len(inst.vehicles) > limits.max_vehicles or inst.periods > limits.max_periods:
        raise SolverError(
            f"Exact search is limited to {limits.max_atms} ATMs, {limits.max_vehicles} vehicles and "
            f"{limits.max_periods} periods; got {len(inst.atms)}, {len(inst.vehicles)}, {inst.periods}"
        )

    started = time.monotonic()
    ctx = SearchContext(inst, weights, schedule=schedule)
    deposits = [schedule.deposits_for(a.id) if schedule is not None else [0] * inst.periods for a in inst.atms]
    budget = _Budget(limits)
    routes: Dict[str, Dict[int, List[str]]] = {v.id: {} for v in inst.vehicles}
    status = SolveStatus.OPTIMAL

    try:
        for depot, vehicles in ctx.vehicles_of.items():
            served = [a for a in range(ctx.n_atms) if ctx.depot_of[a] == depot]
            if not vehicles:
                if any(deposits[a][t] > 0 for a in served for t in range(ctx.periods)):
                    status = SolveStatus.INFEASIBLE
                continue
            per_period = []
            for t in range(ctx.periods):
                candidates = [a for a in served if deposits[a][t] > 0]
                subset_routes = {h: _subset_routes(ctx, h, t, candidates, deposits, budget) for h in vehicles}
                per_period.append(_period_options(ctx, vehicles, t, candidates, subset_routes))
            chosen = _combine(ctx, vehicles, per_period, budget)
            if chosen is None:
                status = SolveStatus.INFEASIBLE
                continue
            for t, (_, _, orders) in enumerate(chosen):
                for h, order in orders.items():
                    routes[inst.vehicles[h].id][t + 1] = [inst.atms[a].id for a in order]
    except _OutOfBudget:
        logger.warning(f"Exact search stopped after {budget.nodes} partial routes")
        status = SolveStatus.TIMEOUT

    plan = plan_from_routes(inst, routes, {a.id: deposits[i] for i, a in enumerate(inst.atms)})
    violations = check_plan(inst, plan)
    if status == SolveStatus.OPTIMAL and violations:
        status = SolveStatus.INFEASIBLE
    wall_time = time.monotonic() - started
    logger.info(f"Exact search: {status.value} after {budget.nodes} partial routes in {wall_time:.2f}s")
    return SolveResult(
        plan=plan,
        cost=aggregate_cost(inst, plan, weights),
        status=status,
        iterations=budget.nodes,
        wall_time=wall_time,
        violations=violations,
        chosen_k={a.id: schedule.atms[a.id].chosen_k for a in inst.atms
                  if schedule is not None and a.id in schedule.atms},
    )
