"""
Search internals shared by construction, local search and the exact solver.

Routes are handled as lists of ATM node indices (depot endpoints implied by the
vehicle), periods as 0-based indices and ATMs by their position in the
instance. Everything is converted back to ids when a Plan is materialised.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from src.core.costing import DAYS_PER_YEAR, atm_balance_sum
from src.models.instance import Instance, Network
from src.models.plan import Plan, RouteTiming
from src.models.solve import check_weights

EPS = 1e-6

RouteKey = Tuple[int, int]  # (vehicle index, period index)


# ========== ROUTE SCHEDULING ==========

@dataclass(frozen=True)
class RouteSchedule:
    departure: int
    arrivals: Tuple[int, ...]
    starts: Tuple[int, ...]
    back: int

    @property
    def duration(self) -> int:
        return self.back - self.departure


def _forward(net: Network, h: int, nodes: Sequence[int], departure: int):
    depot = net.home[h]
    arrivals, starts = [], []
    ready, prev = departure, depot
    waiting, slack = 0, math.inf
    for j in nodes:
        r = ready + int(net.travel[h, prev, j])
        w = max(r, net.window_open[j])
        waiting += w - r
        slack = min(slack, waiting + net.window_close[j] - w)
        arrivals.append(r)
        starts.append(w)
        ready = w + net.service[j]
        prev = j
    back = ready + int(net.travel[h, prev, depot])
    return arrivals, starts, back, waiting, slack


def schedule_route(net: Network, e0: int, h: int, nodes: Sequence[int]) -> Optional[RouteSchedule]:
    """
    Departure, arrival and service-start times of a route.

    The vehicle leaves to reach the first ATM as it opens (never before the
    depot opens). The departure is then pushed back by as much of the waiting
    along the route as the windows allow, which shortens the route without
    moving its return time.
    """
    if not nodes:
        return None
    depot, first = net.home[h], nodes[0]
    departure = max(e0, net.window_open[first] - int(net.travel[h, depot, first]))
    arrivals, starts, back, waiting, slack = _forward(net, h, nodes, departure)
    delay = max(0, min(slack, waiting))
    if delay:
        departure += int(delay)
        arrivals, starts, back, _, _ = _forward(net, h, nodes, departure)
    return RouteSchedule(departure, tuple(arrivals), tuple(starts), back)


def nearest_depots(net: Network) -> List[int]:
    """Depot node index for every ATM position; ties go to the lower depot index"""
    n_atms = len(net.node_ids) - net.n_depots
    return [
        min(range(net.n_depots), key=lambda d: (net.distance[d, net.atm_node(a)], d))
        for a in range(n_atms)
    ]


# ========== EVALUATION ==========

@dataclass(frozen=True)
class RouteEval:
    km: float
    cost: float
    load: int
    excess: float
    schedule: Optional[RouteSchedule]


@dataclass(frozen=True)
class AtmEval:
    holding: float
    shortfall: int


EMPTY_ROUTE = RouteEval(km=0.0, cost=0.0, load=0, excess=0.0, schedule=None)


class Insertion(NamedTuple):
    vehicle: int
    nodes: List[int]
    rank: float
    extra: float

    @property
    def feasible(self) -> bool:
        return self.extra <= EPS


@dataclass
class Move:
    """Replacement routes, deposit vectors and split choices; anything absent is unchanged"""
    routes: Dict[RouteKey, List[int]] = field(default_factory=dict)
    deposits: Dict[int, List[int]] = field(default_factory=dict)
    split_k: Dict[int, Optional[int]] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not (self.routes or self.deposits or self.split_k)


@dataclass
class Evaluation:
    move: Move
    base: float
    excess: float
    route_evals: Dict[RouteKey, RouteEval]
    atm_evals: Dict[int, AtmEval]

    def objective(self, penalty: float) -> float:
        return self.base + penalty * self.excess


class DepositView:
    """Deposit vectors of a state with a move's replacements laid over them"""

    def __init__(self, base: Sequence[Sequence[int]], overlay: Dict[int, List[int]]):
        self.base = base
        self.overlay = overlay

    def __getitem__(self, a: int) -> Sequence[int]:
        return self.overlay.get(a, self.base[a])


class SearchContext:
    """
    Shared data of one search run: network, weights, penalty, depot of every
    ATM and the split schedule (if any). Only the penalty changes during a run.
    """

    def __init__(self, inst: Instance, weights: Tuple[float, float] = (1.0, 1.0),
                 penalty: Optional[float] = None, schedule=None):
        self.inst = inst
        self.net = Network.of(inst)
        self.w1, self.w2 = check_weights(weights)
        self.periods = inst.periods
        self.e0, self.l0 = inst.depot_window
        self.t_max = inst.max_route_time_min
        self.max_km = inst.max_total_distance_km
        self.rate = inst.interest_rate_annual / DAYS_PER_YEAR
        self.schedule = schedule

        self.n_atms = len(inst.atms)
        self.n_vehicles = len(inst.vehicles)
        self.atm_node = [self.net.atm_node(a) for a in range(self.n_atms)]
        self.depot_of = nearest_depots(self.net)
        self.vehicles_of: Dict[int, List[int]] = {d: [] for d in range(self.net.n_depots)}
        for h in range(self.n_vehicles):
            self.vehicles_of[self.net.home[h]].append(h)
        self.capacity = [v.capacity for v in inst.vehicles]
        self.cost_per_km = [v.cost_per_km for v in inst.vehicles]
        self.fixed = [v.fixed_cost for v in inst.vehicles]
        self.penalty = penalty if penalty is not None else self.default_penalty()

    def default_penalty(self) -> float:
        """10 times the most expensive single arc, or 1 when every arc is free"""
        largest = 0.0
        for h in range(self.n_vehicles):
            largest = max(largest, float(self.net.distance.max()) * self.cost_per_km[h])
        return 10.0 * largest if largest > 0 else 1.0

    def atm_of(self, node: int) -> int:
        return node - self.net.n_depots

    # ----- single items -----

    def route_eval(self, h: int, t: int, nodes: Sequence[int], deposits) -> RouteEval:
        if not nodes:
            return EMPTY_ROUTE
        net = self.net
        depot = net.home[h]
        km = float(net.distance[depot, nodes[0]])
        for i, j in zip(nodes[:-1], nodes[1:]):
            km += float(net.distance[i, j])
        km += float(net.distance[nodes[-1], depot])

        load = sum(deposits[self.atm_of(j)][t] for j in nodes)
        sched = schedule_route(net, self.e0, h, nodes)
        excess = max(0, load - self.capacity[h])
        excess += sum(max(0, w - net.window_close[j]) for j, w in zip(nodes, sched.starts))
        excess += max(0, sched.duration - self.t_max)
        excess += max(0, sched.back - self.l0)
        excess += sum(1 for k, j in enumerate(nodes) if j in nodes[:k])
        cost = self.cost_per_km[h] * km + self.fixed[h]
        return RouteEval(km=km, cost=cost, load=load, excess=float(excess), schedule=sched)

    def atm_eval(self, a: int, vector: Sequence[int]) -> AtmEval:
        atm = self.inst.atms[a]
        balance, lowest = atm.initial_balance, 0
        for d, m in zip(vector, atm.forecast_withdrawals):
            balance += d - m
            lowest = min(lowest, balance)
        return AtmEval(holding=self.rate * atm_balance_sum(atm, list(vector)), shortfall=-lowest)

    def distance_excess(self, km: float) -> float:
        return max(0.0, km - self.max_km)

    # ----- moves -----

    def evaluate(self, state: "SearchState", move: Move) -> Evaluation:
        """Absolute base cost and violation excess of state after move, touching only what changes"""
        deposits = DepositView(state.deposits, move.deposits)
        touched = set(move.routes)
        for a, vector in move.deposits.items():
            for t in range(self.periods):
                if vector[t] != state.deposits[a][t]:
                    h = self.locate(state, move, a, t)
                    if h is not None:
                        touched.add((h, t))

        route_evals: Dict[RouteKey, RouteEval] = {}
        d_cost = d_excess = 0.0
        km_change: Dict[int, float] = {}
        for h, t in touched:
            nodes = move.routes.get((h, t), state.routes[h][t])
            new = self.route_eval(h, t, nodes, deposits)
            old = state.route_evals[h][t]
            route_evals[(h, t)] = new
            d_cost += new.cost - old.cost
            d_excess += new.excess - old.excess
            km_change[h] = km_change.get(h, 0.0) + new.km - old.km
        for h, change in km_change.items():
            d_excess += self.distance_excess(state.vehicle_km[h] + change) - self.distance_excess(state.vehicle_km[h])

        atm_evals: Dict[int, AtmEval] = {}
        d_holding = 0.0
        for a, vector in move.deposits.items():
            new = self.atm_eval(a, vector)
            old = state.atm_evals[a]
            atm_evals[a] = new
            d_holding += new.holding - old.holding
            d_excess += new.shortfall - old.shortfall

        return Evaluation(
            move=move,
            base=state.base + self.w1 * d_cost + self.w2 * d_holding,
            excess=max(0.0, state.excess + d_excess),
            route_evals=route_evals,
            atm_evals=atm_evals,
        )

    def locate(self, state: "SearchState", move: Move, a: int, t: int) -> Optional[int]:
        """Vehicle whose period-t route visits ATM a, after the move"""
        node = self.atm_node[a]
        for h in self.vehicles_of[self.depot_of[a]]:
            if node in move.routes.get((h, t), state.routes[h][t]):
                return h
        for h in range(self.n_vehicles):
            if node in move.routes.get((h, t), state.routes[h][t]):
                return h
        return None

    def cheapest_insertion(self, state: "SearchState", a: int, t: int,
                           move: Optional[Move] = None) -> Optional[Insertion]:
        """
        Best position for ATM a in period t among the vehicles of its depot.

        Positions that add no violation (C12 included) win over those that do;
        within each group the weighted transport increase plus penalised new
        excess decides. None when the depot has no vehicle.
        """
        move = move or Move()
        deposits = DepositView(state.deposits, move.deposits)
        node = self.atm_node[a]
        best, best_key = None, None
        for h in self.vehicles_of[self.depot_of[a]]:
            current = move.routes.get((h, t), state.routes[h][t])
            old = self.route_eval(h, t, current, deposits)
            other_km = state.vehicle_km[h] - state.route_evals[h][t].km
            for pos in range(len(current) + 1):
                nodes = current[:pos] + [node] + current[pos:]
                new = self.route_eval(h, t, nodes, deposits)
                extra = (new.excess - old.excess
                         + self.distance_excess(other_km + new.km) - self.distance_excess(other_km + old.km))
                extra = max(0.0, extra)
                rank = self.w1 * (new.cost - old.cost) + self.penalty * extra
                key = (extra > EPS, rank)
                if best is None or key[0] < best_key[0] or (key[0] == best_key[0] and rank < best_key[1] - EPS):
                    best, best_key = Insertion(h, nodes, rank, extra), key
        return best


# ========== STATE ==========

class SearchState:
    """Mutable routes, deposits and split choices with cached per-item evaluations"""

    def __init__(self, ctx: SearchContext, routes: List[List[List[int]]],
                 deposits: List[List[int]], split_k: List[Optional[int]]):
        self.routes = routes
        self.deposits = deposits
        self.split_k = split_k
        self.route_evals = [
            [ctx.route_eval(h, t, routes[h][t], deposits) for t in range(ctx.periods)]
            for h in range(ctx.n_vehicles)
        ]
        self.atm_evals = [ctx.atm_eval(a, deposits[a]) for a in range(ctx.n_atms)]
        self.vehicle_km = [sum(e.km for e in row) for row in self.route_evals]
        self.base = (
            ctx.w1 * sum(e.cost for row in self.route_evals for e in row)
            + ctx.w2 * sum(e.holding for e in self.atm_evals)
        )
        self.excess = (
            sum(e.excess for row in self.route_evals for e in row)
            + sum(e.shortfall for e in self.atm_evals)
            + sum(ctx.distance_excess(km) for km in self.vehicle_km)
        )

    @property
    def feasible(self) -> bool:
        return self.excess <= EPS

    def objective(self, penalty: float) -> float:
        return self.base + penalty * self.excess

    def copy(self) -> "SearchState":
        other = object.__new__(SearchState)
        other.routes = [[list(r) for r in row] for row in self.routes]
        other.deposits = [list(v) for v in self.deposits]
        other.split_k = list(self.split_k)
        other.route_evals = [list(row) for row in self.route_evals]
        other.atm_evals = list(self.atm_evals)
        other.vehicle_km = list(self.vehicle_km)
        other.base = self.base
        other.excess = self.excess
        return other

    def apply(self, ev: Evaluation) -> None:
        move = ev.move
        for (h, t), nodes in move.routes.items():
            self.routes[h][t] = list(nodes)
        for a, vector in move.deposits.items():
            self.deposits[a] = list(vector)
        for a, k in move.split_k.items():
            self.split_k[a] = k
        for (h, t), new in ev.route_evals.items():
            self.route_evals[h][t] = new
        for h in {h for h, _ in ev.route_evals}:
            self.vehicle_km[h] = sum(e.km for e in self.route_evals[h])
        for a, new in ev.atm_evals.items():
            self.atm_evals[a] = new
        self.base = ev.base
        self.excess = ev.excess


# ========== CONVERSIONS ==========

def plan_from_routes(inst: Instance, routes: Dict[str, Dict[int, List[str]]],
                     deposits: Dict[str, List[int]]) -> Plan:
    """
    Materialise a Plan from ATM visit orders per vehicle and period.

    Adds the depot endpoints, y = 1 for the home depot of every visit, z for
    every (vehicle, period) and timings from schedule_route.
    """
    net = Network.of(inst)
    e0 = inst.depot_window[0]
    plan = Plan(deposits={a.id: list(deposits.get(a.id, [0] * inst.periods)) for a in inst.atms})
    for h, vehicle in enumerate(inst.vehicles):
        for period in range(1, inst.periods + 1):
            stops = routes.get(vehicle.id, {}).get(period, [])
            plan.usage.setdefault(vehicle.id, {})[period] = 1 if stops else 0
            if not stops:
                continue
            plan.routes.setdefault(vehicle.id, {})[period] = [vehicle.home_depot] + list(stops) + [vehicle.home_depot]
            sched = schedule_route(net, e0, h, [net.index[j] for j in stops])
            plan.timing.setdefault(vehicle.id, {})[period] = RouteTiming(
                departure=sched.departure,
                arrival=dict(zip(stops, sched.arrivals)),
                service_start=dict(zip(stops, sched.starts)),
            )
            for atm_id in stops:
                plan.assignment.setdefault(atm_id, {})[period] = [vehicle.home_depot]
    return plan


def plan_from_state(ctx: SearchContext, state: SearchState) -> Plan:
    node_ids = ctx.net.node_ids
    routes = {
        vehicle.id: {t + 1: [node_ids[j] for j in state.routes[h][t]] for t in range(ctx.periods)}
        for h, vehicle in enumerate(ctx.inst.vehicles)
    }
    deposits = {atm.id: state.deposits[a] for a, atm in enumerate(ctx.inst.atms)}
    return plan_from_routes(ctx.inst, routes, deposits)


def state_from_plan(ctx: SearchContext, plan: Plan) -> SearchState:
    """
    Search state of an existing plan. Depots inside sequences are dropped and
    a deposit nobody visits is routed by cheapest insertion.
    """
    inst, net = ctx.inst, ctx.net
    routes = [
        [[net.index[j] for j in plan.stops(v.id, t + 1) if not net.is_depot(net.index[j])] for t in range(ctx.periods)]
        for v in inst.vehicles
    ]
    deposits = [plan.deposit_vector(a.id, ctx.periods) for a in inst.atms]
    split_k: List[Optional[int]] = [None] * ctx.n_atms
    if ctx.schedule is not None:
        for a, atm in enumerate(inst.atms):
            split = ctx.schedule.atms.get(atm.id)
            if split is None:
                continue
            for option in split.options:
                if option.deposits == deposits[a]:
                    split_k[a] = option.k
                    break
    state = SearchState(ctx, routes, deposits, split_k)

    for a in range(ctx.n_atms):
        for t in range(ctx.periods):
            if deposits[a][t] > 0 and ctx.locate(state, Move(), a, t) is None:
                found = ctx.cheapest_insertion(state, a, t)
                if found is not None:
                    state.apply(ctx.evaluate(state, Move(routes={(found.vehicle, t): found.nodes})))
    return state
