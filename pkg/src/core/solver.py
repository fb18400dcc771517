"""
Heuristic solver: nearest-depot assignment, greedy cheapest-insertion
construction and penalised first-improvement local search with restarts.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional

import numpy as np

from src.core.costing import aggregate_cost
from src.core.feasibility import check_plan
from src.core.search import (
    EPS,
    Evaluation,
    Move,
    SearchContext,
    SearchState,
    nearest_depots,
    plan_from_state,
    state_from_plan,
)
from src.core.state_machine import PhaseTransition, SolverPhase
from src.models.instance import Instance, Network
from src.models.plan import Plan
from src.models.solve import NeighborhoodKind, SolveConfig, SolveResult, SolveStatus
from src.models.split import SplitSchedule
from src.modules import REGISTRY, neighborhoods_for

logger = logging.getLogger(__name__)

BATCH_PER_WORKER = 16
PERTURBATION_MOVES = (NeighborhoodKind.RELOCATE, NeighborhoodKind.SWAP)


def assign_depots(inst: Instance) -> Dict[str, str]:
    """Nearest depot of every ATM by distance; ties go to the depot listed first"""
    net = Network.of(inst)
    return {atm.id: net.node_ids[d] for atm, d in zip(inst.atms, nearest_depots(net))}


# ========== CONSTRUCTION ==========

def _initial_state(ctx: SearchContext) -> SearchState:
    p = ctx.periods
    deposits, split_k = [], []
    for atm in ctx.inst.atms:
        split = ctx.schedule.atms.get(atm.id) if ctx.schedule is not None else None
        deposits.append(list(split.chosen().deposits) if split else [0] * p)
        split_k.append(split.chosen_k if split else None)
    routes = [[[] for _ in range(p)] for _ in range(ctx.n_vehicles)]
    return SearchState(ctx, routes, deposits, split_k)


def _repair(ctx: SearchContext, state: SearchState, a: int, t: int) -> None:
    """
    Place the deposit of ATM a in period t somewhere else: the nearest earlier
    period that takes it without a new violation, then the nearest later one
    that keeps the balance nonnegative, else the least-penalised position in t.
    """
    amount = state.deposits[a][t]
    for t2 in list(range(t - 1, -1, -1)) + list(range(t + 1, ctx.periods)):
        vector = list(state.deposits[a])
        vector[t2] += amount
        vector[t] = 0
        move = Move(deposits={a: vector}, split_k={a: None})
        if t2 > t:
            if ctx.atm_eval(a, vector).shortfall > state.atm_evals[a].shortfall:
                continue
            state.apply(ctx.evaluate(state, move))
            logger.debug(f"Deposit of ATM {ctx.inst.atms[a].id} moved from period {t + 1} to {t2 + 1}")
            return
        if ctx.locate(state, move, a, t2) is None:
            found = ctx.cheapest_insertion(state, a, t2, move)
            if found is None or not found.feasible:
                continue
            move.routes[(found.vehicle, t2)] = found.nodes
        ev = ctx.evaluate(state, move)
        if ev.excess <= state.excess + EPS:
            state.apply(ev)
            logger.debug(f"Deposit of ATM {ctx.inst.atms[a].id} moved from period {t + 1} to {t2 + 1}")
            return

    found = ctx.cheapest_insertion(state, a, t)
    if found is not None:
        state.apply(ctx.evaluate(state, Move(routes={(found.vehicle, t): found.nodes})))
    logger.warning(f"ATM {ctx.inst.atms[a].id} routed in period {t + 1} with a constraint violation")


def _construct(ctx: SearchContext, rng: np.random.Generator) -> SearchState:
    """Period by period, depot by depot: insert the cheapest feasible (ATM, position) until none is left"""
    state = _initial_state(ctx)
    order = [int(a) for a in rng.permutation(ctx.n_atms)]
    for t in range(ctx.periods):
        for depot in ctx.vehicles_of:
            pending = [
                a for a in order
                if ctx.depot_of[a] == depot and state.deposits[a][t] > 0 and ctx.locate(state, Move(), a, t) is None
            ]
            while pending:
                best, best_a = None, None
                blocked = []
                for a in pending:
                    found = ctx.cheapest_insertion(state, a, t)
                    if found is None or not found.feasible:
                        blocked.append(a)
                    elif best is None or found.rank < best.rank - EPS:
                        best, best_a = found, a
                if best is None:
                    for a in blocked:
                        _repair(ctx, state, a, t)
                    break
                state.apply(ctx.evaluate(state, Move(routes={(best.vehicle, t): best.nodes})))
                pending.remove(best_a)
    logger.info(f"Construction done: excess {state.excess:g}, weighted cost {state.base:,.0f}")
    return state


def construct_plan(inst: Instance, schedule: Optional[SplitSchedule], seed: int = 0,
                   weights=(1.0, 1.0)) -> Plan:
    """
    Greedy cheapest-insertion plan for the deposits of a split schedule.

    The seed only breaks ties between equally cheap insertions.
    """
    ctx = SearchContext(inst, weights, schedule=schedule)
    return plan_from_state(ctx, _construct(ctx, np.random.default_rng(seed)))


# ========== LOCAL SEARCH ==========

class LocalSearch:
    """
    Coordinator of one search run.

    Owns the state, the seeded generator and the phase. Candidate moves may be
    evaluated on worker threads, but they are accepted in the fixed shuffled
    order, so the outcome does not depend on the number of workers.

    Example Usage:
        search = LocalSearch(inst, SolveConfig(seed=7), schedule)
        result = search.solve()
    """

    def __init__(self, inst: Instance, cfg: SolveConfig, schedule: Optional[SplitSchedule] = None):
        self.inst = inst
        self.cfg = cfg
        self.phase = SolverPhase.IDLE
        self.ctx = SearchContext(inst, cfg.weights, cfg.penalty, schedule)
        self.rng = np.random.default_rng(cfg.seed)
        self.neighborhoods = neighborhoods_for(cfg.neighborhoods)
        self.iterations = 0
        self.trace: List[float] = []
        self.best: Optional[SearchState] = None
        self.best_feasible: Optional[SearchState] = None
        self._deadline = math.inf
        self.clock_stopped = False
        self._pool: Optional[ThreadPoolExecutor] = None

    def _advance(self, phase: SolverPhase) -> None:
        self.phase = PhaseTransition.advance(self.phase, phase)

    def solve(self) -> SolveResult:
        """Construct from the split schedule, then improve"""
        started = time.monotonic()
        try:
            self._advance(SolverPhase.CONSTRUCTING)
            state = _construct(self.ctx, self.rng)
            return self._improve(state, started)
        except Exception:
            self._advance(SolverPhase.FAILED)
            raise

    def improve(self, plan: Plan) -> SolveResult:
        started = time.monotonic()
        try:
            return self._improve(state_from_plan(self.ctx, plan), started)
        except Exception:
            self._advance(SolverPhase.FAILED)
            raise

    # ----- search loop -----

    def _budget_left(self) -> bool:
        if self.iterations >= self.cfg.max_iterations:
            return False
        if time.monotonic() >= self._deadline:
            if not self.clock_stopped:
                logger.warning(f"Time limit of {self.cfg.time_limit:g}s reached after {self.iterations} evaluations; "
                               f"the result depends on wall time")
            self.clock_stopped = True
            return False
        return True

    def _improve(self, state: SearchState, started: float) -> SolveResult:
        self._advance(SolverPhase.IMPROVING)
        if self.cfg.time_limit is not None:
            self._deadline = started + self.cfg.time_limit
        self._record(state)

        workers = self.cfg.workers
        self._pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
        try:
            restarts = 0
            current = state
            while True:
                self._descend(current)
                if not self._budget_left() or restarts >= self.cfg.max_restarts:
                    break
                restarts += 1
                if self.best_feasible is None:
                    self.ctx.penalty *= 2
                    logger.debug(f"Restart {restarts}: no feasible plan yet, penalty raised to {self.ctx.penalty:g}")
                else:
                    logger.debug(f"Restart {restarts}: best feasible {self.best_feasible.base:,.0f}")
                current = (self.best_feasible or self.best).copy()
                self._perturb(current)
        finally:
            if self._pool is not None:
                self._pool.shutdown()

        result = self._result(time.monotonic() - started)
        self._advance(SolverPhase.COMPLETED)
        return result

    def _record(self, state: SearchState) -> None:
        penalty = self.ctx.penalty
        if self.best is None or state.objective(penalty) < self.best.objective(penalty) - EPS:
            self.best = state.copy()
        if state.feasible and (self.best_feasible is None or state.base < self.best_feasible.base - EPS):
            self.best_feasible = state.copy()
            self.trace.append(state.base)

    def _descend(self, state: SearchState) -> None:
        """First improvement until no neighborhood improves or the budget runs out"""
        while self._budget_left():
            accepted = False
            for n in self.rng.permutation(len(self.neighborhoods)):
                neighborhood = self.neighborhoods[int(n)]
                specs = neighborhood.candidates(self.ctx, state)
                if not specs:
                    continue
                order = self.rng.permutation(len(specs))
                ev = self._first_improving(neighborhood, state, [specs[int(i)] for i in order])
                if ev is not None:
                    state.apply(ev)
                    self._record(state)
                    accepted = True
                    break
                if not self._budget_left():
                    return
            if not accepted:
                return

    def _evaluate(self, neighborhood, state: SearchState, spec) -> Optional[Evaluation]:
        move = neighborhood.build(self.ctx, state, spec)
        if move is None or move.empty:
            return None
        return self.ctx.evaluate(state, move)

    def _first_improving(self, neighborhood, state: SearchState, specs) -> Optional[Evaluation]:
        penalty = self.ctx.penalty
        current = state.objective(penalty)
        threshold = current - EPS * max(1.0, abs(current))
        batch = BATCH_PER_WORKER * self.cfg.workers
        pos = 0
        while pos < len(specs) and self._budget_left():
            size = min(batch, len(specs) - pos, self.cfg.max_iterations - self.iterations)
            chunk = specs[pos:pos + size]
            if self._pool is not None:
                evaluations = list(self._pool.map(lambda s: self._evaluate(neighborhood, state, s), chunk))
            else:
                evaluations = (self._evaluate(neighborhood, state, s) for s in chunk)
            for k, ev in enumerate(evaluations):
                if ev is not None and ev.objective(penalty) < threshold:
                    self.iterations += k + 1
                    return ev
            self.iterations += size
            pos += size
        return None

    def _perturb(self, state: SearchState) -> None:
        moves = [REGISTRY[kind] for kind in PERTURBATION_MOVES]
        for _ in range(self.cfg.perturbation_strength):
            neighborhood = moves[int(self.rng.integers(len(moves)))]
            specs = neighborhood.candidates(self.ctx, state)
            if not specs:
                continue
            move = neighborhood.build(self.ctx, state, specs[int(self.rng.integers(len(specs)))])
            if move is not None and not move.empty:
                state.apply(self.ctx.evaluate(state, move))

    def _result(self, wall_time: float) -> SolveResult:
        chosen = self.best_feasible or self.best
        plan = plan_from_state(self.ctx, chosen)
        violations = check_plan(self.inst, plan)
        if self.best_feasible is not None and violations:
            logger.error(f"Search judged the plan feasible but the checker found {len(violations)} violations")
        status = SolveStatus.INFEASIBLE if violations else SolveStatus.FEASIBLE
        cost = aggregate_cost(self.inst, plan, self.cfg.weights)
        logger.info(
            f"Search finished: {status.value}, total {cost.transport + cost.financial:,} VND, "
            f"{self.iterations} evaluations in {wall_time:.1f}s"
        )
        return SolveResult(
            plan=plan,
            cost=cost,
            status=status,
            iterations=self.iterations,
            wall_time=wall_time,
            violations=violations,
            trace=list(self.trace),
            chosen_k={atm.id: k for atm, k in zip(self.inst.atms, chosen.split_k) if k is not None},
        )


def improve_plan(inst: Instance, plan: Plan, cfg: SolveConfig,
                 schedule: Optional[SplitSchedule] = None) -> SolveResult:
    """
    Penalised local search from an existing plan.

    The result is the best feasible plan found, or the least-violating one
    with status infeasible.
    """
    return LocalSearch(inst, cfg, schedule).improve(plan)


def solve_heuristic(inst: Instance, schedule: Optional[SplitSchedule], cfg: SolveConfig) -> SolveResult:
    return LocalSearch(inst, cfg, schedule).solve()
