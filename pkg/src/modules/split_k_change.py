"""Split change: switch one ATM to another deposit count from its split schedule"""

from typing import List, Optional

from src.core.search import Move, SearchContext, SearchState
from src.models.solve import NeighborhoodKind
from src.modules.base import BaseNeighborhood, Spec


class SplitKChangeNeighborhood(BaseNeighborhood):
    """
    Replaces the whole deposit vector of an ATM by another scheduled option,
    then drops visits in periods that lose their deposit and inserts visits
    where a new deposit appears. Needs a split schedule; without one the
    neighborhood is empty.
    """
    kind = NeighborhoodKind.SPLIT_K_CHANGE

    def candidates(self, ctx: SearchContext, state: SearchState) -> List[Spec]:
        if ctx.schedule is None:
            return []
        specs = []
        for a, atm in enumerate(ctx.inst.atms):
            split = ctx.schedule.atms.get(atm.id)
            if split is None:
                continue
            specs.extend(
                (a, option.k)
                for option in split.options
                if option.feasible and option.k != state.split_k[a] and option.deposits != state.deposits[a]
            )
        return specs

    def build(self, ctx: SearchContext, state: SearchState, spec: Spec) -> Optional[Move]:
        a, k = spec
        split = ctx.schedule.atms[ctx.inst.atms[a].id]
        option = next(o for o in split.options if o.k == k)
        move = Move(deposits={a: list(option.deposits)}, split_k={a: k})
        node = ctx.atm_node[a]

        for t, amount in enumerate(option.deposits):
            h = ctx.locate(state, move, a, t)
            if amount == 0 and h is not None:
                route = move.routes.get((h, t), state.routes[h][t])
                move.routes[(h, t)] = [j for j in route if j != node]
            elif amount > 0 and h is None:
                found = ctx.cheapest_insertion(state, a, t, move)
                if found is None:
                    return None
                move.routes[(found.vehicle, t)] = found.nodes
        return move
