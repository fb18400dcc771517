"""Period move: shift one deposit to an adjacent period where the ATM gets nothing yet"""

from typing import List, Optional

from src.core.search import Move, SearchContext, SearchState
from src.models.solve import NeighborhoodKind
from src.modules.base import BaseNeighborhood, Spec


class PeriodMoveNeighborhood(BaseNeighborhood):
    kind = NeighborhoodKind.PERIOD_MOVE

    def candidates(self, ctx: SearchContext, state: SearchState) -> List[Spec]:
        specs = []
        for a, vector in enumerate(state.deposits):
            for t, amount in enumerate(vector):
                if amount <= 0:
                    continue
                for t2 in (t - 1, t + 1):
                    if 0 <= t2 < ctx.periods and vector[t2] == 0:
                        specs.append((a, t, t2))
        return specs

    def build(self, ctx: SearchContext, state: SearchState, spec: Spec) -> Optional[Move]:
        a, t, t2 = spec
        vector = list(state.deposits[a])
        vector[t2], vector[t] = vector[t], 0
        move = Move(deposits={a: vector}, split_k={a: None} if state.split_k[a] is not None else {})

        h = ctx.locate(state, move, a, t)
        if h is not None:
            move.routes[(h, t)] = [j for j in state.routes[h][t] if j != ctx.atm_node[a]]
        if ctx.locate(state, move, a, t2) is None:
            found = ctx.cheapest_insertion(state, a, t2, move)
            if found is None:
                return None
            move.routes[(found.vehicle, t2)] = found.nodes
        return move
