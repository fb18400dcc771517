"""Swap: exchange two visits of the same period and depot"""

from typing import List, Optional

from src.core.search import Move, SearchContext, SearchState
from src.models.solve import NeighborhoodKind
from src.modules.base import BaseNeighborhood, Spec, depot_route_groups


class SwapNeighborhood(BaseNeighborhood):
    kind = NeighborhoodKind.SWAP

    def candidates(self, ctx: SearchContext, state: SearchState) -> List[Spec]:
        specs = []
        for t, vehicles in depot_route_groups(ctx):
            visits = [(h, i) for h in vehicles for i in range(len(state.routes[h][t]))]
            for x, (h1, i) in enumerate(visits):
                specs.extend((t, h1, i, h2, j) for h2, j in visits[x + 1:])
        return specs

    def build(self, ctx: SearchContext, state: SearchState, spec: Spec) -> Optional[Move]:
        t, h1, i, h2, j = spec
        if h1 == h2:
            route = list(state.routes[h1][t])
            route[i], route[j] = route[j], route[i]
            return Move(routes={(h1, t): route})
        first, second = list(state.routes[h1][t]), list(state.routes[h2][t])
        first[i], second[j] = second[j], first[i]
        return Move(routes={(h1, t): first, (h2, t): second})
