"""Relocate: move one visit to another position, in its own route or another route of the same depot"""

from typing import List, Optional

from src.core.search import Move, SearchContext, SearchState
from src.models.solve import NeighborhoodKind
from src.modules.base import BaseNeighborhood, Spec, depot_route_groups


class RelocateNeighborhood(BaseNeighborhood):
    kind = NeighborhoodKind.RELOCATE

    def candidates(self, ctx: SearchContext, state: SearchState) -> List[Spec]:
        specs = []
        for t, vehicles in depot_route_groups(ctx):
            for h in vehicles:
                source = state.routes[h][t]
                for i in range(len(source)):
                    for h2 in vehicles:
                        if h2 == h:
                            # Positions in the route once the visit is taken out
                            specs.extend((t, h, i, h, j) for j in range(len(source)) if j != i)
                        else:
                            specs.extend((t, h, i, h2, j) for j in range(len(state.routes[h2][t]) + 1))
        return specs

    def build(self, ctx: SearchContext, state: SearchState, spec: Spec) -> Optional[Move]:
        t, h, i, h2, j = spec
        source = list(state.routes[h][t])
        node = source.pop(i)
        if h2 == h:
            source.insert(j, node)
            return Move(routes={(h, t): source})
        target = list(state.routes[h2][t])
        target.insert(j, node)
        return Move(routes={(h, t): source, (h2, t): target})
