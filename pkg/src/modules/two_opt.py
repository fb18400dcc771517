"""
2-opt within a route (segment reversal) and 2-opt* between two routes of the
same depot (tail exchange).
"""

from typing import List, Optional

from src.core.search import Move, SearchContext, SearchState
from src.models.solve import NeighborhoodKind
from src.modules.base import BaseNeighborhood, Spec, depot_route_groups

INTRA = "intra"
INTER = "inter"


class TwoOptNeighborhood(BaseNeighborhood):
    kind = NeighborhoodKind.TWO_OPT

    def candidates(self, ctx: SearchContext, state: SearchState) -> List[Spec]:
        specs = []
        for t, vehicles in depot_route_groups(ctx):
            for h in vehicles:
                n = len(state.routes[h][t])
                specs.extend((INTRA, t, h, i, j) for i in range(n - 1) for j in range(i + 1, n))
            for x, h1 in enumerate(vehicles):
                for h2 in vehicles[x + 1:]:
                    n1, n2 = len(state.routes[h1][t]), len(state.routes[h2][t])
                    if n1 + n2 == 0:
                        continue
                    specs.extend(
                        (INTER, t, h1, i, h2, j)
                        for i in range(n1 + 1)
                        for j in range(n2 + 1)
                        if not (i == n1 and j == n2)
                    )
        return specs

    def build(self, ctx: SearchContext, state: SearchState, spec: Spec) -> Optional[Move]:
        if spec[0] == INTRA:
            _, t, h, i, j = spec
            route = state.routes[h][t]
            return Move(routes={(h, t): route[:i] + route[i:j + 1][::-1] + route[j + 1:]})

        _, t, h1, i, h2, j = spec
        first, second = state.routes[h1][t], state.routes[h2][t]
        new_first = first[:i] + second[j:]
        new_second = second[:j] + first[i:]
        if new_first == first:
            return None
        return Move(routes={(h1, t): new_first, (h2, t): new_second})
