from abc import ABC, abstractmethod
from typing import Iterator, List, Optional, Tuple

from src.core.search import Move, SearchContext, SearchState
from src.models.solve import NeighborhoodKind

Spec = Tuple


class BaseNeighborhood(ABC):
    """
    Base class for all local-search neighborhoods.

    A neighborhood lists lightweight candidate specs for the current state and
    turns one spec into a Move on demand, so the search can shuffle and cut
    the list without building every move.
    """

    kind: NeighborhoodKind

    @abstractmethod
    def candidates(self, ctx: SearchContext, state: SearchState) -> List[Spec]:
        pass

    @abstractmethod
    def build(self, ctx: SearchContext, state: SearchState, spec: Spec) -> Optional[Move]:
        pass

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


def depot_route_groups(ctx: SearchContext) -> Iterator[Tuple[int, List[int]]]:
    """(period index, vehicles of one depot) for every period and depot with vehicles"""
    for t in range(ctx.periods):
        for vehicles in ctx.vehicles_of.values():
            if vehicles:
                yield t, vehicles
