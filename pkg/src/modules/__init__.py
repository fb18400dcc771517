"""Local-search neighborhoods, one module per move type"""

from typing import Dict, Iterable, List

from src.models.solve import NeighborhoodKind
from src.modules.base import BaseNeighborhood
from src.modules.period_move import PeriodMoveNeighborhood
from src.modules.relocate import RelocateNeighborhood
from src.modules.split_k_change import SplitKChangeNeighborhood
from src.modules.swap import SwapNeighborhood
from src.modules.two_opt import TwoOptNeighborhood

REGISTRY: Dict[NeighborhoodKind, BaseNeighborhood] = {
    n.kind: n
    for n in (
        RelocateNeighborhood(),
        SwapNeighborhood(),
        TwoOptNeighborhood(),
        PeriodMoveNeighborhood(),
        SplitKChangeNeighborhood(),
    )
}


def neighborhoods_for(kinds: Iterable[NeighborhoodKind]) -> List[BaseNeighborhood]:
    """Neighborhood objects in the fixed enumeration order, duplicates removed"""
    wanted = set(kinds)
    return [REGISTRY[kind] for kind in NeighborhoodKind if kind in wanted]
