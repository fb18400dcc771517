"""
Search configuration and result models.
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from src.models.costs import CostBreakdown
from src.models.plan import Plan
from src.models.violation import Violation


class NeighborhoodKind(str, Enum):
    RELOCATE = "relocate"
    SWAP = "swap"
    TWO_OPT = "two_opt"
    PERIOD_MOVE = "period_move"
    SPLIT_K_CHANGE = "split_k_change"


ALL_NEIGHBORHOODS = tuple(NeighborhoodKind)
ROUTING_NEIGHBORHOODS = (NeighborhoodKind.RELOCATE, NeighborhoodKind.SWAP, NeighborhoodKind.TWO_OPT)


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    TIMEOUT = "timeout"


def check_weights(weights: Tuple[float, float]) -> Tuple[float, float]:
    w1, w2 = weights
    if w1 < 0 or w2 < 0:
        raise ValueError("weights must be nonnegative")
    if w1 == 0 and w2 == 0:
        raise ValueError("weights must not both be zero")
    return weights


class SolveConfig(BaseModel):
    """
    Local search settings.

    The run stops at max_iterations candidate evaluations or when a local
    optimum is reached after max_restarts restarts. time_limit adds a
    wall-clock cap, off by default. A run stopped by the clock is not
    reproducible.
    """
    weights: Tuple[float, float] = (1.0, 1.0)
    time_limit: Optional[float] = Field(None, gt=0, description="Wall-clock cap in seconds; None disables it")
    seed: int = Field(0, ge=0, lt=2 ** 64)
    neighborhoods: List[NeighborhoodKind] = Field(default_factory=lambda: list(ALL_NEIGHBORHOODS))
    penalty: Optional[float] = Field(None, gt=0, description="Money per unit of violation magnitude")
    max_iterations: int = Field(150_000, gt=0)
    max_restarts: int = Field(12, ge=0)
    perturbation_strength: int = Field(3, ge=1)
    workers: int = Field(1, ge=1)

    @field_validator("weights")
    @classmethod
    def validate_weights(cls, v):
        return check_weights(v)


class SolveResult(BaseModel):
    plan: Plan
    cost: CostBreakdown
    status: SolveStatus
    iterations: int = 0
    wall_time: float = 0.0
    violations: List[Violation] = Field(default_factory=list)
    trace: List[float] = Field(default_factory=list, description="Best feasible weighted cost after each improvement")
    chosen_k: Dict[str, int] = Field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return self.status in (SolveStatus.OPTIMAL, SolveStatus.FEASIBLE)


class ExactLimits(BaseModel):
    max_atms: int = 8
    max_vehicles: int = 2
    max_periods: int = 2
    time_limit: float = Field(30.0, gt=0)
    max_nodes: int = Field(2_000_000, gt=0, description="Partial routes explored before the search gives up")
