from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from src.models.instance import SCHEMA_VERSION


class PolicyOutcome(BaseModel):
    status: str
    trips: int
    total_km: float
    transport_cost: int
    financial_cost: int
    total_cost: int


class ComparisonReport(BaseModel):
    """Side-by-side comparison of the no-split and split policies on one instance"""
    schema_version: int = SCHEMA_VERSION
    instance: str
    seed: int
    no_split: Optional[PolicyOutcome] = None
    split: Optional[PolicyOutcome] = None
    improvement_percent: Optional[float] = None
    incomplete: Optional[str] = Field(None, description="Name of the policy that found no feasible plan")

    @property
    def complete(self) -> bool:
        return self.incomplete is None and self.no_split is not None and self.split is not None


class ParetoPoint(BaseModel):
    weights: Tuple[float, float]
    status: str
    transport_cost: int
    financial_cost: int
    trips: int
    total_km: float


class ParetoFront(BaseModel):
    """Non-dominated (f1, f2) results of a weight sweep, sorted by transport cost"""
    schema_version: int = SCHEMA_VERSION
    instance: str
    seed: int
    policy: str
    points: List[ParetoPoint] = Field(default_factory=list)
