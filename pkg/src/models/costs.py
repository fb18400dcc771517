from typing import Dict, List, Tuple

from pydantic import BaseModel, Field


class InventoryTrajectory(BaseModel):
    """End-of-period cash balance B_jt of every ATM, t = 1..p"""
    balances: Dict[str, List[int]]

    def total(self) -> int:
        return sum(sum(row) for row in self.balances.values())

    def lowest(self, atm_id: str) -> Tuple[int, int]:
        """(period, balance) of the smallest balance of one ATM, earliest period on ties"""
        row = self.balances[atm_id]
        t = min(range(len(row)), key=lambda k: (row[k], k))
        return t + 1, row[t]


class CostBreakdown(BaseModel):
    """
    Objective values of a plan. Money is whole VND.

    aggregate is w1 * transport + w2 * financial for the weights stored alongside.
    """
    transport: int = Field(..., description="f1")
    financial: int = Field(..., description="f2")
    aggregate: float
    trips: int
    total_km: float
    weights: Tuple[float, float] = (1.0, 1.0)
