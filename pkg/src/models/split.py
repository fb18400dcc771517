"""
Models for order splitting: bounds on single deposits and per-ATM schedules.
"""

from enum import Enum
from typing import Dict, List

from pydantic import BaseModel, Field, model_validator

DEFAULT_LOWER = 1_000_000_000
DEFAULT_UPPER = 1_400_000_000


class SplitMode(str, Enum):
    NO_SPLIT = "no_split"
    SPLIT = "split"


class SplitPolicy(BaseModel):
    lower_bound: int = Field(DEFAULT_LOWER, gt=0, description="L, smallest single deposit")
    upper_bound: int = Field(DEFAULT_UPPER, gt=0, description="U, largest single deposit")
    mode: SplitMode = SplitMode.SPLIT

    @model_validator(mode="after")
    def check_bounds(self):
        if self.lower_bound > self.upper_bound:
            raise ValueError("lower_bound must not exceed upper_bound")
        return self

    @classmethod
    def no_split(cls) -> "SplitPolicy":
        return cls(mode=SplitMode.NO_SPLIT)


class SplitOption(BaseModel):
    """One way to cut a total into k deposits"""
    k: int
    amounts: List[int]


class ScheduledDeposits(BaseModel):
    deposits: List[int]
    feasible: bool


class ScheduledOption(BaseModel):
    k: int
    amounts: List[int]
    deposits: List[int]
    financial_proxy: int
    feasible: bool


class AtmSplit(BaseModel):
    atm: str
    options: List[ScheduledOption]
    chosen_k: int

    def chosen(self) -> ScheduledOption:
        for option in self.options:
            if option.k == self.chosen_k:
                return option
        raise KeyError(f"ATM {self.atm} has no option k={self.chosen_k}")


class SplitSchedule(BaseModel):
    """
    Per-ATM decomposition of total demand into per-period deposits.

    Every option is kept so the solver can switch k during search; ATMs with
    zero total demand are absent and receive no deposits.
    """
    periods: int
    policy: SplitPolicy
    atms: Dict[str, AtmSplit] = Field(default_factory=dict)
    warnings: List[str] = Field(default_factory=list)

    @property
    def deposits(self) -> Dict[str, List[int]]:
        return {atm_id: split.chosen().deposits for atm_id, split in self.atms.items()}

    def deposits_for(self, atm_id: str) -> List[int]:
        split = self.atms.get(atm_id)
        return list(split.chosen().deposits) if split else [0] * self.periods

    def with_choice(self, atm_id: str, k: int) -> "SplitSchedule":
        updated = self.model_copy(deep=True)
        split = updated.atms[atm_id]
        if not any(o.k == k for o in split.options):
            raise KeyError(f"ATM {atm_id} has no option k={k}")
        split.chosen_k = k
        return updated
