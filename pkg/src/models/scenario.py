from enum import Enum
from typing import Tuple

from pydantic import BaseModel, Field, model_validator

from src.models.split import DEFAULT_LOWER, DEFAULT_UPPER


class ScenarioError(ValueError):
    """Raised when scenario inputs (parameters or distance files) are unusable"""
    pass


class WithdrawalProfile(str, Enum):
    UNIFORM = "uniform"
    FRONTLOADED = "frontloaded"
    WEEKEND_SPIKE = "weekend_spike"


class ScenarioParams(BaseModel):
    """
    Parameters of a simulated instance. Defaults follow the benchmark
    setting (28 ATMs, 2 depots, 2 vehicles per depot, 7 days, 5% per year).
    """
    n_atms: int = Field(28, ge=1)
    n_depots: int = Field(2, ge=1)
    vehicles_per_depot: int = Field(2, ge=1)
    periods: int = Field(7, ge=1)
    total_demand_range: Tuple[int, int] = (2_500_000_000, 3_500_000_000)
    per_deposit_range: Tuple[int, int] = (DEFAULT_LOWER, DEFAULT_UPPER)
    interest_rate: float = Field(0.05, ge=0)
    area_extent: float = Field(20.0, gt=0, description="Side of the square area, km")
    withdrawal_profile: WithdrawalProfile = WithdrawalProfile.UNIFORM
    seed: int = Field(0, ge=0)

    money_unit: int = Field(1_000_000, gt=0, description="Amounts are drawn in whole multiples of this")
    vehicle_capacity: int = Field(30_000_000_000, gt=0)
    cost_per_km: float = Field(20_000.0, ge=0)
    fixed_cost_per_trip: int = Field(1_000_000, ge=0)
    speed_kmh: float = Field(30.0, gt=0)
    service_time_min: int = Field(15, ge=0)
    depot_window: Tuple[int, int] = (420, 1080)
    atm_window: Tuple[int, int] = (480, 1020)
    max_route_time_min: int = Field(480, gt=0)
    max_total_distance_km: float = Field(2000.0, ge=0)

    @model_validator(mode="after")
    def check_ranges(self):
        for name in ("total_demand_range", "per_deposit_range", "depot_window", "atm_window"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is empty")
        lo, hi = self.total_demand_range
        if -(-lo // self.money_unit) * self.money_unit > hi:
            raise ValueError("total_demand_range holds no whole money_unit amount")
        return self
