from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field


class ConstraintFamily(str, Enum):
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"
    C6 = "C6"
    C7 = "C7"
    C8 = "C8"
    C9 = "C9"
    C10 = "C10"
    C11 = "C11"
    C12 = "C12"
    C13 = "C13"
    C14 = "C14"
    C15 = "C15"
    C16 = "C16"
    C17 = "C17"
    C18 = "C18"

    @property
    def description(self) -> str:
        return _TITLES[self]


_TITLES = {
    ConstraintFamily.C3: "one vehicle per ATM per period",
    ConstraintFamily.C4: "vehicle capacity per period",
    ConstraintFamily.C5: "depot flow / vehicle use",
    ConstraintFamily.C6: "service after arrival",
    ConstraintFamily.C7: "ATM service window",
    ConstraintFamily.C8: "no subtours",
    ConstraintFamily.C9: "route duration",
    ConstraintFamily.C10: "route implies depot assignment",
    ConstraintFamily.C11: "at most one depot per ATM per period",
    ConstraintFamily.C12: "horizon distance per vehicle",
    ConstraintFamily.C13: "timing consistency",
    ConstraintFamily.C14: "withdrawals covered by inventory",
    ConstraintFamily.C15: "departure after depot opening",
    ConstraintFamily.C16: "return before depot closing",
    ConstraintFamily.C17: "binary vehicle-use flags",
    ConstraintFamily.C18: "nonnegative deposits",
}


class Location(BaseModel):
    kind: str = Field(..., pattern="^(atm|vehicle|depot)$")
    id: str
    period: Optional[int] = None

    def __str__(self) -> str:
        suffix = f"@t{self.period}" if self.period is not None else ""
        return f"{self.kind}:{self.id}{suffix}"


class Violation(BaseModel):
    """One constraint breach; magnitude is in the constraint's natural units"""
    constraint: ConstraintFamily
    location: Location
    magnitude: float = Field(gt=0)
    message: str

    def render(self) -> str:
        magnitude = int(self.magnitude) if float(self.magnitude).is_integer() else round(self.magnitude, 3)
        return f"{self.constraint.value} {self.location} excess={magnitude} — {self.message}"


def render_violations(violations: List[Violation]) -> str:
    return "\n".join(v.render() for v in violations)
