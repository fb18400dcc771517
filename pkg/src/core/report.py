"""
Rendering of the policy comparison: a text table for people and
JSON for scripts.
"""

from typing import List, Optional, Sequence, Tuple

from pydantic import ValidationError

from src.models.report import ComparisonReport, ParetoFront, ParetoPoint, PolicyOutcome
from src.models.solve import SolveResult

TABLE = "table"
STRUCTURED = "structured"
FORMATS = (TABLE, STRUCTURED)

ROWS = (
    "Status",
    "Total number of trips",
    "Total distance (km)",
    "Transportation cost (VND)",
    "Financial cost (VND)",
    "Total cost (VND)",
    "Cost improvement (%)",
)


def _cells(outcome: Optional[PolicyOutcome], failed: bool) -> List[str]:
    if outcome is None:
        return ["infeasible"] * 6 if failed else ["-"] * 6
    values = [
        outcome.status,
        f"{outcome.trips:,}",
        f"{outcome.total_km:,.1f}",
        f"{outcome.transport_cost:,}",
        f"{outcome.financial_cost:,}",
        f"{outcome.total_cost:,}",
    ]
    if failed:
        values[0] = "infeasible"
    return values


def render_table(report: ComparisonReport) -> str:
    failed = set((report.incomplete or "").split(","))
    headers = [
        "No split" + (" (infeasible)" if "no_split" in failed else ""),
        "Split" + (" (infeasible)" if "split" in failed else ""),
    ]
    columns = [
        _cells(report.no_split, "no_split" in failed) + [""],
        _cells(report.split, "split" in failed)
        + ["n/a" if report.improvement_percent is None else f"{report.improvement_percent:.1f}"],
    ]

    label_width = max(len(r) for r in ROWS)
    widths = [max(len(headers[c]), *(len(v) for v in columns[c])) for c in range(2)]
    lines = [f"Instance {report.instance} (seed {report.seed})"]
    lines.append(" | ".join([" " * label_width] + [h.rjust(w) for h, w in zip(headers, widths)]))
    lines.append("-+-".join(["-" * label_width] + ["-" * w for w in widths]))
    for k, label in enumerate(ROWS):
        lines.append(" | ".join([label.ljust(label_width)] + [columns[c][k].rjust(widths[c]) for c in range(2)]))
    return "\n".join(lines) + "\n"


def render_report(report: ComparisonReport, fmt: str = TABLE) -> str:
    """
    Args:
        report: comparison to render; an incomplete report is rendered with
            the failing policy's column marked infeasible
        fmt: "table" (thousands separators) or "structured" (JSON, raw integers)
    """
    if fmt == TABLE:
        return render_table(report)
    if fmt == STRUCTURED:
        return report.model_dump_json(indent=2) + "\n"
    raise ValueError(f"Unknown report format {fmt!r}; expected one of {FORMATS}")


def parse_report(text: str) -> ComparisonReport:
    """
    Raises:
        ValueError: the text is not a structured report
    """
    try:
        return ComparisonReport.model_validate_json(text)
    except ValidationError as exc:
        raise ValueError(f"Not a structured comparison report: {exc}") from exc


def render_cost_breakdown(result: SolveResult) -> str:
    cost = result.cost
    w1, w2 = cost.weights
    rows = [
        ("Status", result.status.value),
        ("Total number of trips", f"{cost.trips:,}"),
        ("Total distance (km)", f"{cost.total_km:,.1f}"),
        ("Transportation cost (VND)", f"{cost.transport:,}"),
        ("Financial cost (VND)", f"{cost.financial:,}"),
        ("Total cost (VND)", f"{cost.transport + cost.financial:,}"),
        (f"Weighted cost ({w1:g}, {w2:g})", f"{cost.aggregate:,.0f}"),
    ]
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label.ljust(width)}  {value}" for label, value in rows) + "\n"


def pareto_front(instance: str, seed: int, policy: str, front: Sequence[Tuple[Tuple[float, float], SolveResult]]) -> ParetoFront:
    return ParetoFront(
        instance=instance,
        seed=seed,
        policy=policy,
        points=[
            ParetoPoint(
                weights=weights,
                status=result.status.value,
                transport_cost=result.cost.transport,
                financial_cost=result.cost.financial,
                trips=result.cost.trips,
                total_km=round(result.cost.total_km, 3),
            )
            for weights, result in front
        ],
    )


def render_pareto(front: ParetoFront) -> str:
    lines = [f"{'w1':>6} {'w2':>6} {'Transportation (VND)':>22} {'Financial (VND)':>18} {'Trips':>6}"]
    for point in front.points:
        w1, w2 = point.weights
        lines.append(f"{w1:>6.2f} {w2:>6.2f} {point.transport_cost:>22,} {point.financial_cost:>18,} {point.trips:>6}")
    return "\n".join(lines) + "\n"
