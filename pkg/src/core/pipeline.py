"""
End-to-end runs: split, construct, improve; and the split versus no-split
comparison.
"""

import logging
from typing import Dict, Optional, Tuple

from src.core.solver import solve_heuristic
from src.core.splitting import build_split_schedule
from src.models.instance import Instance
from src.models.report import ComparisonReport, PolicyOutcome
from src.models.solve import SolveConfig, SolveResult
from src.models.split import SplitMode, SplitPolicy, SplitSchedule

logger = logging.getLogger(__name__)


def solve_instance(inst: Instance, policy: SplitPolicy, cfg: SolveConfig) -> Tuple[SplitSchedule, SolveResult]:
    """Full pipeline for one policy: split schedule, greedy construction, local search"""
    schedule = build_split_schedule(inst, policy)
    result = solve_heuristic(inst, schedule, cfg)
    return schedule, result


def outcome_of(result: SolveResult) -> PolicyOutcome:
    cost = result.cost
    return PolicyOutcome(
        status=result.status.value,
        trips=cost.trips,
        total_km=round(cost.total_km, 3),
        transport_cost=cost.transport,
        financial_cost=cost.financial,
        total_cost=cost.transport + cost.financial,
    )


def improvement_percent(no_split_total: int, split_total: int) -> float:
    """100 * (T_no_split - T_split) / T_no_split; 0 when both totals are 0"""
    if no_split_total == 0:
        return 0.0
    return 100.0 * (no_split_total - split_total) / no_split_total


def compare_policies(
    inst: Instance,
    cfg: SolveConfig,
    split_policy: Optional[SplitPolicy] = None,
) -> Tuple[ComparisonReport, Dict[SplitMode, SolveResult]]:
    """
    Run the pipeline under the no-split and split policies with the same seed
    and budget.

    A policy without a feasible plan is named in report.incomplete; its
    column is still filled with the best plan found.

    Example Usage:
        report, results = compare_policies(inst, SolveConfig(seed=3))
        print(report.improvement_percent)
    """
    split_policy = split_policy or SplitPolicy()
    policies = {
        SplitMode.NO_SPLIT: split_policy.model_copy(update={"mode": SplitMode.NO_SPLIT}),
        SplitMode.SPLIT: split_policy.model_copy(update={"mode": SplitMode.SPLIT}),
    }
    results: Dict[SplitMode, SolveResult] = {}
    for mode, policy in policies.items():
        logger.info(f"Solving {inst.name} under the {mode.value} policy")
        _, results[mode] = solve_instance(inst, policy, cfg)

    no_split, split = outcome_of(results[SplitMode.NO_SPLIT]), outcome_of(results[SplitMode.SPLIT])
    failed = [mode.value for mode, result in results.items() if not result.solved]
    report = ComparisonReport(
        instance=inst.name,
        seed=cfg.seed,
        no_split=no_split,
        split=split,
        improvement_percent=None if failed else round(improvement_percent(no_split.total_cost, split.total_cost), 4),
        incomplete=",".join(failed) or None,
    )
    if failed:
        logger.warning(f"Comparison incomplete: no feasible plan for {report.incomplete}")
    return report, results
