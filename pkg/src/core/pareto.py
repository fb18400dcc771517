"""Weighted-sum sweep over (f1, f2) and non-dominated filtering"""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from src.core.pipeline import solve_instance
from src.models.instance import Instance
from src.models.solve import SolveConfig, SolveResult, check_weights
from src.models.split import SplitPolicy

logger = logging.getLogger(__name__)

Weights = Tuple[float, float]


def non_dominated(costs: np.ndarray) -> np.ndarray:
    """
    Boolean mask of rows no other row dominates (minimisation on every column).

    Equal rows do not dominate each other; deduplicate before calling if one
    copy is wanted.
    """
    keep = np.ones(costs.shape[0], dtype=bool)
    for i, c in enumerate(costs):
        dominated_by = np.all(costs <= c, axis=1) & np.any(costs < c, axis=1)
        keep[i] = not dominated_by.any()
    return keep


def default_weights(n: int) -> List[Weights]:
    """n pairs evenly spread from (1, 0) to (0, 1)"""
    return [(float(w), float(1 - w)) for w in np.linspace(1.0, 0.0, n)]


def pareto_sweep(
    inst: Instance,
    policy: SplitPolicy,
    weight_list: Sequence[Weights],
    cfg: SolveConfig,
) -> List[Tuple[Weights, SolveResult]]:
    """
    Solve once per weight pair and keep the mutually non-dominated results.

    Infeasible runs are dropped, duplicate (f1, f2) points keep the first
    weight pair that reached them, and the output is sorted by f1.

    Raises:
        ValueError: fewer than two weight pairs, or an invalid pair
    """
    if len(weight_list) < 2:
        raise ValueError("pareto_sweep needs at least two weight pairs")
    runs: List[Tuple[Weights, SolveResult]] = []
    for weights in weight_list:
        weights = check_weights(tuple(weights))
        _, result = solve_instance(inst, policy, cfg.model_copy(update={"weights": weights}))
        logger.info(f"Weights {weights}: {result.status.value}, f1={result.cost.transport:,} f2={result.cost.financial:,}")
        if result.solved:
            runs.append((weights, result))
    if not runs:
        return []

    seen = set()
    unique = []
    for weights, result in runs:
        point = (result.cost.transport, result.cost.financial)
        if point not in seen:
            seen.add(point)
            unique.append((weights, result))

    costs = np.array([[r.cost.transport, r.cost.financial] for _, r in unique], dtype=float)
    mask = non_dominated(costs)
    front = [item for item, keep in zip(unique, mask) if keep]
    return sorted(front, key=lambda item: (item[1].cost.transport, item[1].cost.financial))
