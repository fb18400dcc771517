"""
Distance matrices from delimited text, for road distances measured outside
the library (for example exported from a map service).

Expected layout: a header row of node ids, one row per node in the same
order, optionally a leading column of row labels:

    node,01,02,1,2
    01,0,12.5,3.1,4.0
    ...
"""

import logging
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np
import pandas as pd

from src.models.instance import Instance
from src.models.scenario import ScenarioError

logger = logging.getLogger(__name__)


def _cell(row: str, col: str) -> str:
    return f"cell ({row}, {col})"


def ingest_distance_matrix(path: Union[str, Path], node_order: Sequence[str]) -> np.ndarray:
    """
    Read a V x V distance table and return it in node_order.

    Asymmetric tables are accepted. The diagonal must be zero.

    Raises:
        ScenarioError: unreadable file, wrong dimensions or ids, a negative,
            missing or non-finite entry (the offending cell is named)
    """
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ScenarioError(f"Cannot read distance matrix {path}: {exc}") from exc

    order: List[str] = list(node_order)
    n = len(order)
    df.columns = [str(c).strip() for c in df.columns]
    if df.shape[1] == n + 1 and df.columns[0] not in order:
        df = df.set_index(df.columns[0])
        df.index = [str(i).strip() for i in df.index]
    elif len(df) == len(df.columns):
        df.index = list(df.columns)

    if df.shape != (n, n):
        raise ScenarioError(f"Distance matrix must be {n}x{n} for this instance, got {df.shape[0]}x{df.shape[1]}")
    if set(df.columns) != set(order):
        unknown = sorted(set(df.columns) - set(order))
        missing = sorted(set(order) - set(df.columns))
        raise ScenarioError(f"Distance matrix header does not match the instance nodes (unknown {unknown}, missing {missing})")
    if set(df.index) != set(order):
        raise ScenarioError("Distance matrix row labels do not match the instance nodes")

    df = df.loc[order, order]
    values = df.apply(lambda col: pd.to_numeric(col.str.strip(), errors="coerce"))
    matrix = values.to_numpy(dtype=float)

    for i, j in zip(*np.nonzero(~np.isfinite(matrix))):
        raise ScenarioError(f"Distance {_cell(order[i], order[j])} is not a finite number: {df.iat[i, j]!r}")
    for i, j in zip(*np.nonzero(matrix < 0)):
        raise ScenarioError(f"Distance {_cell(order[i], order[j])} is negative: {matrix[i, j]}")
    for i in np.nonzero(np.diag(matrix) != 0)[0]:
        raise ScenarioError(f"Distance {_cell(order[i], order[i])} must be 0 on the diagonal, got {matrix[i, i]}")

    if not np.allclose(matrix, matrix.T):
        logger.info(f"Distance matrix {path} is asymmetric")
    return matrix


def with_distance_matrix(inst: Instance, matrix: np.ndarray) -> Instance:
    """Copy of the instance with its distances replaced"""
    if matrix.shape != (inst.n_nodes, inst.n_nodes):
        raise ScenarioError(f"Distance matrix must be {inst.n_nodes}x{inst.n_nodes}, got {matrix.shape}")
    return inst.model_copy(update={"distance_km": matrix.tolist()})
