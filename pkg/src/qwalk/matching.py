"""Minimum-cost node assignment between two graphs.

The assignment step turns the node-pair divergence table into a
correspondence: divergence is maximal for matching structure, so the
default cost of pairing u with v is 1 minus their divergence, and the
Hungarian algorithm extracts the cheapest set of min(n1, n2) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import INFINITE, CostTransform, RunConfig
from .divergence import node_pair_qjsd
from .errors import DomainError
from .graph import Graph

TOTAL_TOL = 1e-9


@dataclass(frozen=True)
class Assignment:
    """Partial injection between left and right nodes with its total cost."""

    pairs: tuple[tuple[int, int], ...]
    total_cost: float
    unmatched_left: tuple[int, ...]
    unmatched_right: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "pairs": [[int(u), int(v)] for u, v in self.pairs],
            "total_cost": float(self.total_cost),
            "unmatched_left": [int(u) for u in self.unmatched_left],
            "unmatched_right": [int(v) for v in self.unmatched_right],
        }


def _solve_square(cost: np.ndarray) -> np.ndarray:
    """Shortest-augmenting-path assignment on a square cost matrix.

    Classic O(n^3) scheme with row/column potentials. Rows are inserted
    in index order and column scans take the first minimum, so ties
    resolve deterministically toward low indices.
    """
    s = cost.shape[0]
    u = np.zeros(s + 1)                      # row potentials, 1-based
    v = np.zeros(s + 1)                      # column potentials, 1-based
    match = np.zeros(s + 1, dtype=int)       # match[j] = row on column j, 0 = free
    for row in range(1, s + 1):
        match[0] = row
        j0 = 0
        minv = np.full(s + 1, np.inf)
        way = np.zeros(s + 1, dtype=int)
        used = np.zeros(s + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = match[j0]
            free = np.nonzero(~used[1:])[0] + 1
            reduced = cost[i0 - 1, free - 1] - u[i0] - v[free]
            better = reduced < minv[free]
            minv[free[better]] = reduced[better]
            way[free[better]] = j0
            pick = int(np.argmin(minv[free]))          # first minimum wins
            delta = minv[free][pick]
            j1 = int(free[pick])
            used_idx = np.nonzero(used)[0]
            u[match[used_idx]] += delta
            v[used_idx] -= delta
            minv[free] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:                                      # augment along the path
            j1 = int(way[j0])
            match[j0] = match[j1]
            j0 = j1
    row_to_col = np.empty(s, dtype=int)
    row_to_col[match[1:] - 1] = np.arange(s)
    return row_to_col


def hungarian(cost) -> Assignment:
    """Minimum-total-cost assignment of min(n, m) pairs on an n-by-m matrix.

    Rectangular inputs are padded internally to square with a constant
    dummy cost (the largest real entry), which cannot disturb which real
    pairs are optimal; dummy pairs surface as unmatched nodes. The total
    is recomputed from the original matrix over the returned pairs.
    """
    c = np.asarray(cost, dtype=float)
    if c.ndim != 2:
        raise DomainError(f"cost matrix must be 2-D, got shape {c.shape}")
    n, m = c.shape
    if n == 0 or m == 0:
        return Assignment(pairs=(), total_cost=0.0,
                          unmatched_left=tuple(range(n)),
                          unmatched_right=tuple(range(m)))
    if not np.all(np.isfinite(c)):
        raise DomainError("cost matrix entries must be finite")

    s = max(n, m)
    padded = np.full((s, s), float(c.max()))
    padded[:n, :m] = c
    row_to_col = _solve_square(padded)

    pairs = [(i, int(row_to_col[i])) for i in range(n) if row_to_col[i] < m]
    matched_right = {j for _, j in pairs}
    unmatched_left = tuple(i for i in range(n) if row_to_col[i] >= m)
    unmatched_right = tuple(j for j in range(m) if j not in matched_right)
    total = float(sum(c[i, j] for i, j in pairs))
    return Assignment(pairs=tuple(pairs), total_cost=total,
                      unmatched_left=unmatched_left,
                      unmatched_right=unmatched_right)


def optimal_node_matching(g1: Graph, g2: Graph, horizon: float = INFINITE,
                          config: RunConfig | None = None,
                          workers: int | None = None) -> Assignment:
    """Best node correspondence between two graphs.

    Builds the node-pair divergence table and assigns with cost
    1 - divergence (higher divergence means a better-matching pair), or
    with the raw divergence when the config asks for it.
    """
    if config is None:
        config = RunConfig()
    table = node_pair_qjsd(g1, g2, horizon, config, workers=workers)
    if config.cost_transform is CostTransform.RAW_QJSD:
        cost = table
    else:
        cost = 1.0 - table
    return hungarian(cost)
