"""Affinity matrices and one-to-one assignment.

The assignment problem is solved as a binary integer program

    maximise  sum_ij S[i, j] * u[i, j]
    s.t.      sum_i u[i, j] <= 1,  sum_j u[i, j] <= 1,  u[i, j] in {0, 1}

by depth-first branch and bound.  Among optimal solutions the one whose sorted
pair list is lexicographically smallest is returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .appearance import Histogram, bhattacharyya
from .core import AgentLabel, BoundingBox, iou


@dataclass(frozen=True)
class AffinityWeights:
    alpha1: float = 0.5
    alpha2: float = 0.5

    def __post_init__(self):
        if self.alpha1 < 0 or self.alpha2 < 0:
            raise ValueError("affinity weights must be non-negative")
        if abs(self.alpha1 + self.alpha2 - 1.0) > 1e-9:
            raise ValueError(f"affinity weights must sum to 1, got {self.alpha1} + {self.alpha2}")


@dataclass
class AffinityMatrix:
    values: np.ndarray
    row_labels: list = field(default_factory=list)
    col_ids: list = field(default_factory=list)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            values = values.reshape(len(self.row_labels), len(self.col_ids))
        self.values = values
        if not self.row_labels:
            self.row_labels = list(range(self.values.shape[0]))
        if not self.col_ids:
            self.col_ids = list(range(self.values.shape[1]))

    @property
    def shape(self):
        return self.values.shape


@dataclass(frozen=True)
class Assignment:
    pairs: tuple
    unmatched_rows: tuple
    unmatched_cols: tuple

    def objective(self, values) -> float:
        values = np.asarray(getattr(values, "values", values))
        total = 0.0
        for i, j in self.pairs:
            total += float(values[i, j])
        return total

    def as_dict(self) -> dict:
        """Map column index to row index."""
        return {j: i for i, j in self.pairs}


def _make_assignment(pairs, m, n) -> Assignment:
    pairs = tuple(sorted(pairs))
    rows = {i for i, _ in pairs}
    cols = {j for _, j in pairs}
    return Assignment(
        pairs,
        tuple(i for i in range(m) if i not in rows),
        tuple(j for j in range(n) if j not in cols),
    )


def build_affinity(
    predicted: Sequence[tuple[AgentLabel, BoundingBox, Histogram]],
    detections: Sequence[tuple[BoundingBox, Histogram]],
    weights: AffinityWeights = AffinityWeights(),
    gate: float = 0.1,
) -> AffinityMatrix:
    """Weighted sum of box overlap and histogram similarity, gated at ``gate``.

    An unusable histogram on either side contributes a similarity of zero.
    """
    m, n = len(predicted), len(detections)
    values = np.zeros((m, n))
    for i, (_, pbox, phist) in enumerate(predicted):
        for j, (dbox, dhist) in enumerate(detections):
            o = iou(pbox, dbox)
            bc = bhattacharyya(phist, dhist) if phist is not None and dhist is not None else 0.0
            values[i, j] = weights.alpha1 * o + weights.alpha2 * bc
    values[values < gate] = 0.0
    return AffinityMatrix(values.reshape(m, n), [p[0] for p in predicted], list(range(n)))


def _values(S) -> np.ndarray:
    return np.asarray(getattr(S, "values", S), dtype=float)


def solve_bip(S) -> Assignment:
    """Exact solution of the assignment BIP; zero-affinity pairs are never chosen."""
    values = _values(S)
    if values.ndim != 2:
        raise ValueError("affinity matrix must be two-dimensional")
    m, n = values.shape
    if m == 0 or n == 0:
        return _make_assignment((), m, n)

    rows = values.tolist()
    options = [[j for j in range(n) if rows[i][j] > 0] for i in range(m)]
    # suffix_best[i]: sum over rows >= i of their best positive entry
    suffix_best = [0.0] * (m + 1)
    for i in range(m - 1, -1, -1):
        best = max((rows[i][j] for j in options[i]), default=0.0)
        suffix_best[i] = best + suffix_best[i + 1]

    best_pairs, best_value = _greedy(rows, options, m, n)
    used = [False] * n
    chosen = []

    def dfs(i, value):
        nonlocal best_pairs, best_value
        if i == m:
            if value > best_value or (value == best_value and chosen < best_pairs):
                best_value = value
                best_pairs = list(chosen)
            return
        if value + suffix_best[i] < best_value - 1e-12:
            return
        for j in options[i]:
            if not used[j]:
                used[j] = True
                chosen.append((i, j))
                dfs(i + 1, value + rows[i][j])
                chosen.pop()
                used[j] = False
        dfs(i + 1, value)

    dfs(0, 0.0)
    return _make_assignment(best_pairs, m, n)


def _greedy(rows, options, m, n):
    """Greedy incumbent: repeatedly take the largest remaining entry."""
    entries = sorted(
        ((rows[i][j], i, j) for i in range(m) for j in options[i]),
        key=lambda t: (-t[0], t[1], t[2]),
    )
    used_r, used_c, pairs = set(), set(), []
    for _, i, j in entries:
        if i not in used_r and j not in used_c:
            used_r.add(i)
            used_c.add(j)
            pairs.append((i, j))
    pairs.sort()
    value = 0.0
    for i, j in pairs:
        value += rows[i][j]
    return pairs, value


def solve_hungarian(S) -> Assignment:
    """Same contract as :func:`solve_bip`, via a square-padded linear assignment."""
    values = _values(S)
    m, n = values.shape
    if m == 0 or n == 0:
        return _make_assignment((), m, n)
    k = max(m, n)
    padded = np.zeros((k, k))
    padded[:m, :n] = values
    r, c = linear_sum_assignment(padded, maximize=True)
    pairs = [(int(i), int(j)) for i, j in zip(r, c) if i < m and j < n and values[i, j] > 0]
    return _make_assignment(pairs, m, n)


SOLVERS = {"bip": solve_bip, "hungarian": solve_hungarian}
