"""Minimum-weight perfect matching on a square matrix (Hungarian method).

``math.inf`` entries are forbidden pairs.  Arithmetic stays exact for
integer weights: potentials and slacks are plain Python numbers and
forbidden entries never enter a potential update.
"""

from __future__ import annotations

import math
from typing import Sequence

from .errors import NoPerfectMatchingError


def min_weight_perfect_matching(weights: Sequence[Sequence[float]]) -> tuple[list[int], float]:
    """Return ``(assignment, total)`` where ``assignment[row] = column``.

    Rows are inserted in index order and, among equal slacks, the lowest
    column wins, so ties resolve deterministically.  Raises
    :class:`NoPerfectMatchingError` when every perfect matching uses a
    forbidden entry.
    """
    k = len(weights)
    if any(len(row) != k for row in weights):
        raise ValueError("weight matrix must be square")
    if k == 0:
        return [], 0
    inf = math.inf
    # 1-based arrays with a virtual column 0
    u = [0] * (k + 1)
    v = [0] * (k + 1)
    owner = [0] * (k + 1)  # owner[col] = row matched to col
    way = [0] * (k + 1)
    for i in range(1, k + 1):
        owner[0] = i
        j0 = 0
        minv = [inf] * (k + 1)
        used = [False] * (k + 1)
        while True:
            used[j0] = True
            i0 = owner[j0]
            row = weights[i0 - 1]
            delta = inf
            j1 = -1
            for j in range(1, k + 1):
                if used[j]:
                    continue
                w = row[j - 1]
                if w != inf:
                    cur = w - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            if j1 < 0:
                raise NoPerfectMatchingError(f"row {i - 1} cannot be matched without a forbidden entry")
            for j in range(k + 1):
                if used[j]:
                    u[owner[j]] += delta
                    v[j] -= delta
                elif minv[j] != inf:
                    minv[j] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
    assignment = [0] * k
    for j in range(1, k + 1):
        assignment[owner[j] - 1] = j - 1
    total = sum(weights[r][c] for r, c in enumerate(assignment))
    return assignment, total
