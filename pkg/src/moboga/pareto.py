"""Pareto domination, fast non-dominated sorting, crowding, front extraction.

Everything here minimizes. Callers with larger-is-better quantities negate at
their own boundary. Domination is strict-component: equal vectors never
dominate each other, so duplicates all stay on the front.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


def dominates(v, w) -> bool:
    """True iff v Pareto-dominates w: v <= w everywhere and < somewhere."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != w.shape or v.ndim != 1:
        raise ValueError(f"score vectors must share one length, got {v.shape} vs {w.shape}")
    if not (np.all(np.isfinite(v)) and np.all(np.isfinite(w))):
        raise ValueError("score vectors must be finite")
    return bool(np.all(v <= w) and np.any(v < w))


@dataclass
class FrontPartition:
    fronts: list[list[int]]   # F_1, F_2, ... as index lists
    rank: np.ndarray          # per-member front number, 1-based
    crowding: np.ndarray      # per-member crowding distance (inf at boundaries)


def _as_score_matrix(pop) -> np.ndarray:
    scores = np.asarray(pop, dtype=float)
    if scores.ndim != 2 or scores.shape[0] < 1:
        raise ValueError("population must be a non-empty list of equal-length score vectors")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    return scores


def _domination_matrix(scores: np.ndarray) -> np.ndarray:
    """dom[i, j] is True iff member i dominates member j."""
    a = scores[:, None, :]
    b = scores[None, :, :]
    return np.all(a <= b, axis=2) & np.any(a < b, axis=2)


def fast_nondominated_sort(pop) -> FrontPartition:
    """Peel fronts using domination counts and dominated sets.

    For each member p: S_p collects the members p dominates and n_p counts the
    members dominating p; n_p == 0 puts p on the first front, and removing a
    front decrements the counts of everything it dominates to reveal the next.
    """
    scores = _as_score_matrix(pop)
    n = scores.shape[0]
    dom = _domination_matrix(scores)
    dominated_by_p = [np.nonzero(dom[p])[0] for p in range(n)]
    counts = dom.sum(axis=0).astype(int)

    rank = np.zeros(n, dtype=int)
    fronts: list[list[int]] = []
    current = [p for p in range(n) if counts[p] == 0]
    level = 1
    while current:
        for p in current:
            rank[p] = level
        fronts.append(current)
        nxt: list[int] = []
        for p in current:
            for q in dominated_by_p[p]:
                counts[q] -= 1
                if counts[q] == 0:
                    nxt.append(int(q))
        current = sorted(nxt)
        level += 1

    crowding = np.zeros(n)
    for front in fronts:
        crowding[front] = crowding_distance(scores[front])
    return FrontPartition(fronts, rank, crowding)


def crowding_distance(front_scores) -> np.ndarray:
    """NSGA-II crowding: per objective, boundary members get inf and interior
    members accumulate the normalized gap between their neighbors."""
    scores = _as_score_matrix(front_scores)
    m, k = scores.shape
    if m <= 2:
        return np.full(m, np.inf)
    dist = np.zeros(m)
    for j in range(k):
        vals = scores[:, j]
        order = np.argsort(vals, kind="stable")
        span = vals[order[-1]] - vals[order[0]]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (vals[order[2:]] - vals[order[:-2]]) / span
    return dist


def pareto_front(pop) -> list[int]:
    """Indices of the members dominated by no other member (F_1)."""
    scores = _as_score_matrix(pop)
    dom = _domination_matrix(scores)
    return [i for i in range(scores.shape[0]) if not dom[:, i].any()]


def generational_distance(front, reference) -> float:
    """Mean Euclidean distance from each front point to its nearest reference point."""
    front = _as_score_matrix(front)
    reference = _as_score_matrix(reference)
    return float(cdist(front, reference).min(axis=1).mean())


def objective_diagonal(front) -> float:
    """Length of the bounding-box diagonal of a point set in objective space."""
    front = _as_score_matrix(front)
    return float(np.linalg.norm(front.max(axis=0) - front.min(axis=0)))
