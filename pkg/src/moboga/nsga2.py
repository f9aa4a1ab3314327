"""Elitist NSGA-II over real genomes in the unit cube.

Each generation merges parents and offspring, sorts the combined population by
non-domination, fills the next parent set front by front, and truncates the
last partially fitting front by descending crowding distance (ties keep the
lower index, so equal seeds replay bit for bit). Variation is binary
tournament selection, simulated binary crossover, and polynomial mutation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .pareto import FrontPartition, fast_nondominated_sort
from .space import SearchSpace

ScoreFn = Callable[[np.ndarray], Sequence[float]]


@dataclass
class GaConfig:
    population_size: int = 100
    generations: int = 50
    crossover_prob: float = 0.9
    mutation_prob: float | None = None  # None -> 1 / encoded_dim
    sbx_eta: float = 15.0
    pm_eta: float = 20.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError("population_size must be an even integer >= 4")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        for name in ("crossover_prob", "mutation_prob"):
            p = getattr(self, name)
            if p is not None and not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.sbx_eta <= 0 or self.pm_eta <= 0:
            raise ValueError("distribution indices must be positive")


@dataclass
class Individual:
    genome: np.ndarray
    scores: np.ndarray
    rank: int = 0
    crowding: float = 0.0


def tournament_select(a: Individual, b: Individual, rng: np.random.Generator) -> Individual:
    """Lower rank wins; equal rank prefers larger crowding; full tie flips a coin."""
    if a.rank != b.rank:
        return a if a.rank < b.rank else b
    if a.crowding != b.crowding:
        return a if a.crowding > b.crowding else b
    return a if rng.random() < 0.5 else b


def sbx_crossover(
    p1: np.ndarray, p2: np.ndarray, cfg: GaConfig, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover, applied per pair with probability crossover_prob."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if p1.shape != p2.shape:
        raise ValueError("parent genomes must share a length")
    if rng.random() >= cfg.crossover_prob:
        return p1.copy(), p2.copy()
    u = rng.random(p1.shape)
    exponent = 1.0 / (cfg.sbx_eta + 1.0)
    beta = np.where(u <= 0.5, (2.0 * u) ** exponent, (0.5 / (1.0 - u)) ** exponent)
    c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2)
    c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)
    return np.clip(c1, 0.0, 1.0), np.clip(c2, 0.0, 1.0)


def polynomial_mutation(
    g: np.ndarray, cfg: GaConfig, rng: np.random.Generator
) -> np.ndarray:
    """Bounded polynomial mutation on [0, 1] genes, each hit with mutation_prob."""
    g = np.asarray(g, dtype=float)
    prob = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / len(g)
    mask = rng.random(g.shape) < prob
    u = rng.random(g.shape)
    if not mask.any():
        return g.copy()
    eta = cfg.pm_eta
    exponent = 1.0 / (eta + 1.0)
    d_lo = g            # distance to the lower bound, already normalized
    d_hi = 1.0 - g
    delta = np.where(
        u <= 0.5,
        (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d_lo) ** (eta + 1.0)) ** exponent - 1.0,
        1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d_hi) ** (eta + 1.0)) ** exponent,
    )
    out = np.where(mask, g + delta, g)
    return np.clip(out, 0.0, 1.0)


def _make_individual(genome: np.ndarray, score_fn: ScoreFn) -> Individual:
    scores = np.asarray(score_fn(genome), dtype=float).reshape(-1)
    if not np.all(np.isfinite(scores)):
        raise ValueError(f"score_fn returned non-finite scores {scores} for genome {genome}")
    return Individual(genome=np.asarray(genome, dtype=float), scores=scores)


def _apply_partition(pop: list[Individual], part: FrontPartition) -> None:
    for i, ind in enumerate(pop):
        ind.rank = int(part.rank[i])
        ind.crowding = float(part.crowding[i])


def _survival(merged: list[Individual], n: int) -> list[Individual]:
    part = fast_nondominated_sort([ind.scores for ind in merged])
    _apply_partition(merged, part)
    survivors: list[Individual] = []
    for front in part.fronts:
        if len(survivors) + len(front) <= n:
            survivors.extend(merged[i] for i in front)
        else:
            room = n - len(survivors)
            order = np.argsort([-merged[i].crowding for i in front], kind="stable")
            survivors.extend(merged[front[j]] for j in order[:room])
            break
    return survivors


def _variation(
    parents: list[Individual], cfg: GaConfig, rng: np.random.Generator, score_fn: ScoreFn
) -> list[Individual]:
    n = len(parents)
    offspring: list[Individual] = []
    while len(offspring) < n:
        chosen = []
        for _ in range(2):
            i, j = rng.integers(n), rng.integers(n)
            chosen.append(tournament_select(parents[int(i)], parents[int(j)], rng))
        g1, g2 = sbx_crossover(chosen[0].genome, chosen[1].genome, cfg, rng)
        for g in (g1, g2):
            if len(offspring) < n:
                offspring.append(_make_individual(polynomial_mutation(g, cfg, rng), score_fn))
    return offspring


def nsga2_run(
    score_fn: ScoreFn,
    cfg: GaConfig,
    space: SearchSpace,
    initial_genomes: Sequence[np.ndarray] | None = None,
) -> tuple[list[Individual], FrontPartition]:
    """Run the configured number of generations; returns the final parent
    population and its front partition. Deterministic given cfg.seed."""
    dim = space.encoded_dim
    rng = np.random.default_rng(cfg.seed)
    n = cfg.population_size

    genomes = rng.random((n, dim))
    if initial_genomes is not None:
        for i, g in enumerate(list(initial_genomes)[:n]):
            genomes[i] = np.clip(np.asarray(g, dtype=float), 0.0, 1.0)
    population = [_make_individual(g, score_fn) for g in genomes]
    _apply_partition(population, fast_nondominated_sort([ind.scores for ind in population]))
    offspring = _variation(population, cfg, rng, score_fn)

    for gen in range(cfg.generations):
        population = _survival(population + offspring, n)
        if gen < cfg.generations - 1:
            offspring = _variation(population, cfg, rng, score_fn)

    part = fast_nondominated_sort([ind.scores for ind in population])
    _apply_partition(population, part)
    return population, part
