"""Deterministic multi-start Nelder-Mead maximization."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

REFLECT = 1.0
EXPAND = 2.0
CONTRACT = 0.5
SHRINK = 0.5


@dataclass(frozen=True)
class OptimizerConfig:
    """Starts and stopping rule for :func:`maximize`.

    A start's descent stops when the simplex diameter drops below
    ``tolerance`` (converged) or after ``max_iterations`` iterations.
    """

    starts: tuple[tuple[float, ...], ...]
    simplex_scale: float = 0.3
    tolerance: float = 1e-10
    max_iterations: int = 2000

    def __post_init__(self):
        starts = tuple(tuple(float(c) for c in s) for s in self.starts)
        if not starts:
            raise ValueError("at least one start is required")
        if len({len(s) for s in starts}) != 1:
            raise ValueError("all starts must have the same dimension")
        if not 1 <= len(starts[0]) <= 8:
            raise ValueError("dimension must be between 1 and 8")
        if not self.simplex_scale > 0:
            raise ValueError("simplex_scale must be > 0")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        object.__setattr__(self, "starts", starts)


class Maximum(NamedTuple):
    point: tuple[float, ...]
    value: float
    converged: bool


@dataclass
class Run:
    """Outcome of a single Nelder-Mead descent."""

    start: tuple[float, ...]
    point: tuple[float, ...]
    value: float
    converged: bool
    iterations: int
    evaluations: int
    best_history: list[float] = field(default_factory=list, repr=False)


def _diameter(simplex: np.ndarray) -> float:
    diff = simplex[:, None, :] - simplex[None, :, :]
    return float(np.sqrt((diff * diff).sum(axis=-1).max()))


def nelder_mead(
    objective: Callable[[np.ndarray], float],
    start: Sequence[float],
    simplex_scale: float = 0.3,
    tolerance: float = 1e-10,
    max_iterations: int = 2000,
    record: bool = False,
) -> Run:
    """Maximize ``objective`` from one start with the standard Nelder-Mead moves."""
    x0 = np.asarray(start, dtype=float)
    dim = x0.size
    simplex = np.vstack([x0] + [x0 + simplex_scale * e for e in np.eye(dim)])
    # minimize the negated objective
    costs = np.array([-float(objective(v)) for v in simplex])
    evals = dim + 1
    history = []
    converged = False
    it = 0
    while True:
        order = np.argsort(costs, kind="stable")
        simplex = simplex[order]
        costs = costs[order]
        if record:
            history.append(-costs[0])
        if _diameter(simplex) < tolerance:
            converged = True
            break
        if it >= max_iterations:
            break
        it += 1

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + REFLECT * (centroid - worst)
        fr = -float(objective(xr))
        evals += 1
        if costs[0] <= fr < costs[-2]:
            simplex[-1], costs[-1] = xr, fr
            continue
        if fr < costs[0]:
            xe = centroid + EXPAND * (xr - centroid)
            fe = -float(objective(xe))
            evals += 1
            if fe < fr:
                simplex[-1], costs[-1] = xe, fe
            else:
                simplex[-1], costs[-1] = xr, fr
            continue
        if fr < costs[-1]:
            xc = centroid + CONTRACT * (xr - centroid)
            fc = -float(objective(xc))
            evals += 1
            if fc <= fr:
                simplex[-1], costs[-1] = xc, fc
                continue
        else:
            xc = centroid + CONTRACT * (worst - centroid)
            fc = -float(objective(xc))
            evals += 1
            if fc < costs[-1]:
                simplex[-1], costs[-1] = xc, fc
                continue
        best = simplex[0]
        for i in range(1, dim + 1):
            simplex[i] = best + SHRINK * (simplex[i] - best)
            costs[i] = -float(objective(simplex[i]))
        evals += dim

    return Run(
        start=tuple(float(c) for c in x0),
        point=tuple(float(c) for c in simplex[0]),
        value=-float(costs[0]),
        converged=converged,
        iterations=it,
        evaluations=evals,
        best_history=history,
    )


def run_all(objective: Callable[[np.ndarray], float], cfg: OptimizerConfig) -> list[Run]:
    return [
        nelder_mead(objective, s, cfg.simplex_scale, cfg.tolerance, cfg.max_iterations)
        for s in cfg.starts
    ]


def best_run(runs: Sequence[Run], key: Callable[[Run], tuple] | None = None) -> Run:
    """Highest value wins; ties go to the lexicographically smallest ``key`` (default: point)."""
    key = key or (lambda r: r.point)
    return min(runs, key=lambda r: (-r.value, key(r)))


def maximize(objective: Callable[[np.ndarray], float], cfg: OptimizerConfig) -> Maximum:
    """Run Nelder-Mead from every start in ``cfg`` and return the best point found."""
    best = best_run(run_all(objective, cfg))
    if not math.isfinite(best.value):
        raise FloatingPointError("objective returned a non-finite value at the optimum")
    return Maximum(best.point, best.value, best.converged)
