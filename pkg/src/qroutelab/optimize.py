"""Derivative-free parameter search for the layered ansatz objectives.

A deliberately small, fully-pinned Nelder-Mead simplex search: reflection 1.0,
expansion 2.0, contraction 0.5, shrink 0.5, initial simplex ``x0`` plus one
vertex per coordinate offset by ``initial_step``. Every objective evaluation
is recorded, the evaluation budget is strict (checked before each call), and
the whole search is deterministic in ``(objective, x0, config)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class OptimizerConfig:
    """Search budget and stopping rules.

    Attributes:
        max_evals: Hard cap on objective evaluations (including the initial
            simplex); the default scales with the ansatz depth as ``300 * p``.
        initial_step: Per-coordinate offset (radians) of the initial simplex.
        tol_abs: Convergence scale: stop once both the simplex's value spread
            and its vertex spread (max coordinate distance from the best
            vertex) drop below this. Value spread alone can hit zero while the
            simplex straddles a minimum symmetrically, so both are required.
        seed: Carried for provenance; the simplex search itself is
            deterministic and draws no randomness.
    """

    max_evals: int
    initial_step: float = 0.1
    tol_abs: float = 1e-5
    seed: int = 0

    def __post_init__(self):
        if self.max_evals < 1:
            raise ValueError(f"max_evals must be >= 1, got {self.max_evals}")


@dataclass
class OptTrace:
    """Everything a search did: every evaluation, the winner, and how it ended.

    ``error`` is set (and the search aborted) if the objective ever returned a
    non-finite value; the trace still holds everything evaluated up to that
    point.
    """

    evaluations: list[tuple[np.ndarray, float]] = field(default_factory=list)
    best_params: np.ndarray | None = None
    best_value: float = math.inf
    n_evals: int = 0
    converged: bool = False
    error: str | None = None


class _StopSearch(Exception):
    """Internal control flow: budget exhausted or non-finite objective."""


def random_params(depth_p: int, seed: int) -> np.ndarray:
    """Random initial parameters: p phase angles in [0, 2pi), p mixing in [0, pi)."""
    if depth_p < 1:
        raise ValueError(f"depth must be >= 1, got {depth_p}")
    rng = np.random.default_rng(seed)
    gammas = rng.uniform(0.0, 2.0 * np.pi, depth_p)
    betas = rng.uniform(0.0, np.pi, depth_p)
    return np.concatenate([gammas, betas])


def minimize(
    objective: Callable[[np.ndarray], float],
    x0: np.ndarray,
    config: OptimizerConfig,
) -> OptTrace:
    """Nelder-Mead simplex descent of ``objective`` from ``x0``.

    Stops when the budget runs out, the simplex has collapsed (both its
    best-to-worst value spread and its vertex spread below ``config.tol_abs``,
    reported as ``converged``), or the objective returns a non-finite value
    (reported via ``error``).
    """
    x0 = np.asarray(x0, dtype=float)
    dim = len(x0)
    trace = OptTrace()

    def evaluate(x: np.ndarray) -> float:
        if trace.n_evals >= config.max_evals:
            raise _StopSearch
        value = float(objective(x))
        trace.n_evals += 1
        trace.evaluations.append((x.copy(), value))
        if not math.isfinite(value):
            trace.error = f"non-finite objective value {value!r} at evaluation {trace.n_evals}"
            raise _StopSearch
        if value < trace.best_value:
            trace.best_value = value
            trace.best_params = x.copy()
        return value

    simplex = [x0] + [x0 + config.initial_step * basis for basis in np.eye(dim)]
    values = []
    try:
        for vertex in simplex:
            values.append(evaluate(vertex))
        while True:
            order = np.argsort(values, kind="stable")
            simplex = [simplex[i] for i in order]
            values = [values[i] for i in order]
            vertex_spread = max(
                float(np.max(np.abs(vertex - simplex[0]))) for vertex in simplex[1:]
            )
            if values[-1] - values[0] < config.tol_abs and vertex_spread < config.tol_abs:
                trace.converged = True
                break
            centroid = np.mean(simplex[:-1], axis=0)
            worst = simplex[-1]
            reflected = centroid + 1.0 * (centroid - worst)
            f_reflected = evaluate(reflected)
            if f_reflected < values[0]:
                expanded = centroid + 2.0 * (centroid - worst)
                f_expanded = evaluate(expanded)
                if f_expanded < f_reflected:
                    simplex[-1], values[-1] = expanded, f_expanded
                else:
                    simplex[-1], values[-1] = reflected, f_reflected
            elif f_reflected < values[-2]:
                simplex[-1], values[-1] = reflected, f_reflected
            else:
                if f_reflected < values[-1]:  # outside contraction
                    contracted = centroid + 0.5 * (reflected - centroid)
                    f_contracted = evaluate(contracted)
                    accept = f_contracted <= f_reflected
                else:  # inside contraction
                    contracted = centroid - 0.5 * (centroid - worst)
                    f_contracted = evaluate(contracted)
                    accept = f_contracted < values[-1]
                if accept:
                    simplex[-1], values[-1] = contracted, f_contracted
                else:  # shrink everything toward the best vertex
                    for i in range(1, dim + 1):
                        simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                        values[i] = evaluate(simplex[i])
    except _StopSearch:
        pass
    return trace
