"""QUBO-to-MaxCut reduction and a classical relax-and-round MaxCut solver.

The reduction follows the standard spin substitution ``s_i = 2 x_i - 1`` plus
one auxiliary node (node 0, pinned to ``s_0 = +1``) that absorbs the linear
terms. Writing ``W = sum_{i<j} w_ij`` over the produced edge weights and
``C1`` for the produced offset, every assignment satisfies::

    qubo_energy(x) + 2 * cut_value(spins(x)) == W + C1

so minimizing the QUBO is exactly maximizing the cut.

The solver is a low-rank (Burer-Monteiro) take on the semidefinite
relaxation: each node gets a unit vector ``v_i`` in ``R^k`` with
``k = ceil(sqrt(2 n)) + 1`` (large enough that the factorization admits no
spurious local maxima generically), the relaxed cut
``sum_{i<j} w_ij (1 - <v_i, v_j>) / 2`` is maximized by projected gradient
ascent with row renormalization, and random-hyperplane rounding picks the best
of ``trials`` sign assignments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .encoding import QuboProblem


@dataclass(frozen=True)
class MaxCutInstance:
    """Weighted graph for MaxCut.

    Attributes:
        n_nodes: Node count; node 0 is the auxiliary/reference node when the
            instance came from a QUBO.
        weights: ``{(i, j): w}`` with ``i < j``; absent pairs weigh 0.
        offset_c1: Additive constant tying cut values back to QUBO energies.
    """

    n_nodes: int
    weights: dict[tuple[int, int], float]
    offset_c1: float

    def __post_init__(self):
        for i, j in self.weights:
            if not (0 <= i < j < self.n_nodes):
                raise ValueError(f"bad edge ({i}, {j}) for n_nodes={self.n_nodes}")

    def weight_matrix(self) -> np.ndarray:
        """Dense symmetric weight matrix with zero diagonal."""
        w = np.zeros((self.n_nodes, self.n_nodes))
        for (i, j), val in self.weights.items():
            w[i, j] = w[j, i] = val
        return w

    def total_weight(self) -> float:
        return float(sum(self.weights.values()))


def qubo_to_maxcut(qubo: QuboProblem) -> MaxCutInstance:
    """Reduce a QUBO over ``n`` variables to MaxCut on ``n + 1`` nodes.

    QUBO variable ``i`` becomes node ``i + 1``; node 0 is the auxiliary spin
    pinned to +1. Edge weights: ``w[i+1, j+1] = q_ij / 4`` for quadratic
    coefficients, and ``w[0, j+1] = (sum of q over pairs containing j) / 4
    + c_j / 2`` from the linear terms. The offset folds in the QUBO constant
    so the cut/energy identity holds for `qubo_energy` as-is.
    """
    n = qubo.n_vars
    weights: dict[tuple[int, int], float] = {}
    auxiliary = 0.5 * qubo.linear  # accumulates the node-0 edge weights
    for (i, j), coeff in qubo.quadratic.items():
        if coeff != 0.0:
            weights[(i + 1, j + 1)] = 0.25 * coeff
        auxiliary[i] += 0.25 * coeff
        auxiliary[j] += 0.25 * coeff
    for j in range(n):
        if auxiliary[j] != 0.0:
            weights[(0, j + 1)] = float(auxiliary[j])
    offset = (
        0.25 * sum(qubo.quadratic.values())
        + 0.5 * float(qubo.linear.sum())
        + qubo.constant
    )
    return MaxCutInstance(n_nodes=n + 1, weights=dict(sorted(weights.items())), offset_c1=offset)


def spins_of_bits(bits) -> np.ndarray:
    """Spin assignment (s_0=+1 auxiliary, then 2x-1 per variable)."""
    x = np.asarray(bits, dtype=int)
    return np.concatenate(([1], 2 * x - 1))


def cut_value(instance: MaxCutInstance, spins) -> float:
    """Total weight of edges whose endpoints get opposite spins."""
    s = np.asarray(spins, dtype=int)
    if s.shape != (instance.n_nodes,):
        raise ValueError(f"spins shape {s.shape} != ({instance.n_nodes},)")
    if not np.all(np.abs(s) == 1):
        raise ValueError("spins must be +1/-1")
    return float(sum(w for (i, j), w in instance.weights.items() if s[i] != s[j]))


def relaxed_cut_value(instance: MaxCutInstance, vectors: np.ndarray) -> float:
    """Relaxation objective ``sum_{i<j} w_ij (1 - <v_i, v_j>) / 2``."""
    w = instance.weight_matrix()
    gram_term = 0.25 * float(np.einsum("ij,ik,jk->", w, vectors, vectors))
    return 0.5 * instance.total_weight() - gram_term


def solve_sdp(
    instance: MaxCutInstance,
    seed: int,
    max_iters: int = 2000,
    tol: float = 1e-7,
) -> np.ndarray:
    """Maximize the relaxed cut over unit vectors; returns an (n, k) factor.

    Projected gradient ascent with per-step backtracking line search on the
    row-normalized update. Stops when an accepted step improves the objective
    by less than ``tol`` (or the line search stalls), or after ``max_iters``
    accepted steps. Deterministic in ``seed`` (initial vectors are random unit
    rows from a PCG64 stream).
    """
    n = instance.n_nodes
    k = math.ceil(math.sqrt(2 * n)) + 1
    rng = np.random.default_rng(seed)
    w = instance.weight_matrix()

    def normalize_rows(mat: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(mat, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        return mat / norms

    def objective(mat: np.ndarray) -> float:
        return 0.5 * instance.total_weight() - 0.25 * float(
            np.einsum("ij,ik,jk->", w, mat, mat)
        )

    vectors = normalize_rows(rng.standard_normal((n, k)))
    value = objective(vectors)
    step = 1.0
    for _ in range(max_iters):
        grad = -0.5 * (w @ vectors)
        improved = False
        while step > 1e-12:
            candidate = normalize_rows(vectors + step * grad)
            cand_value = objective(candidate)
            if cand_value > value:
                improved = True
                break
            step *= 0.5
        if not improved:
            break
        gain = cand_value - value
        vectors, value = candidate, cand_value
        step *= 2.0  # let the accepted step grow back after backtracking
        if gain < tol:
            break
    return vectors


def gw_round(
    factor: np.ndarray,
    instance: MaxCutInstance,
    trials: int = 100,
    seed: int = 0,
) -> np.ndarray:
    """Random-hyperplane rounding; returns the best spin vector found.

    Draws ``trials`` standard-normal hyperplanes, signs the projections
    (zero projections count as +1), keeps the assignment with the largest
    cut, and finally flips globally if needed so ``spins[0] == +1``.
    """
    if trials < 1:
        raise ValueError(f"need at least one rounding trial, got {trials}")
    n, k = factor.shape
    if n != instance.n_nodes:
        raise ValueError(f"factor has {n} rows for {instance.n_nodes} nodes")
    rng = np.random.default_rng(seed)
    normals = rng.standard_normal((trials, k))
    signs = np.where(factor @ normals.T >= 0.0, 1, -1)  # (n, trials)
    w = instance.weight_matrix()
    quad = np.einsum("it,it->t", signs, w @ signs)
    cuts = 0.5 * instance.total_weight() - 0.25 * quad
    best = signs[:, int(np.argmax(cuts))].copy()
    if best[0] == -1:
        best = -best
    return best


def recover_bits(spins) -> np.ndarray:
    """Map spins back to QUBO bits, dropping the auxiliary node.

    Requires ``spins[0] == +1`` (round first, or flip globally): bit
    ``i = (1 + s_{i+1}) / 2``.
    """
    s = np.asarray(spins, dtype=int)
    if s[0] != 1:
        raise ValueError("auxiliary spin must be +1; flip the assignment first")
    return ((1 + s[1:]) // 2).astype(np.uint8)
