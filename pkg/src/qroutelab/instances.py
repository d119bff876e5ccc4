"""Random Euclidean TSP instances, tour costs, and the brute-force oracle.

Instances are complete symmetric graphs built from points drawn uniformly on
the unit square. City 0 is the fixed start/end of every tour, so a tour is a
permutation of the remaining cities ``1..n-1``. The default benchmark set uses
seeds 50..59.

All randomness goes through numpy's PCG64 generator
(``np.random.default_rng``), so an instance is fully determined by
``(seed, n_cities)``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

#: Seeds of the default benchmark instance set.
DEFAULT_SEEDS = tuple(range(50, 60))

#: Two tour costs are considered equal within this absolute tolerance.
COST_ATOL = 1e-9

#: Hard cap for exhaustive tour enumeration ((n-1)! tours).
BRUTE_FORCE_MAX_CITIES = 10

#: A tour visits cities 1..n-1 once each; city 0 is the implicit start/end.
Tour = tuple[int, ...]


@dataclass(frozen=True)
class TspInstance:
    """A complete symmetric TSP instance on ``n_cities`` cities.

    Attributes:
        n_cities: Number of cities including the fixed start city 0.
        weights: ``(n, n)`` symmetric distance matrix with zero diagonal.
        seed: Seed the instance was generated from (informational).
        points: Optional ``(n, 2)`` coordinates the weights were derived from.
    """

    n_cities: int
    weights: np.ndarray
    seed: int
    points: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if self.n_cities < 2:
            raise ValueError(f"need at least 2 cities, got {self.n_cities}")
        if w.shape != (self.n_cities, self.n_cities):
            raise ValueError(f"weights shape {w.shape} != ({self.n_cities}, {self.n_cities})")
        if not np.array_equal(w, w.T):
            raise ValueError("weight matrix must be symmetric")
        if np.any(np.diag(w) != 0.0):
            raise ValueError("weight matrix must have a zero diagonal")
        if np.any(w < 0.0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and non-negative")
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class OracleResult:
    """Exhaustive ground truth for one instance.

    Attributes:
        optimal_cost: Cost of the shortest tour.
        optimal_tours: Every tour whose cost matches ``optimal_cost`` within
            ``COST_ATOL`` (at least the two traversal directions for n >= 3).
    """

    optimal_cost: float
    optimal_tours: frozenset[Tour]


def generate_instance(seed: int, n_cities: int) -> TspInstance:
    """Draw ``n_cities`` points uniformly on [0,1]^2 and build the instance.

    Deterministic in ``(seed, n_cities)``: the points come from a fresh
    PCG64 stream, and the Euclidean distance matrix is exactly symmetric
    because each entry is computed from coordinate differences via
    ``np.hypot``.
    """
    if n_cities < 2:
        raise ValueError(f"need at least 2 cities, got {n_cities}")
    rng = np.random.default_rng(seed)
    points = rng.random((n_cities, 2))
    dx = points[:, 0][:, None] - points[:, 0][None, :]
    dy = points[:, 1][:, None] - points[:, 1][None, :]
    weights = np.hypot(dx, dy)
    return TspInstance(n_cities=n_cities, weights=weights, seed=seed, points=points)


def tour_cost(instance: TspInstance, tour: Tour) -> float:
    """Cost of the closed tour 0 -> tour[0] -> ... -> tour[-1] -> 0.

    ``tour`` must be a permutation of ``1..n-1``.
    """
    n = instance.n_cities
    if sorted(tour) != list(range(1, n)):
        raise ValueError(f"tour {tour!r} is not a permutation of 1..{n - 1}")
    w = instance.weights
    cost = w[0, tour[0]]
    for a, b in itertools.pairwise(tour):
        cost += w[a, b]
    cost += w[tour[-1], 0]
    return float(cost)


def brute_force_optimal(instance: TspInstance) -> OracleResult:
    """Enumerate all (n-1)! tours and return the optimum and its achievers.

    Refuses instances with more than ``BRUTE_FORCE_MAX_CITIES`` cities.
    By symmetry of the weights, a tour and its reversal always tie, so
    ``optimal_tours`` has at least two elements for n >= 3.
    """
    n = instance.n_cities
    if n > BRUTE_FORCE_MAX_CITIES:
        raise ValueError(f"refusing brute force for n_cities={n} > {BRUTE_FORCE_MAX_CITIES}")
    costs: dict[Tour, float] = {}
    for perm in itertools.permutations(range(1, n)):
        costs[perm] = tour_cost(instance, perm)
    optimal_cost = min(costs.values())
    optimal = frozenset(t for t, c in costs.items() if c <= optimal_cost + COST_ATOL)
    return OracleResult(optimal_cost=optimal_cost, optimal_tours=optimal)


def _fmt17(x: float) -> str:
    """Format a float with 17 significant digits (exact double round-trip)."""
    return format(float(x), ".17g")


def instance_to_json(instance: TspInstance) -> str:
    """Serialize an instance to JSON with 17-significant-digit floats."""
    if instance.points is None:
        points = "null"
    else:
        points = (
            "["
            + ", ".join(f"[{_fmt17(x)}, {_fmt17(y)}]" for x, y in instance.points)
            + "]"
        )
    rows = ", ".join(
        "[" + ", ".join(_fmt17(v) for v in row) + "]" for row in instance.weights
    )
    return (
        f'{{"n": {instance.n_cities}, "seed": {instance.seed}, '
        f'"points": {points}, "weights": [{rows}]}}'
    )


def instance_from_json(text: str) -> TspInstance:
    """Parse an instance serialized by :func:`instance_to_json`."""
    data = json.loads(text)
    points = None if data.get("points") is None else np.asarray(data["points"], dtype=float)
    return TspInstance(
        n_cities=int(data["n"]),
        weights=np.asarray(data["weights"], dtype=float),
        seed=int(data["seed"]),
        points=points,
    )
