"""Binary encoding of TSP tours and the penalized QUBO cost function.

With city 0 pinned as start/end, a tour of an ``N``-city instance assigns the
remaining ``m = N-1`` cities to ``m`` tour positions. Variable ``x[i,t] = 1``
means "city i sits at position t" (``i, t`` both 1-based). Qubits are laid out
position-major::

    qubit(i, t) = (t - 1) * m + (i - 1)

so each consecutive block of ``m`` qubits holds the one-hot city choice of one
position.

Bit conventions, stated once and used everywhere:

* integer basis index ``k``: bit ``q`` of ``k`` is qubit ``q`` (qubit 0 is the
  least significant bit);
* serialized bitstrings: character at string position ``q`` is qubit ``q``
  (qubit 0 printed leftmost).

The QUBO is ``H = H_cost + A * H_rows + B * H_cols`` where ``H_cost`` sums the
tour edge weights, ``H_rows`` penalizes cities used zero or multiple times and
``H_cols`` penalizes positions holding zero or multiple cities. For feasible
assignments the penalties vanish and the energy equals the tour cost exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .instances import Tour, TspInstance

#: Hard cap on exhaustive energy tables (2**24 entries, ~134 MB of float64).
ENERGY_TABLE_MAX_VARS = 24


@dataclass(frozen=True)
class BlockLayout:
    """Position-major qubit layout for an ``n_cities`` instance."""

    n_cities: int

    def __post_init__(self):
        if self.n_cities < 2:
            raise ValueError(f"need at least 2 cities, got {self.n_cities}")

    @property
    def m(self) -> int:
        """Cities per block == number of tour positions (``n_cities - 1``)."""
        return self.n_cities - 1

    @property
    def n_vars(self) -> int:
        return self.m * self.m

    def qubit_index(self, city: int, position: int) -> int:
        """Qubit holding "city at position" (both arguments 1-based)."""
        m = self.m
        if not (1 <= city <= m and 1 <= position <= m):
            raise ValueError(f"city {city}, position {position} out of range 1..{m}")
        return (position - 1) * m + (city - 1)

    def block(self, position: int) -> range:
        """Qubits of one position block, in city order."""
        start = self.qubit_index(1, position)
        return range(start, start + self.m)


@dataclass(frozen=True)
class QuboProblem:
    """Quadratic unconstrained binary objective ``const + c.x + sum q_ij x_i x_j``.

    Attributes:
        n_vars: Number of binary variables.
        linear: Length ``n_vars`` coefficient vector.
        quadratic: ``{(i, j): coeff}`` with ``i < j``.
        constant: Additive constant (here: the expanded penalty offsets).
        penalty_a: Row (city) penalty weight, if built from a TSP instance.
        penalty_b: Column (position) penalty weight, if built from a TSP instance.
        layout: Qubit layout, if built from a TSP instance.
    """

    n_vars: int
    linear: np.ndarray
    quadratic: dict[tuple[int, int], float]
    constant: float
    penalty_a: float | None = None
    penalty_b: float | None = None
    layout: BlockLayout | None = field(default=None, compare=False)

    def __post_init__(self):
        lin = np.asarray(self.linear, dtype=float)
        if lin.shape != (self.n_vars,):
            raise ValueError(f"linear shape {lin.shape} != ({self.n_vars},)")
        for i, j in self.quadratic:
            if not (0 <= i < j < self.n_vars):
                raise ValueError(f"bad quadratic key ({i}, {j}) for n_vars={self.n_vars}")
        object.__setattr__(self, "linear", lin)


def build_tsp_qubo(
    instance: TspInstance,
    penalty_a: float | None = None,
    penalty_b: float | None = None,
) -> QuboProblem:
    """Build the penalized tour-cost QUBO for ``instance``.

    Cost part: ``sum_{t<m} W[i,j] x[i,t] x[j,t+1]`` over ordered city pairs,
    plus depot terms ``W[0,i] (x[i,1] + x[i,m])``. Constraint part: both
    penalties default to ``n_cities * max(W)``, which strictly dominates any
    tour cost (every infeasible assignment violates at least one row *and*
    one column, costing >= A + B).
    """
    layout = BlockLayout(instance.n_cities)
    m = layout.m
    w = instance.weights
    a = float(instance.n_cities * w.max()) if penalty_a is None else float(penalty_a)
    b = float(instance.n_cities * w.max()) if penalty_b is None else float(penalty_b)

    linear = np.zeros(layout.n_vars)
    quadratic: dict[tuple[int, int], float] = {}
    constant = 0.0

    def add_pair(qa: int, qb: int, val: float):
        key = (qa, qb) if qa < qb else (qb, qa)
        quadratic[key] = quadratic.get(key, 0.0) + val

    # Edge weights between consecutive positions.
    for t in range(1, m):
        for i in range(1, m + 1):
            for j in range(1, m + 1):
                if i != j:
                    add_pair(layout.qubit_index(i, t), layout.qubit_index(j, t + 1), w[i, j])
    # Depot edges to the first and last position.
    for i in range(1, m + 1):
        linear[layout.qubit_index(i, 1)] += w[0, i]
        linear[layout.qubit_index(i, m)] += w[0, i]

    # (sum_k x_k - 1)^2 == 1 - sum_k x_k + 2 sum_{k<l} x_k x_l  for binary x.
    def add_one_hot_penalty(qubits: list[int], weight: float):
        nonlocal constant
        constant += weight
        for q in qubits:
            linear[q] -= weight
        for idx, qa in enumerate(qubits):
            for qb in qubits[idx + 1 :]:
                add_pair(qa, qb, 2.0 * weight)

    for i in range(1, m + 1):  # rows: each city appears exactly once
        add_one_hot_penalty([layout.qubit_index(i, t) for t in range(1, m + 1)], a)
    for t in range(1, m + 1):  # columns: each position holds exactly one city
        add_one_hot_penalty(list(layout.block(t)), b)

    return QuboProblem(
        n_vars=layout.n_vars,
        linear=linear,
        quadratic=quadratic,
        constant=constant,
        penalty_a=a,
        penalty_b=b,
        layout=layout,
    )


def qubo_energy(qubo: QuboProblem, bits) -> float:
    """Evaluate the QUBO at one assignment (sequence of 0/1 per variable)."""
    x = np.asarray(bits, dtype=float)
    if x.shape != (qubo.n_vars,):
        raise ValueError(f"bits shape {x.shape} != ({qubo.n_vars},)")
    energy = qubo.constant + float(qubo.linear @ x)
    for (i, j), coeff in qubo.quadratic.items():
        energy += coeff * x[i] * x[j]
    return energy


def energy_table(qubo: QuboProblem) -> np.ndarray:
    """Energies of all ``2**n_vars`` assignments, indexed per the bit convention.

    Entry ``k`` is the energy of the assignment whose variable ``q`` equals
    bit ``q`` of ``k``. Built by strided slice-adds, one pass per coefficient.
    """
    n = qubo.n_vars
    if n > ENERGY_TABLE_MAX_VARS:
        raise ValueError(f"refusing energy table for n_vars={n} > {ENERGY_TABLE_MAX_VARS}")
    table = np.full(1 << n, qubo.constant)
    for q in range(n):
        if qubo.linear[q] != 0.0:
            table.reshape(-1, 2, 1 << q)[:, 1, :] += qubo.linear[q]
    for (i, j), coeff in qubo.quadratic.items():
        view = table.reshape(-1, 2, 1 << (j - i - 1), 2, 1 << i)
        view[:, 1, :, 1, :] += coeff
    return table


def decode_bits(layout: BlockLayout, bits) -> Tour | None:
    """Decode an assignment into a tour, or ``None`` if it is infeasible.

    Feasible means: every position block is one-hot and the selected cities
    are all distinct.
    """
    x = np.asarray(bits)
    if x.shape != (layout.n_vars,):
        raise ValueError(f"bits shape {x.shape} != ({layout.n_vars},)")
    cities = []
    for t in range(1, layout.m + 1):
        block = x[layout.block(t).start : layout.block(t).stop]
        (ones,) = np.nonzero(block)
        if len(ones) != 1:
            return None
        cities.append(int(ones[0]) + 1)
    if len(set(cities)) != layout.m:
        return None
    return tuple(cities)


def tour_to_bits(layout: BlockLayout, tour: Tour) -> np.ndarray:
    """Inverse of :func:`decode_bits` for feasible assignments."""
    if sorted(tour) != list(range(1, layout.n_cities)):
        raise ValueError(f"tour {tour!r} is not a permutation of 1..{layout.m}")
    bits = np.zeros(layout.n_vars, dtype=np.uint8)
    for position, city in enumerate(tour, start=1):
        bits[layout.qubit_index(city, position)] = 1
    return bits


# Bit conventions (the only module that converts between representations).

def bits_of_index(k: int, n_vars: int) -> np.ndarray:
    """Bits of basis index ``k``; entry ``q`` is qubit ``q`` (LSB first)."""
    return (k >> np.arange(n_vars)) & 1


def index_of_bits(bits) -> int:
    """Basis index with bit ``q`` taken from ``bits[q]``."""
    return int(sum(int(b) << q for q, b in enumerate(bits)))


def string_of_bits(bits) -> str:
    """Serialize bits with qubit 0 leftmost."""
    return "".join("1" if b else "0" for b in bits)


def bits_of_string(s: str) -> np.ndarray:
    """Parse a bitstring serialized by :func:`string_of_bits`."""
    return np.array([1 if ch == "1" else 0 for ch in s], dtype=np.uint8)


def qubo_to_json(qubo: QuboProblem) -> str:
    """Serialize a QUBO (coefficients only; layout/penalties are not kept)."""
    return json.dumps(
        {
            "n": qubo.n_vars,
            "constant": qubo.constant,
            "linear": [float(v) for v in qubo.linear],
            "quadratic": [[i, j, float(v)] for (i, j), v in sorted(qubo.quadratic.items())],
        }
    )


def qubo_from_json(text: str) -> QuboProblem:
    """Parse a QUBO serialized by :func:`qubo_to_json`."""
    data = json.loads(text)
    return QuboProblem(
        n_vars=int(data["n"]),
        linear=np.asarray(data["linear"], dtype=float),
        quadratic={(int(i), int(j)): float(v) for i, j, v in data["quadratic"]},
        constant=float(data["constant"]),
    )
