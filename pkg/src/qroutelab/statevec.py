"""Exact statevector simulation of the four ansatz families.

States are 1-D complex128 arrays of length ``2**n``, indexed per the bit
convention in :mod:`qroutelab.encoding` (bit ``q`` of the basis index is
qubit ``q``). All operations are norm-preserving, return fresh arrays, and
never modify their input.

Initial states: the uniform ``|->^n`` product state (per-qubit mixing), the
per-block single-excitation ("W") superposition, the warm-start product of
single-qubit Y-rotations, and the warm-start-biased one-hot superposition that
interpolates between the last two. Mixers: the per-qubit X rotation, the
number-conserving XY ring within each position block, and the rotated-frame
warm-start mixer.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .encoding import BlockLayout, bits_of_index, string_of_bits


@dataclass(frozen=True)
class RelaxedBits:
    """Per-variable probabilities obtained by relaxing a classical bitstring.

    Attributes:
        probs: ``probs[q]`` is the relaxed probability that qubit ``q`` is 1.
        epsilon: Relaxation strength used to produce (and later clamp) them.
    """

    probs: np.ndarray
    epsilon: float

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if not (0.0 <= self.epsilon <= 0.5):
            raise ValueError(f"epsilon must be in [0, 0.5], got {self.epsilon}")
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        object.__setattr__(self, "probs", p)


def relax_bits(bits, epsilon: float) -> RelaxedBits:
    """Soften a 0/1 assignment: 1 -> 1-epsilon, 0 -> epsilon."""
    x = np.asarray(bits, dtype=int)
    probs = np.where(x == 1, 1.0 - epsilon, epsilon).astype(float)
    return RelaxedBits(probs=probs, epsilon=epsilon)


def clamped_thetas(relaxed: RelaxedBits) -> np.ndarray:
    """Warm-start rotation angles ``theta = 2 arcsin(sqrt(c))`` per qubit.

    Probabilities are clamped into ``[epsilon, 1-epsilon]`` first, which keeps
    every angle away from the poles so the mixer can still rotate the qubit.
    """
    c = np.clip(relaxed.probs, relaxed.epsilon, 1.0 - relaxed.epsilon)
    return 2.0 * np.arcsin(np.sqrt(c))


def ws_mixer_matrix(prob: float) -> np.ndarray:
    """Single-qubit warm-start mixer Hamiltonian for relaxed probability ``prob``.

    The 2x2 matrix ``[[2c-1, -2 sqrt(c(1-c))], [-2 sqrt(c(1-c)), 1-2c]]``; the
    warm-start qubit state ``cos(theta/2)|0> + sin(theta/2)|1>`` is its
    eigenvector with eigenvalue -1.
    """
    c = float(prob)
    off = -2.0 * np.sqrt(c * (1.0 - c))
    return np.array([[2.0 * c - 1.0, off], [off, 1.0 - 2.0 * c]])


# ---------------------------------------------------------------------------
# Initial states


def _product_state(factors: list[np.ndarray]) -> np.ndarray:
    """Tensor product with ``factors[0]`` on the lowest-index qubits."""
    state = np.asarray(factors[0], dtype=complex)
    for factor in factors[1:]:
        state = np.kron(np.asarray(factor, dtype=complex), state)
    return state


MAX_QUBITS = 24
"""Hard cap on simulated register width (16 MiB of complex amplitudes)."""


def _check_size(n_qubits: int) -> None:
    if n_qubits > MAX_QUBITS:
        raise ValueError(f"{n_qubits} qubits exceeds the {MAX_QUBITS}-qubit cap")


def init_minus_all(n_qubits: int) -> np.ndarray:
    """``|->^n``: amplitude ``(-1)^popcount(k) / sqrt(2^n)`` on basis ``k``."""
    _check_size(n_qubits)
    k = np.arange(1 << n_qubits)
    signs = 1.0 - 2.0 * (_popcount(k) & 1)
    return (signs / np.sqrt(float(1 << n_qubits))).astype(complex)


def _popcount(k: np.ndarray) -> np.ndarray:
    counts = np.zeros_like(k)
    while np.any(k):
        counts += k & 1
        k = k >> 1
    return counts


def _onehot_block(amplitudes: np.ndarray) -> np.ndarray:
    """Block state ``sum_j amplitudes[j] |e_j>`` over ``m`` qubits."""
    m = len(amplitudes)
    block = np.zeros(1 << m, dtype=complex)
    block[1 << np.arange(m)] = amplitudes
    return block


def init_w_blocks(layout: BlockLayout) -> np.ndarray:
    """Uniform single-excitation state in every position block.

    Each block of ``m`` qubits holds ``sum_j |e_j> / sqrt(m)``; the full state
    is their tensor product (amplitude ``m**(-m/2)`` on every one-hot-per-block
    basis state).
    """
    m = layout.m
    _check_size(layout.n_vars)
    block = _onehot_block(np.full(m, np.sqrt(1.0 / m)))
    return _product_state([block] * m)


def init_ws_product(relaxed: RelaxedBits) -> np.ndarray:
    """Product of per-qubit warm-start rotations ``R_Y(theta_q)|0>``."""
    thetas = clamped_thetas(relaxed)
    factors = [np.array([np.cos(t / 2.0), np.sin(t / 2.0)]) for t in thetas]
    return _product_state(factors)


def init_biased_onehot(layout: BlockLayout, relaxed: RelaxedBits) -> np.ndarray:
    """One-hot superposition per block, biased by the relaxed probabilities.

    Block ``t`` gets amplitudes ``sqrt(p_j / Z_t)`` on ``|e_j>`` where ``p_j``
    is the relaxed probability of qubit ``(t-1)m + (j-1)`` and ``Z_t`` their
    block sum. With uniform probabilities this reduces exactly to
    :func:`init_w_blocks`.
    """
    m = layout.m
    _check_size(layout.n_vars)
    if relaxed.probs.shape != (layout.n_vars,):
        raise ValueError(
            f"relaxed probs shape {relaxed.probs.shape} != ({layout.n_vars},)"
        )
    factors = []
    for t in range(1, m + 1):
        p = relaxed.probs[layout.block(t).start : layout.block(t).stop]
        z = p.sum()
        if z <= 0.0:
            raise ValueError(f"position block {t} has zero total probability")
        factors.append(_onehot_block(np.sqrt(p / z)))
    return _product_state(factors)


# ---------------------------------------------------------------------------
# Layer operations


def apply_diagonal_phase(state: np.ndarray, energies: np.ndarray, gamma: float) -> np.ndarray:
    """Phase each basis state by its energy: ``amp_k *= exp(-i g (E_k - min E))``.

    Subtracting the minimum energy is a global phase; it only conditions the
    exponent.
    """
    if state.shape != energies.shape:
        raise ValueError(f"state shape {state.shape} != energies shape {energies.shape}")
    return state * np.exp(-1j * gamma * (energies - energies.min()))


def _apply_one_qubit_gate(state: np.ndarray, qubit: int, u: np.ndarray) -> None:
    """In-place 2x2 gate on one qubit of a contiguous working array."""
    view = state.reshape(-1, 2, 1 << qubit)
    v0 = view[:, 0, :]
    v1 = view[:, 1, :]
    new0 = u[0, 0] * v0 + u[0, 1] * v1
    new1 = u[1, 0] * v0 + u[1, 1] * v1
    v0[:] = new0
    v1[:] = new1


def apply_x_mixer(state: np.ndarray, beta: float) -> np.ndarray:
    """Apply ``exp(-i beta X)`` (== ``cos b I - i sin b X``) to every qubit."""
    n = _n_qubits(state)
    gate = np.array(
        [[np.cos(beta), -1j * np.sin(beta)], [-1j * np.sin(beta), np.cos(beta)]]
    )
    out = state.astype(complex, copy=True)
    for q in range(n):
        _apply_one_qubit_gate(out, q, gate)
    return out


@functools.lru_cache(maxsize=256)
def _pair_indices(n_qubits: int, qubit_a: int, qubit_b: int) -> tuple[np.ndarray, np.ndarray]:
    """Basis indices with (a=0, b=1) and their (a=1, b=0) partners."""
    k = np.arange(1 << n_qubits)
    k01 = k[((k >> qubit_a) & 1 == 0) & ((k >> qubit_b) & 1 == 1)]
    k10 = k01 ^ ((1 << qubit_a) | (1 << qubit_b))
    return k01, k10


def _mix_pair(state: np.ndarray, n: int, qubit_a: int, qubit_b: int, beta: float) -> None:
    """In-place ``exp(-i beta (XX+YY))`` on one qubit pair.

    Rotates within the single-excitation span {|01>, |10>} by ``2 beta`` and
    leaves |00> and |11> untouched, so Hamming weight is conserved exactly.
    """
    k01, k10 = _pair_indices(n, qubit_a, qubit_b)
    a01 = state[k01]
    a10 = state[k10]
    c, s = np.cos(2.0 * beta), np.sin(2.0 * beta)
    state[k01] = c * a01 - 1j * s * a10
    state[k10] = c * a10 - 1j * s * a01


def apply_xy_pair(state: np.ndarray, qubit_a: int, qubit_b: int, beta: float) -> np.ndarray:
    """Apply ``exp(-i beta (XX+YY))`` to qubits ``(a, b)``."""
    if qubit_a == qubit_b:
        raise ValueError("pair gate needs two distinct qubits")
    out = state.astype(complex, copy=True)
    _mix_pair(out, _n_qubits(state), qubit_a, qubit_b, beta)
    return out


def apply_xy_ring(state: np.ndarray, layout: BlockLayout, beta: float) -> np.ndarray:
    """One Trotter step of the XY ring mixer inside every position block.

    Within each block the pair gates run over city pairs (1,2), (2,3), ...,
    (m-1,m), (m,1) in that fixed order; blocks are processed in position
    order. A single-city block (m == 1) has no pairs and is left unchanged.
    """
    n = _n_qubits(state)
    if n != layout.n_vars:
        raise ValueError(f"state has {n} qubits, layout has {layout.n_vars}")
    out = state.astype(complex, copy=True)
    m = layout.m
    if m == 1:
        return out
    for t in range(1, m + 1):
        qubits = list(layout.block(t))
        pairs = list(itertools.pairwise(qubits)) + [(qubits[-1], qubits[0])]
        for qa, qb in pairs:
            _mix_pair(out, n, qa, qb, beta)
    return out


def apply_ws_mixer(state: np.ndarray, thetas: np.ndarray, beta: float) -> np.ndarray:
    """Apply the modified warm-start mixer to every qubit.

    Per qubit ``q`` the circuit is ``R_Y(2 theta_q)`` then ``R_Z(-2 beta)``
    then ``R_Y(-theta_q)`` (first listed applied first). At ``beta = 0`` this
    collapses to a plain ``R_Y(theta_q)``.
    """
    n = _n_qubits(state)
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape != (n,):
        raise ValueError(f"thetas shape {thetas.shape} != ({n},)")
    out = state.astype(complex, copy=True)
    rz = np.array([[np.exp(1j * beta), 0.0], [0.0, np.exp(-1j * beta)]])
    for q in range(n):
        gate = _ry(-thetas[q]) @ rz @ _ry(2.0 * thetas[q])
        _apply_one_qubit_gate(out, q, gate)
    return out


def _ry(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2.0), np.sin(angle / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


# ---------------------------------------------------------------------------
# Readout


def expectation(state: np.ndarray, energies: np.ndarray) -> float:
    """Mean energy under the state's measurement distribution."""
    if state.shape != energies.shape:
        raise ValueError(f"state shape {state.shape} != energies shape {energies.shape}")
    probs = state.real**2 + state.imag**2
    return float(probs @ energies)


def sample(state: np.ndarray, shots: int, seed: int) -> dict[str, int]:
    """Draw ``shots`` basis-state measurements; returns bitstring -> count.

    A single multinomial draw from the renormalized probabilities, so the
    result is deterministic in ``seed`` and the counts always sum to
    ``shots``. Keys follow the serialization convention (qubit 0 leftmost).
    """
    if shots < 1:
        raise ValueError(f"need at least one shot, got {shots}")
    n = _n_qubits(state)
    probs = state.real**2 + state.imag**2
    counts = np.random.default_rng(seed).multinomial(shots, probs / probs.sum())
    (hit,) = np.nonzero(counts)
    return {
        string_of_bits(bits_of_index(int(k), n)): int(counts[k]) for k in hit
    }


def onehot_subspace_indices(layout: BlockLayout) -> np.ndarray:
    """Basis indices spanning the one-hot-per-block subspace (m^m states)."""
    m = layout.m
    offsets = [(t - 1) * m for t in range(1, m + 1)]
    indices = [
        sum(1 << (offset + city) for offset, city in zip(offsets, choice))
        for choice in itertools.product(range(m), repeat=m)
    ]
    return np.array(sorted(indices))


def _n_qubits(state: np.ndarray) -> int:
    n = int(np.log2(len(state)) + 0.5)
    if 1 << n != len(state):
        raise ValueError(f"state length {len(state)} is not a power of two")
    return n
