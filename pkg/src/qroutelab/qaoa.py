"""The four ansatz variants and their layered evolution.

Every variant alternates the same diagonal cost phase with a mixer:

* ``X``     — uniform ``|->^n`` start, per-qubit X mixer (textbook ansatz);
* ``WS``    — warm-start product state + modified warm-start mixer;
* ``XY``    — uniform one-hot blocks + number-conserving XY ring mixer;
* ``WSXY``  — warm-start-biased one-hot blocks + XY ring mixer.

Warm starts come from the classical pipeline: the tour QUBO is reduced to
MaxCut, the low-rank relaxation is solved and rounded, the recovered bits are
relaxed to probabilities, and those probabilities shape the initial state
(and, for ``WS``, the mixer angles).

An :class:`AnsatzContext` carries everything immutable for one
(instance, variant) pair — the QUBO, its full energy table, the layout, and
the warm-start data — so repeated objective evaluations only pay for the
state evolution.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field

import numpy as np

from . import maxcut, statevec
from .encoding import BlockLayout, QuboProblem, build_tsp_qubo, energy_table
from .instances import TspInstance
from .statevec import RelaxedBits


class Variant(str, enum.Enum):
    """Ansatz family identifier (value doubles as the serialized name)."""

    X = "X"
    WS = "WS"
    XY = "XY"
    WSXY = "WSXY"

    def __str__(self) -> str:  # so f-strings print the bare name
        return self.value

    @property
    def needs_warm_start(self) -> bool:
        return self in (Variant.WS, Variant.WSXY)


@dataclass(frozen=True)
class AnsatzContext:
    """Immutable per-(instance, variant) simulation context.

    Attributes:
        qubo: The penalized tour QUBO.
        energies: Full ``2**n_vars`` energy table of ``qubo``.
        layout: Position-major qubit layout.
        depth_p: Number of phase/mix layers the context was prepared for.
        relaxed: Warm-start probabilities (``WS``/``WSXY`` only).
        thetas: Warm-start rotation angles (``WS`` only).
        warm_bits: The rounded classical bits behind ``relaxed``, for
            provenance.
    """

    qubo: QuboProblem
    energies: np.ndarray
    layout: BlockLayout
    depth_p: int
    relaxed: RelaxedBits | None = None
    thetas: np.ndarray | None = None
    warm_bits: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.depth_p < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth_p}")


def derive_seed(tag: str, *coordinates) -> int:
    """Stable 64-bit seed from a purpose tag and arbitrary coordinates.

    SHA-256 of the rendered coordinates, so streams for different purposes
    (warm start, parameter init, sampling) and different benchmark cells never
    collide and never depend on scheduling.
    """
    text = ":".join([tag, *(str(c) for c in coordinates)])
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "little")


def classical_warm_start(
    qubo: QuboProblem, gw_trials: int, seed: int
) -> tuple[np.ndarray, float]:
    """Relax-and-round the QUBO's MaxCut form; returns (bits, cut value)."""
    graph = maxcut.qubo_to_maxcut(qubo)
    factor = maxcut.solve_sdp(graph, seed=derive_seed("sdp", seed))
    spins = maxcut.gw_round(factor, graph, trials=gw_trials, seed=derive_seed("round", seed))
    return maxcut.recover_bits(spins), maxcut.cut_value(graph, spins)


def prepare_context(
    instance: TspInstance,
    variant: Variant,
    epsilon: float = 0.25,
    gw_trials: int = 100,
    seed: int = 0,
    depth_p: int = 1,
    penalty_a: float | None = None,
    penalty_b: float | None = None,
) -> AnsatzContext:
    """Build the simulation context for one instance/variant pair.

    The warm-start pipeline (and its classical randomness) only runs for the
    variants that use it; ``X`` and ``XY`` contexts are fully deterministic
    functions of the instance.
    """
    qubo = build_tsp_qubo(instance, penalty_a=penalty_a, penalty_b=penalty_b)
    energies = energy_table(qubo)
    layout = qubo.layout
    relaxed = thetas = warm_bits = None
    if variant.needs_warm_start:
        warm_bits, _ = classical_warm_start(qubo, gw_trials=gw_trials, seed=seed)
        relaxed = statevec.relax_bits(warm_bits, epsilon)
        if variant is Variant.WS:
            thetas = statevec.clamped_thetas(relaxed)
    return AnsatzContext(
        qubo=qubo,
        energies=energies,
        layout=layout,
        depth_p=depth_p,
        relaxed=relaxed,
        thetas=thetas,
        warm_bits=warm_bits,
    )


def initial_state(ctx: AnsatzContext, variant: Variant) -> np.ndarray:
    """The variant's layer-zero state."""
    if variant.needs_warm_start and ctx.relaxed is None:
        raise ValueError(f"context has no warm-start data for variant {variant}")
    if variant is Variant.X:
        return statevec.init_minus_all(ctx.layout.n_vars)
    if variant is Variant.WS:
        return statevec.init_ws_product(ctx.relaxed)
    if variant is Variant.XY:
        return statevec.init_w_blocks(ctx.layout)
    return statevec.init_biased_onehot(ctx.layout, ctx.relaxed)


def evolve(
    ctx: AnsatzContext,
    variant: Variant,
    gammas: np.ndarray,
    betas: np.ndarray,
) -> np.ndarray:
    """Run ``depth_p`` layers of cost phase + mixer from the initial state."""
    gammas = np.asarray(gammas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    if gammas.shape != (ctx.depth_p,) or betas.shape != (ctx.depth_p,):
        raise ValueError(
            f"expected {ctx.depth_p} gammas and betas, got shapes "
            f"{gammas.shape} and {betas.shape}"
        )
    state = initial_state(ctx, variant)
    for gamma, beta in zip(gammas, betas):
        state = statevec.apply_diagonal_phase(state, ctx.energies, gamma)
        if variant is Variant.X:
            state = statevec.apply_x_mixer(state, beta)
        elif variant is Variant.WS:
            state = statevec.apply_ws_mixer(state, ctx.thetas, beta)
        else:
            state = statevec.apply_xy_ring(state, ctx.layout, beta)
    return state


def objective(ctx: AnsatzContext, variant: Variant, params: np.ndarray) -> float:
    """Mean sampled energy at ``params = (gamma_1..gamma_p, beta_1..beta_p)``."""
    params = np.asarray(params, dtype=float)
    if params.shape != (2 * ctx.depth_p,):
        raise ValueError(f"params shape {params.shape} != ({2 * ctx.depth_p},)")
    state = evolve(ctx, variant, params[: ctx.depth_p], params[ctx.depth_p :])
    return statevec.expectation(state, ctx.energies)
