"""qroutelab: a laboratory for warm-started QAOA variants on small TSPs.

The pipeline, end to end: random Euclidean instances and a brute-force tour
oracle (:mod:`.instances`), a penalized one-hot QUBO encoding
(:mod:`.encoding`), a QUBO-to-MaxCut reduction with a relax-and-round
classical solver for warm starts (:mod:`.maxcut`), an exact statevector
simulator with X, XY-ring, and warm-start mixers (:mod:`.statevec`), the four
ansatz variants (:mod:`.qaoa`), a traced simplex optimizer (:mod:`.optimize`),
and a reproducible benchmark harness with CLI (:mod:`.harness`, ``qrl``).
"""

__version__ = "0.1.0"

from .encoding import BlockLayout, QuboProblem, build_tsp_qubo, decode_bits, energy_table, qubo_energy
from .harness import ExperimentConfig, RunRecord, SummaryRow, aggregate, compute_metrics, run_experiment
from .instances import OracleResult, TspInstance, brute_force_optimal, generate_instance, tour_cost
from .maxcut import MaxCutInstance, cut_value, gw_round, qubo_to_maxcut, recover_bits, solve_sdp
from .optimize import OptimizerConfig, OptTrace, minimize, random_params
from .qaoa import AnsatzContext, Variant, evolve, initial_state, objective, prepare_context
from .statevec import RelaxedBits, expectation, relax_bits, sample

__all__ = [
    "__version__",
    "AnsatzContext",
    "BlockLayout",
    "ExperimentConfig",
    "MaxCutInstance",
    "OptTrace",
    "OptimizerConfig",
    "OracleResult",
    "QuboProblem",
    "RelaxedBits",
    "RunRecord",
    "SummaryRow",
    "TspInstance",
    "Variant",
    "aggregate",
    "brute_force_optimal",
    "build_tsp_qubo",
    "compute_metrics",
    "cut_value",
    "decode_bits",
    "energy_table",
    "evolve",
    "expectation",
    "generate_instance",
    "gw_round",
    "initial_state",
    "minimize",
    "objective",
    "prepare_context",
    "qubo_energy",
    "qubo_to_maxcut",
    "random_params",
    "recover_bits",
    "relax_bits",
    "run_experiment",
    "sample",
    "solve_sdp",
    "tour_cost",
]
