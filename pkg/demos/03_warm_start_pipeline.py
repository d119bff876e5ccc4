"""Walk the classical warm-start pipeline: QUBO -> MaxCut -> SDP -> rounding.

The QUBO is reduced to MaxCut on one extra auxiliary node; a low-rank
Burer-Monteiro ascent solves the semidefinite relaxation; random hyperplanes
round the vectors to spins; fixing the auxiliary spin turns the best cut back
into a bitstring for the original variables. That bitstring seeds the
warm-started circuits.
"""

from qroutelab.encoding import build_tsp_qubo, qubo_energy, string_of_bits
from qroutelab.instances import brute_force_optimal, generate_instance
from qroutelab.maxcut import cut_value, gw_round, qubo_to_maxcut, recover_bits, relaxed_cut_value, solve_sdp
from qroutelab.encoding import decode_bits

instance = generate_instance(seed=50, n_cities=5)
qubo = build_tsp_qubo(instance)
graph = qubo_to_maxcut(qubo)
print(f"QUBO: {qubo.n_vars} variables -> MaxCut: {graph.n_nodes} nodes, {len(graph.weights)} edges")

factor = solve_sdp(graph, seed=1)
print(f"SDP relaxation value (upper bound on any cut): {relaxed_cut_value(graph, factor):.4f}")

spins = gw_round(factor, graph, trials=100, seed=2)
cut = cut_value(graph, spins)
print(f"best of 100 hyperplane roundings: cut {cut:.4f}")

bits = recover_bits(spins)
energy = qubo_energy(qubo, bits)
oracle = brute_force_optimal(instance)
tour = decode_bits(qubo.layout, bits)
print(f"\nrecovered bits: {string_of_bits(bits)}")
print(f"QUBO energy of the rounded solution: {energy:.6f}")
print(f"decodes to tour: {tour}  (optimal cost {oracle.optimal_cost:.6f})")
if tour is not None and tour in oracle.optimal_tours:
    print("the classical pipeline already lands on an optimal tour here -")
    print("the quantum circuits then have to keep, not find, the optimum")
