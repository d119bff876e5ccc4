"""Generate a random tour instance and solve it exactly.

Instances are complete Euclidean graphs on the unit square; city 0 is the
fixed start/end of every tour, so a tour is a permutation of the remaining
cities. The brute-force oracle enumerates all of them and keeps every
cost-minimal one (a tour and its reversal always tie).
"""

import itertools

from qroutelab.instances import brute_force_optimal, generate_instance, tour_cost

instance = generate_instance(seed=50, n_cities=5)
print(f"{instance.n_cities} cities, seed {instance.seed}")
print("distance matrix:")
for row in instance.weights:
    print("  " + "  ".join(f"{w:.3f}" for w in row))

oracle = brute_force_optimal(instance)
print(f"\noptimal cost {oracle.optimal_cost:.6f}, achieved by {len(oracle.optimal_tours)} tours:")
for tour in sorted(oracle.optimal_tours):
    print(f"  0 -> {' -> '.join(map(str, tour))} -> 0")

costs = sorted(
    tour_cost(instance, tour) for tour in itertools.permutations(range(1, instance.n_cities))
)
print(f"\nall {len(costs)} tour costs range from {costs[0]:.6f} to {costs[-1]:.6f}")
print(f"gap to the runner-up: {costs[2] - costs[0]:.6f} (first two entries are one tour and its reverse)")
