"""Edit distance to complete blowups, weighted distances and stability."""

# %%
from hypext import (
    balanced_blowup,
    complete,
    distance_to_complete_blowups,
    stability_probe,
    weighted_distance_fixed,
    weighted_distance_upper,
)

# %% Deleting k edges from a blowup puts it at distance k. Exact mode is a
# branch and bound over partitions; heuristic mode is seeded hill climbing.
b = balanced_blowup(4, 3, 8)
damaged = b.without_edges(b.edges[:3])
exact = distance_to_complete_blowups(damaged, 4, mode="exact")
heur = distance_to_complete_blowups(damaged, 4, mode="heuristic", seed=2)
print("exact:", exact.value, exact.parts, "| heuristic:", heur.value, "certified:", heur.certified)

# %% Weighted distance for a fixed vertex identification.
k3 = complete(3, 2)
print("fixed:", weighted_distance_fixed(k3, k3.without_edges([(0, 1)]), [1 / 3] * 3))

# %% An upper bound over couplings in which each vertex is split at most cap times.
rep = weighted_distance_upper(complete(4, 3), [0.25] * 4, complete(4, 3), [0.4, 0.2, 0.2, 0.2], 4)
print("upper bound:", round(rep.value, 6), "feasible:", rep.feasible)

# %% The stability probe compares edge deficit with blowup distance.
g = balanced_blowup(3, 2, 9)
print(stability_probe(g.without_edges(g.edges[:2]), 3, 1.0, 0.1).to_dict())
