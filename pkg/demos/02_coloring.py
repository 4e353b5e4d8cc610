"""Strong colorings, criticality and spike certificates."""

# %%
from hypext import (
    check_phi,
    complete,
    critical_edges,
    edgeless,
    enumerate_link_families,
    expansion,
    extension,
    is_sharply_critical,
    is_t_spike,
    path,
    strong_coloring,
)

# %% A strong t-coloring gives every edge r distinct colors (colors are 0-based).
print("K_5^(3) with 5 colors:", strong_coloring(complete(5, 3), 5))
print("K_3 with 2 colors:", strong_coloring(complete(3, 2), 2))

# %% Ext(T) is not 3-colorable, but deleting a new edge makes it colorable.
ext = extension(expansion(path(3), 3))
print("Ext(T) 3-colorable:", strong_coloring(ext, 3) is not None)
print("critical edges for t = 3:", critical_edges(ext, 3))

# %% The link families that the spike test must realize.
for S in enumerate_link_families(3, 3):
    print("qualifying link family:", S)

# %% A spike report lists free and critical vertices and one coloring per family.
rep = is_t_spike(ext, (0, 2, 4), 0, 3)
print("spike verdict:", rep.verdict, "free:", rep.free_vertices, "critical:", rep.critical_vertices)
for S, phi in rep.phi.items():
    print("  family", S, "coloring", phi, "valid:", check_phi(ext, 0, 3, S, phi))

# %% Search all edges and vertices for a sharp-criticality witness.
for t in (3, 4):
    found = is_sharply_critical(extension(edgeless(t + 1, 3)), t)
    print(f"Ext of edgeless 3-graph on {t + 1} vertices, t = {t}:", found[:2] if found else None)
print("K_4^(3), t = 4:", is_sharply_critical(complete(4, 3), 4))
