"""Densities, Lagrangians and the threshold function f."""

# %%
import numpy as np

from hypext import complete, density, f, lagrangian, monotone_threshold, sidolem_probe, vertex_density

# %% Density of a weighting: the sum over edges of the product of weights.
k4 = complete(4, 3)
print("density of K_4^(3) at uniform weights:", density(k4, [0.25] * 4))
print("vertex density of vertex 0:", vertex_density(k4, [0.25] * 4, 0))

# %% The Lagrangian is the maximum density over the simplex. The ascent mode
# uses multiplicative updates; the certified mode enumerates supports.
for t, r in ((4, 2), (5, 3), (6, 3)):
    a = lagrangian(complete(t, r), seed=1)
    c = lagrangian(complete(t, r), certify=True)
    print(f"K_{t}^({r}): ascent {a.value:.10f}  certified {c.value:.10f}  kkt residual {a.kkt_residual:.1e}")

# %% The function f and where it becomes decreasing in x.
print("f(3, 10, x) for x = 4..8:", np.round([f(3, 10, x) for x in range(4, 9)], 6))
rep = monotone_threshold(3, 10, 4, 100)
print("decreasing from x =", rep.threshold, "| tail decreasing:", rep.decreasing_tail)

# %% A probe of the local inequality around a heavy vertex.
print(sidolem_probe(complete(3, 2), [1 / 3] * 3, 0, 0.3).to_dict())
