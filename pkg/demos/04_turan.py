"""Exact Turán numbers by orderly search, with budgets and checkpoints."""

# %%
import os
import tempfile

from hypext import (
    Budget,
    balanced_blowup,
    brute_force_turan,
    complete,
    expansion,
    extension,
    max_blowup_edges,
    path,
    turan_number,
    verify_extremal_claim,
)

# %% Mantel and Turán for small n, checked against a brute-force enumeration.
for n in range(3, 8):
    rep = turan_number(n, [complete(3, 2)])
    print(f"ex({n}, K_3) = {rep.ex_value}, unique extremal: {rep.unique}")
print("brute force at n = 5:", brute_force_turan(5, [complete(3, 2)])[0])

# %% A node budget stops early and reports a lower bound with a witness.
ck = os.path.join(tempfile.mkdtemp(), "search.json")
partial = turan_number(7, [complete(4, 2)], budget=Budget(max_nodes=10), checkpoint=ck)
print("budgeted:", partial.ex_value, "exact:", partial.exact, "reason:", partial.stop_reason)
resumed = turan_number(7, [complete(4, 2)], checkpoint=ck)
print("resumed from checkpoint:", resumed.ex_value, "exact:", resumed.exact)

# %% The most edges a complete t-partite r-graph on n vertices can have.
rep = max_blowup_edges(4, 3, 8)
print("best parts for t=4, r=3, n=8:", rep.parts, "edges:", rep.value)

# %% Compare a candidate extremal graph with the exact answer. For the path
# expansion at n = 6 the balanced blowup is not extremal.
v = verify_extremal_claim(6, [extension(expansion(path(3), 3))], balanced_blowup(3, 3, 6))
print("candidate free:", v.candidate_free, "ex:", v.ex_value, "strictly beaten:", v.strictly_beaten)
