"""Building hypergraphs: expansions, extensions, padding and blowups."""

# %%
from hypext import (
    add_isolated,
    balanced_blowup,
    canonical_form,
    complete,
    covers_pairs,
    dumps,
    expansion,
    extension,
    is_isomorphic,
    path,
    weak_extensions,
)

# %% The 3-uniform expansion of a path on three vertices: each graph edge
# gets one new vertex of its own.
T = expansion(path(3), 3)
print("T:", T.n, "vertices", T.edges)

# %% Ext adds a fresh vertex y for every uncovered pair {a, b} and the edge
# {a, b, y}. Pairs are uncovered when no edge contains both.
ext = extension(T)
print("Ext(T):", ext.n, "vertices,", len(ext), "edges, covers all pairs:", covers_pairs(ext))

# %% Weak extensions let the new edges share fresh vertices; the family is
# reported up to isomorphism.
wext = list(weak_extensions(T))
print("WExt(T) has", len(wext), "members with edge counts", [len(w) for w in wext])

# %% Padding with isolated vertices, then extending, gives a pair-covering graph.
padded = extension(add_isolated(complete(4, 3), 6))
print("Ext(K_4^(3) + 2 isolated):", padded.n, "vertices,", len(padded), "edges")

# %% Balanced complete blowups and canonical forms.
b = balanced_blowup(4, 3, 8)
print("balanced 4-partite 3-graph on 8 vertices:", len(b), "edges")
shuffled = b.relabel([7, 3, 5, 1, 6, 2, 4, 0])
print("relabelled copy isomorphic:", is_isomorphic(b, shuffled))
print("same canonical form:", canonical_form(b) == canonical_form(shuffled))

# %% Graphs serialize to a small JSON document.
print(dumps(T))
