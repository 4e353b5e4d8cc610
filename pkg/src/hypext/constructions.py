"""Builders for the named graphs and graph operators."""

from __future__ import annotations

from itertools import combinations, product

from .errors import InvalidArgument, ResourceLimit
from .hypergraph import Family, HyperGraph, uncovered_pairs

WEXT_LIMIT = 10_000


def complete(t: int, r: int) -> HyperGraph:
    if t < 0:
        raise InvalidArgument("t must be nonnegative")
    return HyperGraph(r, t, tuple(combinations(range(t), r)))


def edgeless(t: int, r: int) -> HyperGraph:
    if t < 0:
        raise InvalidArgument("t must be nonnegative")
    return HyperGraph(r, t, ())


def path(k: int) -> HyperGraph:
    """The 2-graph path 0-1-...-(k-1)."""
    return HyperGraph(2, k, tuple((i, i + 1) for i in range(k - 1)))


def star(leaves: int) -> HyperGraph:
    """K_{1,leaves} with hub 0."""
    return HyperGraph(2, leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def balanced_parts(t: int, n: int) -> list:
    """Part sizes floor(n/t) or ceil(n/t), larger parts first."""
    q, rem = divmod(n, t)
    return [q + 1] * rem + [q] * (t - rem)


def complete_multipartite(parts, r: int) -> HyperGraph:
    """Transversal r-sets over consecutive blocks of the given sizes."""
    block = []
    for i, size in enumerate(parts):
        block.extend([i] * size)
    n = len(block)
    return HyperGraph(r, n, tuple(e for e in combinations(range(n), r) if len({block[x] for x in e}) == r))


def balanced_blowup(t: int, r: int, n: int) -> HyperGraph:
    if t < r:
        raise InvalidArgument(f"balanced blowup needs t >= r, got t={t}, r={r}")
    if n < 0:
        raise InvalidArgument("n must be nonnegative")
    return complete_multipartite(balanced_parts(t, n), r)


def blowup_partition(parts) -> list:
    """Vertex -> part index for :func:`complete_multipartite` numbering."""
    return [i for i, size in enumerate(parts) for _ in range(size)]


def extension(g: HyperGraph) -> HyperGraph:
    """Add an edge through every uncovered pair, padded with r-2 fresh vertices.

    Fresh vertices are appended in pair-lexicographic order.
    """
    if g.r < 2:
        raise InvalidArgument("extension needs r >= 2")
    k = g.r - 2
    nxt = g.n
    added = []
    for a, b in uncovered_pairs(g):
        added.append((a, b) + tuple(range(nxt, nxt + k)))
        nxt += k
    return HyperGraph(g.r, nxt, g.edges + tuple(added))


def _fresh_labelings(slot_edges, share):
    """Label fresh slots; ``slot_edges[i]`` is the added edge slot i belongs to.

    Without sharing each slot gets its own fresh vertex. With sharing, labels
    follow restricted growth (first use of a label is in increasing order) and
    two slots of the same added edge never share a label.
    """
    m = len(slot_edges)
    if not share:
        yield list(range(m))
        return
    labels = [0] * m

    def rec(i, top):
        if i == m:
            yield list(labels)
            return
        taken = {labels[j] for j in range(i) if slot_edges[j] == slot_edges[i]}
        for lab in range(top + 1):
            if lab in taken:
                continue
            labels[i] = lab
            yield from rec(i + 1, max(top, lab + 1))

    yield from rec(0, 0)


def weak_extensions(g: HyperGraph, share_fresh: bool = True, limit: int = WEXT_LIMIT) -> Family:
    """All weak extensions of ``g`` up to isomorphism.

    Every uncovered pair receives one edge whose other r-2 vertices are any mix
    of existing vertices and fresh ones. With ``share_fresh`` a fresh vertex may
    serve several added edges, and identical added edges collapse into one.
    ``limit`` caps the number of graphs generated before deduplication.
    """
    if g.r < 2:
        raise InvalidArgument("weak extensions need r >= 2")
    k = g.r - 2
    pairs = uncovered_pairs(g)
    options = []
    for a, b in pairs:
        rest = [v for v in range(g.n) if v not in (a, b)]
        opts = []
        for j in range(k + 1):
            for chosen in combinations(rest, j):
                opts.append(((a, b) + chosen, k - j))
        options.append(opts)

    generated = 0
    members = []
    for choice in product(*options):
        slot_edges = [i for i, (_, m) in enumerate(choice) for _ in range(m)]
        for labels in _fresh_labelings(slot_edges, share_fresh):
            generated += 1
            if generated > limit:
                raise ResourceLimit(f"weak extension enumeration exceeds {limit} graphs", bound=limit)
            fresh = iter(labels)
            added = set()
            for base, m in choice:
                added.add(tuple(sorted(base + tuple(g.n + next(fresh) for _ in range(m)))))
            n_new = g.n + (max(labels) + 1 if labels else 0)
            members.append(HyperGraph(g.r, n_new, g.edges + tuple(sorted(added))))
    if not members:
        members = [g]
    return Family(members)


def expansion(g2: HyperGraph, r: int) -> HyperGraph:
    """Enlarge every edge of a 2-graph by the same r-2 fresh vertices."""
    if g2.r != 2:
        raise InvalidArgument(f"expansion takes a 2-graph, got r={g2.r}")
    if r < 2:
        raise InvalidArgument("r must be at least 2")
    shared = tuple(range(g2.n, g2.n + r - 2))
    return HyperGraph(r, g2.n + r - 2, tuple(e + shared for e in g2.edges))


def add_isolated(g: HyperGraph, t: int) -> HyperGraph:
    """Pad with isolated vertices up to ``t`` vertices in total."""
    if t < g.n:
        raise InvalidArgument(f"cannot pad {g.n} vertices down to {t}")
    return HyperGraph(g.r, t, g.edges)
