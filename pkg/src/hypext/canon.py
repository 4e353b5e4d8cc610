"""Canonical labeling of uniform hypergraphs.

Individualization-refinement: vertex colorings are refined by the multiset of
colors seen through incident edges, non-discrete cells are split by
individualizing one vertex at a time, and the lexicographically smallest
relabeled edge list over all leaves is the certificate. Automorphisms found at
leaves prune sibling branches in the same orbit and trigger the usual jump
back to the node where the automorphic leaf branched off.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations


@dataclass(frozen=True)
class CanonicalCertificate:
    """Isomorphism-invariant certificate.

    ``relabeling[v]`` is the canonical label of vertex ``v``; it is not part of
    equality, since isomorphic graphs may be relabeled differently.
    """

    r: int
    n: int
    edges: tuple
    relabeling: tuple = field(default=(), compare=False)

    def key(self):
        return (self.r, self.n, self.edges)


def _refine(n, inc, colors):
    # colors are cell start positions of an ordered partition; a cell's
    # vertices always occupy positions [start, start + size)
    while True:
        keys = [
            (colors[v], tuple(sorted(tuple(sorted(colors[u] for u in others)) for others in inc[v])))
            for v in range(n)
        ]
        order = sorted(range(n), key=keys.__getitem__)
        new = [0] * n
        start = 0
        for i, v in enumerate(order):
            if i and keys[v] != keys[order[i - 1]]:
                start = i
            new[v] = start
        if new == colors:
            return new
        colors = new


def _individualize(colors, v):
    s = colors[v]
    out = [c + 1 if c == s and u != v else c for u, c in enumerate(colors)]
    return out


def _relabeled(edges, labels):
    return tuple(sorted(tuple(sorted(labels[x] for x in e)) for e in edges))


class _Search:
    def __init__(self, n, edges):
        self.n = n
        self.edges = edges
        inc = [[] for _ in range(n)]
        for e in edges:
            for v in e:
                inc[v].append(tuple(u for u in e if u != v))
        self.inc = inc
        self.first = None
        self.best = None
        self.generators = []
        self.leaves = 0

    def run(self):
        root = _refine(self.n, self.inc, [0] * self.n)
        self._visit(root, [])
        return self.best

    def _orbit_rep(self, path):
        fixing = [g for g in self.generators if all(g[p] == p for p in path)]
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in fixing:
            for v in range(self.n):
                a, b = find(v), find(g[v])
                if a != b:
                    parent[max(a, b)] = min(a, b)
        return find

    def _automorphism(self, colors, other):
        # maps v to the vertex carrying the same label in ``other``
        where = [0] * self.n
        for v, c in enumerate(other):
            where[c] = v
        return tuple(where[colors[v]] for v in range(self.n))

    def _visit(self, colors, path):
        n = self.n
        cells = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = min((c for c, vs in cells.items() if len(vs) > 1), default=None)
        if target is None:
            self.leaves += 1
            cert = _relabeled(self.edges, colors)
            if self.first is None:
                self.first = self.best = (colors, cert, path)
                return None
            for ref in (self.first, self.best):
                if cert == ref[1]:
                    self.generators.append(self._automorphism(colors, ref[0]))
                    common = 0
                    for a, b in zip(path, ref[2]):
                        if a != b:
                            break
                        common += 1
                    return common
            if cert < self.best[1]:
                self.best = (colors, cert, path)
            return None
        depth = len(path)
        explored = []
        find = None
        for v in sorted(cells[target]):
            if explored:
                if find is None or len(self.generators) != gens_seen:
                    find = self._orbit_rep(path)
                    gens_seen = len(self.generators)
                if any(find(v) == find(w) for w in explored):
                    continue
            explored.append(v)
            child = _refine(n, self.inc, _individualize(colors, v))
            ret = self._visit(child, path + [v])
            if ret is not None and ret < depth:
                return ret
        return None


def canonical_certificate(r, n, edges):
    """Certificate for the r-graph on ``range(n)`` with the given edges."""
    return canonical_with_automorphisms(r, n, edges)[0]


def canonical_with_automorphisms(r, n, edges):
    """Certificate plus a list of automorphisms (as vertex maps) that
    generate the full automorphism group."""
    edges = tuple(edges)
    if n == 0:
        return CanonicalCertificate(r, 0, (), ()), []
    search = _Search(n, edges)
    colors, cert, _ = search.run()
    return CanonicalCertificate(r, n, cert, tuple(colors)), list(search.generators)


def brute_force_certificate(r, n, edges):
    """Minimum relabeled edge list over all n! permutations (small n only)."""
    best = None
    best_perm = ()
    for perm in permutations(range(n)):
        cert = _relabeled(edges, perm)
        if best is None or cert < best:
            best, best_perm = cert, perm
    return CanonicalCertificate(r, n, best if best is not None else (), best_perm)
