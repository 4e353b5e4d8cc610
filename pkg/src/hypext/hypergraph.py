"""Uniform hypergraphs on vertices ``0..n-1``.

A :class:`HyperGraph` is immutable; every operation that changes the edge set
returns a new instance. Edges are stored as sorted tuples in a sorted tuple,
so iteration order is deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations, product
from typing import Iterable, Sequence

from .canon import CanonicalCertificate, canonical_certificate, canonical_with_automorphisms
from .errors import GraphParseError, InvalidArgument

Edge = tuple


@dataclass(frozen=True)
class HyperGraph:
    r: int
    n: int
    edges: tuple = ()

    def __post_init__(self):
        if self.r < 1:
            raise InvalidArgument(f"uniformity must be positive, got {self.r}")
        if self.n < 0:
            raise InvalidArgument(f"vertex count must be nonnegative, got {self.n}")
        norm = set()
        for e in self.edges:
            e = tuple(sorted(e))
            if len(e) != self.r or len(set(e)) != self.r:
                raise InvalidArgument(f"edge {e} does not have {self.r} distinct vertices")
            if e[0] < 0 or e[-1] >= self.n:
                raise InvalidArgument(f"edge {e} has a vertex outside 0..{self.n - 1}")
            if e in norm:
                raise InvalidArgument(f"duplicate edge {e}")
            norm.add(e)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, edge):
        return tuple(sorted(edge)) in self.edge_set

    @property
    def vertices(self):
        return range(self.n)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @cached_property
    def incidence(self) -> tuple:
        inc = [[] for _ in range(self.n)]
        for e in self.edges:
            for v in e:
                inc[v].append(e)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def degrees(self) -> tuple:
        return tuple(len(x) for x in self.incidence)

    @cached_property
    def neighbors(self) -> tuple:
        """Vertices sharing at least one edge with each vertex (the 2-shadow)."""
        nb = [set() for _ in range(self.n)]
        for e in self.edges:
            for v in e:
                nb[v].update(e)
        for v in range(self.n):
            nb[v].discard(v)
        return tuple(frozenset(x) for x in nb)

    @cached_property
    def _seed_edges(self) -> tuple:
        # one edge per automorphism orbit, enough to seed rooted embeddings
        _, gens = canonical_with_automorphisms(self.r, self.n, self.edges)
        reps, seen = [], set()
        for e in self.edges:
            if e in seen:
                continue
            reps.append(e)
            orbit, todo = {e}, [e]
            while todo:
                f = todo.pop()
                for g in gens:
                    h = tuple(sorted(g[x] for x in f))
                    if h not in orbit:
                        orbit.add(h)
                        todo.append(h)
            seen |= orbit
        return tuple(reps)

    @cached_property
    def _plans(self) -> dict:
        return {}

    def with_edges(self, edges: Iterable) -> "HyperGraph":
        return HyperGraph(self.r, self.n, tuple(self.edges) + tuple(tuple(sorted(e)) for e in edges))

    def without_edges(self, edges: Iterable) -> "HyperGraph":
        drop = {tuple(sorted(e)) for e in edges}
        missing = drop - self.edge_set
        if missing:
            raise InvalidArgument(f"edges not present: {sorted(missing)}")
        return HyperGraph(self.r, self.n, tuple(e for e in self.edges if e not in drop))

    def remove_vertex(self, v: int) -> "HyperGraph":
        """Delete ``v`` and its edges; vertices above ``v`` shift down by one."""
        self._check_vertex(v)
        shift = lambda x: x - 1 if x > v else x
        return HyperGraph(self.r, self.n - 1, tuple(tuple(shift(x) for x in e) for e in self.edges if v not in e))

    def induced(self, vertices: Sequence[int]) -> "HyperGraph":
        """Subgraph induced on ``vertices``, relabeled to ``0..k-1`` in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        if len(pos) != len(vertices):
            raise InvalidArgument("repeated vertex in induced subgraph request")
        for v in vertices:
            self._check_vertex(v)
        return HyperGraph(
            self.r, len(vertices), tuple(tuple(pos[x] for x in e) for e in self.edges if all(x in pos for x in e))
        )

    def relabel(self, perm: Sequence[int]) -> "HyperGraph":
        """Image under the vertex permutation ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise InvalidArgument("relabeling is not a permutation of the vertex set")
        return HyperGraph(self.r, self.n, tuple(tuple(perm[x] for x in e) for e in self.edges))

    def non_edges(self):
        es = self.edge_set
        return [e for e in combinations(range(self.n), self.r) if e not in es]

    def _check_vertex(self, v):
        if not (0 <= v < self.n):
            raise InvalidArgument(f"vertex {v} not in 0..{self.n - 1}")

    def __repr__(self):
        return f"HyperGraph(r={self.r}, n={self.n}, edges={list(self.edges)})"


class Family:
    """Finite family of r-graphs, deduplicated up to isomorphism."""

    def __init__(self, members: Iterable[HyperGraph], dedup: bool = True):
        members = list(members)
        rs = {g.r for g in members}
        if len(rs) > 1:
            raise InvalidArgument(f"family mixes uniformities {sorted(rs)}")
        if dedup:
            seen = {}
            for g in members:
                seen.setdefault(canonical_form(g).key(), g)
            members = list(seen.values())
        self.members = tuple(members)

    @property
    def r(self):
        return self.members[0].r if self.members else None

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def digest(self):
        """Order-independent description: sorted canonical edge lists."""
        return sorted([c.r, c.n, [list(e) for e in c.edges]] for c in map(canonical_form, self.members))

    def __repr__(self):
        return f"Family({list(self.members)})"


def link(g: HyperGraph, subset: Iterable[int]) -> set:
    """All sets J disjoint from ``subset`` with ``subset | J`` an edge of ``g``."""
    I = frozenset(subset)
    if not I or len(I) >= g.r:
        raise InvalidArgument(f"link needs 1 <= |I| < r={g.r}, got |I|={len(I)}")
    for v in I:
        g._check_vertex(v)
    v0 = next(iter(I))
    return {tuple(x for x in e if x not in I) for e in g.incidence[v0] if I.issubset(e)}


def covered_pairs(g: HyperGraph) -> set:
    pairs = set()
    for e in g.edges:
        pairs.update(combinations(e, 2))
    return pairs


def uncovered_pairs(g: HyperGraph) -> list:
    cov = covered_pairs(g)
    return [p for p in combinations(range(g.n), 2) if p not in cov]


def covers_pairs(g: HyperGraph) -> bool:
    return len(covered_pairs(g)) == g.n * (g.n - 1) // 2


def canonical_form(g: HyperGraph) -> CanonicalCertificate:
    return canonical_certificate(g.r, g.n, g.edges)


def is_isomorphic(g1: HyperGraph, g2: HyperGraph) -> bool:
    if (g1.r, g1.n, len(g1), sorted(g1.degrees)) != (g2.r, g2.n, len(g2), sorted(g2.degrees)):
        return False
    return canonical_form(g1) == canonical_form(g2)


def symmetric_difference_size(g1: HyperGraph, g2: HyperGraph) -> int:
    if (g1.r, g1.n) != (g2.r, g2.n):
        raise InvalidArgument(f"need equal (r, n), got {(g1.r, g1.n)} and {(g2.r, g2.n)}")
    return len(g1.edge_set ^ g2.edge_set)


def _embedding_order(pattern: HyperGraph, placed: list):
    """Greedy most-constrained order of the non-isolated pattern vertices."""
    order = list(placed)
    inside = set(order)
    remaining = {v for v in range(pattern.n) if pattern.degrees[v] > 0 and v not in inside}
    while remaining:
        def score(v):
            links = sum(1 for e in pattern.incidence[v] if any(x in inside for x in e))
            return (links, pattern.degrees[v], -v)

        v = max(remaining, key=score)
        order.append(v)
        inside.add(v)
        remaining.discard(v)
    return order


def find_embedding(host: HyperGraph, pattern: HyperGraph, through_edge=None):
    """Injective map of pattern vertices into host vertices carrying every
    pattern edge onto a host edge, or ``None``.

    With ``through_edge`` the search only returns embeddings whose image uses
    that host edge, which is how incremental freeness checks stay cheap.
    """
    if host.r != pattern.r:
        raise InvalidArgument(f"uniformity mismatch: host r={host.r}, pattern r={pattern.r}")
    if pattern.n > host.n or len(pattern) > len(host):
        return None
    if through_edge is not None:
        through_edge = tuple(sorted(through_edge))
        if through_edge not in host.edge_set:
            raise InvalidArgument(f"edge {through_edge} is not in the host")
        seeds = list(_rooted_seeds(pattern, through_edge))
    else:
        seeds = [{}]

    for seed in seeds:
        if any(host.degrees[h] < pattern.degrees[p] for p, h in seed.items()):
            continue
        phi = _extend(host, pattern, seed)
        if phi is not None:
            return phi
    return None


def _plan(pattern, placed):
    key = tuple(placed)
    plan = pattern._plans.get(key)
    if plan is not None:
        return plan
    order = _embedding_order(pattern, list(placed))
    pos = {v: i for i, v in enumerate(order)}
    checks = [[] for _ in order]
    anchor = [None] * len(order)
    for e in pattern.edges:
        last = max(e, key=pos.__getitem__)
        checks[pos[last]].append(e)
    for i, v in enumerate(order):
        for e in pattern.incidence[v]:
            for x in e:
                if x != v and pos[x] < i and (anchor[i] is None or pos[x] < pos[anchor[i]]):
                    anchor[i] = x
    plan = pattern._plans[key] = (order, checks, anchor)
    return plan


def _extend(host, pattern, seed):
    return _match(host.edge_set, host.neighbors, host.degrees, host.n, pattern, seed)


def _match(host_edges, host_nbrs, hdeg, host_n, pattern, seed):
    """Extend ``seed`` to an embedding into the host given by raw structures:
    its edge set, 2-shadow neighbor sets and degrees."""
    order, checks, anchor = _plan(pattern, sorted(seed))
    k0 = len(seed)
    phi = dict(seed)
    used = set(seed.values())
    for i in range(k0):
        for e in checks[i]:
            if tuple(sorted(phi[x] for x in e)) not in host_edges:
                return None
    all_vertices = range(host_n)
    pdeg = pattern.degrees

    def rec(i):
        if i == len(order):
            return True
        p = order[i]
        cands = host_nbrs[phi[anchor[i]]] if anchor[i] is not None else all_vertices
        need = pdeg[p]
        for h in cands:
            if h in used or hdeg[h] < need:
                continue
            phi[p] = h
            if all(tuple(sorted(phi[x] for x in e)) in host_edges for e in checks[i]):
                used.add(h)
                if rec(i + 1):
                    return True
                used.discard(h)
            del phi[p]
        return False

    if not rec(k0):
        return None
    free = (h for h in range(host_n) if h not in used)
    for p in range(pattern.n):
        if p not in phi:
            phi[p] = next(free)
    return phi


def _rooted_seeds(pattern, edge):
    seen = set()
    for pe in pattern._seed_edges:
        for image in permutations(edge):
            key = tuple(zip(pe, image))
            if key not in seen:
                seen.add(key)
                yield dict(key)


def _copy_through(host_edges, host_nbrs, hdeg, host_n, pattern, edge) -> bool:
    """True if some copy of ``pattern`` in the raw host uses ``edge``."""
    if pattern.n > host_n:
        return False
    for seed in _rooted_seeds(pattern, edge):
        if any(hdeg[h] < pattern.degrees[p] for p, h in seed.items()):
            continue
        if _match(host_edges, host_nbrs, hdeg, host_n, pattern, seed) is not None:
            return True
    return False


def contains_subgraph(host: HyperGraph, pattern: HyperGraph) -> bool:
    return find_embedding(host, pattern) is not None


def is_family_free(g: HyperGraph, family: Iterable[HyperGraph]) -> bool:
    return not any(contains_subgraph(g, f) for f in family)


def clone_vertex(g: HyperGraph, v: int, copies: int) -> HyperGraph:
    """Replace ``v`` by ``copies`` vertices with the same link.

    The first clone keeps index ``v``; further clones are appended as
    ``n, n+1, ...``. ``copies == 0`` deletes ``v`` (indices above shift down).
    """
    g._check_vertex(v)
    if copies < 0:
        raise InvalidArgument("copies must be nonnegative")
    if copies == 0:
        return g.remove_vertex(v)
    new = list(g.edges)
    for j in range(1, copies):
        w = g.n + j - 1
        new.extend(tuple(w if x == v else x for x in e) for e in g.incidence[v])
    return HyperGraph(g.r, g.n + copies - 1, tuple(new))


def blowup(g: HyperGraph, sizes: Sequence[int]) -> tuple:
    """Blow vertex ``v`` up into ``sizes[v]`` clones.

    Returns ``(graph, origin)`` where ``origin[w]`` is the vertex of ``g`` that
    ``w`` is a clone of. Clones of the same vertex are numbered consecutively.
    """
    if len(sizes) != g.n or any(s < 0 for s in sizes):
        raise InvalidArgument("need one nonnegative size per vertex")
    origin = [v for v in range(g.n) for _ in range(sizes[v])]
    first = []
    k = 0
    for s in sizes:
        first.append(k)
        k += s
    new = []
    for e in g.edges:
        ranges = [range(first[x], first[x] + sizes[x]) for x in e]
        new.extend(product(*ranges))
    return HyperGraph(g.r, len(origin), tuple(new)), tuple(origin)


# --- JSON -----------------------------------------------------------------


def graph_to_dict(g: HyperGraph, labels=None) -> dict:
    out = {"r": g.r, "n": g.n, "edges": [list(e) for e in g.edges]}
    if labels is not None:
        out["labels"] = list(labels)
    return out


def graph_from_dict(obj, path="$") -> HyperGraph:
    """Strict parser for ``{"r": int, "n": int, "edges": [[int, ...], ...]}``."""
    if not isinstance(obj, dict):
        raise GraphParseError("expected an object", path)
    for key in ("r", "n", "edges"):
        if key not in obj:
            raise GraphParseError(f"missing key {key!r}", path)
    r, n, edges = obj["r"], obj["n"], obj["edges"]
    for key, val in (("r", r), ("n", n)):
        if not isinstance(val, int) or isinstance(val, bool):
            raise GraphParseError("expected an integer", f"{path}.{key}")
    if r < 1:
        raise GraphParseError("uniformity must be positive", f"{path}.r")
    if n < 0:
        raise GraphParseError("vertex count must be nonnegative", f"{path}.n")
    if not isinstance(edges, list):
        raise GraphParseError("expected an array", f"{path}.edges")
    seen = {}
    for i, e in enumerate(edges):
        where = f"{path}.edges[{i}]"
        if not isinstance(e, list):
            raise GraphParseError("expected an array", where)
        if len(e) != r:
            raise GraphParseError(f"edge has {len(e)} vertices, expected {r}", where)
        for j, x in enumerate(e):
            if not isinstance(x, int) or isinstance(x, bool):
                raise GraphParseError("expected an integer vertex", f"{where}[{j}]")
            if not 0 <= x < n:
                raise GraphParseError(f"vertex {x} out of range 0..{n - 1}", f"{where}[{j}]")
        if any(e[j] >= e[j + 1] for j in range(len(e) - 1)):
            raise GraphParseError("edge vertices must be strictly ascending", where)
        t = tuple(e)
        if t in seen:
            raise GraphParseError(f"duplicate of edge {seen[t]}", where)
        seen[t] = i
    if "labels" in obj:
        labels = obj["labels"]
        if not isinstance(labels, list) or len(labels) != n or not all(isinstance(x, str) for x in labels):
            raise GraphParseError(f"expected {n} string labels", f"{path}.labels")
    return HyperGraph(r, n, tuple(tuple(e) for e in edges))


def labels_from_dict(obj) -> list | None:
    labels = obj.get("labels") if isinstance(obj, dict) else None
    return list(labels) if labels is not None else None


def dumps(g: HyperGraph, labels=None) -> str:
    return json.dumps(graph_to_dict(g, labels))


def loads(text: str) -> HyperGraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from exc
    return graph_from_dict(obj)


def family_from_obj(obj, path="$") -> Family:
    """Accepts a single graph object, a list of them, or ``{"members": [...]}``."""
    if isinstance(obj, dict) and "members" in obj:
        obj, path = obj["members"], f"{path}.members"
    if isinstance(obj, dict):
        return Family([graph_from_dict(obj, path)])
    if not isinstance(obj, list) or not obj:
        raise GraphParseError("expected a non-empty array of graphs", path)
    return Family([graph_from_dict(x, f"{path}[{i}]") for i, x in enumerate(obj)])


def family_to_obj(fam: Family) -> dict:
    return {"members": [graph_to_dict(g) for g in fam]}
