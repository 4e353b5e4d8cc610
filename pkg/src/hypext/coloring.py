"""Strong colorings, criticality and spike detection.

A strong t-coloring gives the r vertices of every edge r different colors, so
it is exactly a proper coloring of the 2-shadow. Colors are ``0..t-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional

from .canon import canonical_certificate
from .errors import InvalidArgument, ResourceLimit
from .hypergraph import HyperGraph, link

MAX_SPIKE_T = 12
MAX_LINK_GROUND = 24


def _solve(n, nbrs, t, active, groups=(), group_ok=None, symmetric=True):
    """Backtracking coloring of ``active`` vertices.

    ``nbrs[v]`` must receive colors different from ``v``. Each entry of
    ``groups`` is a vertex tuple whose (partial) color set is accepted by
    ``group_ok``. Vertices are picked by fewest remaining colors, then most
    constraints. With ``symmetric`` the colors are interchangeable and only
    one unused color is ever tried.
    """
    colors = [-1] * n
    in_groups = [[] for _ in range(n)]
    for gi, grp in enumerate(groups):
        for v in grp:
            in_groups[v].append(gi)
    active = list(active)
    full = (1 << t) - 1
    blocked = [0] * n
    weight = [len(nbrs[v]) + len(in_groups[v]) for v in range(n)]

    def group_fine(v):
        for gi in in_groups[v]:
            got = [colors[x] for x in groups[gi] if colors[x] >= 0]
            if not group_ok(frozenset(got)):
                return False
        return True

    def rec(left, top):
        if not left:
            return True
        best, best_key = None, None
        for v in left:
            free = bin(full & ~blocked[v]).count("1")
            key = (free, -weight[v], v)
            if best_key is None or key < best_key:
                best, best_key = v, key
            if free == 0:
                return False
        v = best
        rest = [u for u in left if u != v]
        allowed = full & ~blocked[v]
        limit = min(t, top + 1) if symmetric else t
        for c in range(limit):
            if not allowed >> c & 1:
                continue
            colors[v] = c
            if groups and not group_fine(v):
                colors[v] = -1
                continue
            touched = [u for u in nbrs[v] if colors[u] < 0 and not blocked[u] >> c & 1]
            for u in touched:
                blocked[u] |= 1 << c
            if rec(rest, max(top, c + 1)):
                return True
            for u in touched:
                blocked[u] &= ~(1 << c)
            colors[v] = -1
        return False

    if not rec(active, 0):
        return None
    return colors


def strong_coloring(g: HyperGraph, t: int) -> Optional[dict]:
    """A strong t-coloring ``{vertex: color}`` or ``None`` if none exists."""
    if t < 1:
        raise InvalidArgument("t must be at least 1")
    if g.edges and g.r > t:
        return None
    active = [v for v in range(g.n) if g.degrees[v]]
    colors = _solve(g.n, g.neighbors, t, active)
    if colors is None:
        return None
    return {v: max(c, 0) for v, c in enumerate(colors)}


is_strongly_colorable = strong_coloring


def is_strong_coloring(g: HyperGraph, coloring: dict, t: int) -> bool:
    """Independent check that every edge gets r distinct colors in ``0..t-1``."""
    if any(not 0 <= coloring.get(v, -1) < t for v in range(g.n)):
        return False
    return all(len({coloring[x] for x in e}) == g.r for e in g.edges)


def critical_edges(g: HyperGraph, t: int) -> Optional[tuple]:
    """Edges whose removal makes ``g`` strongly t-colorable.

    ``None`` when ``g`` is already strongly t-colorable or no single deletion
    suffices, i.e. when ``g`` is not t-critical.
    """
    if strong_coloring(g, t) is not None:
        return None
    crit = tuple(e for e in g.edges if strong_coloring(g.without_edges([e]), t) is not None)
    return crit or None


is_t_critical = critical_edges


def _free_vertices(g, F):
    return tuple(x for x in F if g.degrees[x] == 1)


def _critical_vertices(g, F):
    """Vertices of F that can play the critical role: some r-2 degree-one
    vertices of F other than it exist."""
    free = set(_free_vertices(g, F))
    return tuple(x for x in F if len(free - {x}) >= g.r - 2)


def _check_edge(g, F):
    F = tuple(sorted(F))
    if F not in g.edge_set:
        raise InvalidArgument(f"{F} is not an edge")
    return F


def is_freely_critical(g: HyperGraph, F, t: int) -> bool:
    F = _check_edge(g, F)
    if len(_free_vertices(g, F)) < g.r - 2:
        return False
    return strong_coloring(g, t) is None and strong_coloring(g.without_edges([F]), t) is not None


def _is_complete_minus_vertex(S, t, k):
    """True if S is the set of all k-subsets of [t] minus one vertex."""
    return len(S) == comb(t - 1, k) and len(set().union(*S)) <= t - 1


def enumerate_link_families(t: int, r: int, up_to_iso: bool = True, limit: int = 200_000) -> list:
    """(r-1)-graphs on ``range(t)`` with at least C(t-1, r-1) edges that are not
    a complete (r-1)-graph on t-1 of the vertices.

    Families are returned as sorted tuples of sorted (r-1)-tuples, largest
    families first. With ``up_to_iso`` one representative per isomorphism
    class is kept.
    """
    k = r - 1
    if k < 1 or k > t:
        return []
    ground = list(combinations(range(t), k))
    if len(ground) > MAX_LINK_GROUND:
        raise ResourceLimit(f"C({t},{k}) = {len(ground)} exceeds {MAX_LINK_GROUND}", bound=MAX_LINK_GROUND)
    need = comb(t - 1, k)
    out = []
    seen = set()
    count = 0
    for drop in range(len(ground) - need + 1):
        for removed in combinations(range(len(ground)), drop):
            count += 1
            if count > limit:
                raise ResourceLimit(f"link family enumeration exceeds {limit}", bound=limit)
            rm = set(removed)
            S = tuple(ground[i] for i in range(len(ground)) if i not in rm)
            if _is_complete_minus_vertex(S, t, k):
                continue
            if up_to_iso:
                key = canonical_certificate(k, t, S).key()
                if key in seen:
                    continue
                seen.add(key)
            out.append(S)
    return out


@dataclass
class SpikeReport:
    """Outcome of the spike test for ``(graph, edge, vertex)`` at ``t`` colors.

    ``condition_iii`` is ``None`` when it was skipped because (i) or (ii)
    already failed. ``phi`` maps each link family (as a tuple of color tuples)
    to a witnessing map ``vertex -> color``; ``failing_family`` is set when
    some family admits no map.
    """

    edge: tuple
    vertex: int
    t: int
    condition_i: bool
    free_vertices: tuple
    critical_vertices: tuple
    condition_ii: bool
    condition_iii: Optional[bool] = None
    phi: dict = field(default_factory=dict)
    failing_family: Optional[tuple] = None
    families_checked: int = 0

    @property
    def verdict(self) -> bool:
        return bool(self.condition_i and self.condition_ii and self.condition_iii)

    def to_dict(self):
        return {
            "edge": list(self.edge),
            "vertex": self.vertex,
            "t": self.t,
            "verdict": self.verdict,
            "condition_i": self.condition_i,
            "free_vertices": list(self.free_vertices),
            "critical_vertices": list(self.critical_vertices),
            "condition_ii": self.condition_ii,
            "condition_iii": self.condition_iii,
            "families_checked": self.families_checked,
            "failing_family": [list(s) for s in self.failing_family] if self.failing_family is not None else None,
            "phi": [
                {"family": [list(s) for s in S], "map": [phi[v] for v in sorted(phi)]} for S, phi in self.phi.items()
            ],
        }


def link_is_matching(g: HyperGraph, v: int) -> bool:
    seen = set()
    for I in link(g, [v]) if g.r > 1 else ():
        if seen.intersection(I):
            return False
        seen.update(I)
    return True


def find_phi(g: HyperGraph, v: int, t: int, S) -> Optional[dict]:
    """A map ``V -> range(t)`` that is injective on every edge missing ``v`` and
    sends every link set of ``v`` onto a member of ``S``; ``None`` if none."""
    S = [frozenset(s) for s in S]
    rest = [e for e in g.edges if v not in e]
    nbrs = [set() for _ in range(g.n)]
    for e in rest:
        for a, b in combinations(e, 2):
            nbrs[a].add(b)
            nbrs[b].add(a)
    groups = sorted(link(g, [v])) if g.r > 1 else []
    for I in groups:
        for a, b in combinations(I, 2):
            nbrs[a].add(b)
            nbrs[b].add(a)
    partial = set()
    for s in S:
        for j in range(len(s) + 1):
            partial.update(frozenset(c) for c in combinations(sorted(s), j))
    active = [u for u in range(g.n) if u != v and (nbrs[u] or any(u in I for I in groups))]
    colors = _solve(g.n, nbrs, t, active, groups, partial.__contains__, symmetric=False)
    if colors is None:
        return None
    return {u: max(c, 0) for u, c in enumerate(colors)}


def check_phi(g: HyperGraph, v: int, t: int, S, phi: dict) -> bool:
    """Independent re-check of a map returned by :func:`find_phi`."""
    S = {frozenset(s) for s in S}
    if any(not 0 <= phi[u] < t for u in range(g.n)):
        return False
    for e in g.edges:
        if v not in e and len({phi[x] for x in e}) != g.r:
            return False
    for I in link(g, [v]):
        img = frozenset(phi[x] for x in I)
        if len(img) != g.r - 1 or img not in S:
            return False
    return True


def _spike_guard(t, r):
    if t > MAX_SPIKE_T or comb(t, r - 1) > MAX_LINK_GROUND:
        raise ResourceLimit(
            f"spike test refuses t={t}, r={r} (limits t <= {MAX_SPIKE_T}, C(t,r-1) <= {MAX_LINK_GROUND})",
            bound=(MAX_SPIKE_T, MAX_LINK_GROUND),
        )


def is_t_spike(g: HyperGraph, F, v: int, t: int, relabel_closure: bool = False, _families=None, _iii=None) -> SpikeReport:
    F = _check_edge(g, F)
    if v not in F:
        raise InvalidArgument(f"vertex {v} is not in edge {F}")
    _spike_guard(t, g.r)
    free = _free_vertices(g, F)
    crit = _critical_vertices(g, F)
    cond_i = v in crit and is_freely_critical(g, F, t)
    cond_ii = link_is_matching(g, v)
    report = SpikeReport(F, v, t, cond_i, free, crit, cond_ii)
    if not (cond_i and cond_ii):
        return report
    if _iii is not None and v in _iii:
        ok, phis, failing, checked = _iii[v]
    else:
        families = _families if _families is not None else enumerate_link_families(t, g.r, up_to_iso=not relabel_closure)
        phis, failing, checked = {}, None, 0
        for S in families:
            checked += 1
            phi = find_phi(g, v, t, S)
            if phi is None:
                failing = S
                break
            phis[S] = phi
        ok = failing is None
        if _iii is not None:
            _iii[v] = (ok, phis, failing, checked)
    report.condition_iii = ok
    report.phi = dict(phis)
    report.failing_family = failing
    report.families_checked = checked
    return report


def is_sharply_critical(g: HyperGraph, t: int, relabel_closure: bool = False) -> Optional[tuple]:
    """First ``(F, v, report)`` in edge/vertex order forming a t-spike, else ``None``."""
    if not g.edges or strong_coloring(g, t) is not None:
        return None
    _spike_guard(t, g.r)
    families = None
    cache = {}
    for F in g.edges:
        crit = _critical_vertices(g, F)
        if not crit or strong_coloring(g.without_edges([F]), t) is None:
            continue
        for v in crit:
            if not link_is_matching(g, v):
                continue
            if families is None:
                families = enumerate_link_families(t, g.r, up_to_iso=not relabel_closure)
            report = is_t_spike(g, F, v, t, _families=families, _iii=cache)
            if report.verdict:
                return F, v, report
    return None
