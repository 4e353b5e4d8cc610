"""Edit distances to blowups of complete graphs and distances between
weighted graphs.

Partitions are handled as assignment vectors ``part[v]`` with parts numbered
in order of first appearance (restricted growth), which is also the tie-break:
among optimal partitions the lexicographically smallest vector is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import prod
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .errors import InvalidArgument
from .hypergraph import HyperGraph, blowup
from .lagrangian import density
from .turan import max_blowup_edges

EXACT_LIMIT = 14
FAMILY_LIMIT = 10


@dataclass
class DistanceReport:
    value: int
    partition: list
    t: int
    mode: str
    certified: bool
    nodes: int = 0
    seed: Optional[int] = None

    @property
    def parts(self):
        out = [[] for _ in range(self.t)]
        for v, p in enumerate(self.partition):
            out[p].append(v)
        return out

    def to_dict(self):
        return {
            "value": self.value,
            "partition": list(self.partition),
            "parts": self.parts,
            "t": self.t,
            "mode": self.mode,
            "certified": self.certified,
            "upper_bound_only": not self.certified,
            "nodes": self.nodes,
            "seed": self.seed,
        }


def _normalize(assign):
    """Renumber parts in order of first appearance."""
    names = {}
    return [names.setdefault(p, len(names)) for p in assign]


def partition_cost(g: HyperGraph, assign) -> int:
    """|g △ B| where B is the complete blowup with the given vertex parts."""
    cost = 0
    edges = g.edge_set
    for S in combinations(range(g.n), g.r):
        transversal = len({assign[x] for x in S}) == g.r
        cost += transversal != (S in edges)
    return cost


class _Local:
    """Per-vertex r-sets for move evaluation in the hill climber."""

    def __init__(self, g):
        self.g = g
        self.by_vertex = [[] for _ in range(g.n)]
        edges = g.edge_set
        for S in combinations(range(g.n), g.r):
            flag = S in edges
            for x in S:
                self.by_vertex[x].append((tuple(y for y in S if y != x), flag))

    def vertex_cost(self, assign, v, p):
        r = self.g.r
        cost = 0
        for others, flag in self.by_vertex[v]:
            parts = {assign[y] for y in others}
            transversal = len(parts) == r - 1 and p not in parts
            cost += transversal != flag
        return cost


def _hill_climb(g, t, rng, restarts):
    local = _Local(g)
    best, best_assign = None, None
    for _ in range(max(1, restarts)):
        assign = [int(x) for x in rng.integers(0, t, size=g.n)]
        improved = True
        while improved:
            improved = False
            for v in rng.permutation(g.n):
                v = int(v)
                costs = [local.vertex_cost(assign, v, p) for p in range(t)]
                p = int(np.argmin(costs))
                if costs[p] < costs[assign[v]]:
                    assign[v] = p
                    improved = True
        assign = _normalize(assign)
        cost = partition_cost(g, assign)
        if best is None or cost < best or (cost == best and assign < best_assign):
            best, best_assign = cost, assign
    return best, best_assign


def _exact(g, t, upper):
    """Branch and bound over restricted-growth assignments.

    ``pend[w][p]`` collects the cost of r-sets whose other vertices are all
    placed, were w put in part p; summing the minima over unplaced w bounds
    the remaining cost from below.
    """
    n, r = g.n, g.r
    edges = g.edge_set
    assign = [-1] * n
    best = [upper + 1, None]
    nodes = [0]
    # r-sets grouped by their largest vertex, minus that vertex
    pend = [[0] * t for _ in range(n)]

    def contributions(v):
        # r-sets {S, w} with S containing v, S within 0..v, w > v
        out = []
        if r == 1:
            return out
        for rest in combinations(range(v), r - 2):
            S = rest + (v,)
            parts = {assign[x] for x in S}
            distinct = len(parts) == r - 1
            for w in range(v + 1, n):
                flag = tuple(sorted(S + (w,))) in edges
                for p in range(t):
                    cost = (distinct and p not in parts) != flag
                    if cost:
                        out.append((w, p))
        return out

    def rec(v, top, cost):
        nodes[0] += 1
        if v == n:
            if cost < best[0]:
                best[0], best[1] = cost, list(assign)
            return
        bound = cost
        for w in range(v, n):
            row = pend[w]
            bound += min(row[: min(t, top + 1)])
            if bound >= best[0]:
                return
        limit = min(t, top + 1)
        for p in range(limit):
            step = pend[v][p]
            if cost + step >= best[0]:
                continue
            assign[v] = p
            added = contributions(v)
            for w, q in added:
                pend[w][q] += 1
            rec(v + 1, max(top, p + 1), cost + step)
            for w, q in added:
                pend[w][q] -= 1
            assign[v] = -1

    if r == 1:
        # every singleton is transversal
        return n - len(g), [0] * n, 1
    rec(0, 0, 0)
    return best[0], best[1], nodes[0]


def distance_to_complete_blowups(
    g: HyperGraph, t: int, mode: str = "auto", seed: int = 0, restarts: int = 20
) -> DistanceReport:
    """Minimum |g △ B| over blowups B of K_t^(r) on the vertices of g.

    ``mode="exact"`` runs branch and bound (n <= 14), ``"heuristic"`` runs
    hill climbing with random restarts and reports an uncertified upper
    bound, ``"auto"`` picks exact when the size allows.
    """
    if t < g.r:
        raise InvalidArgument(f"need t >= r, got t={t}, r={g.r}")
    if mode not in ("auto", "exact", "heuristic"):
        raise InvalidArgument(f"unknown mode {mode!r}")
    if mode == "auto":
        mode = "exact" if g.n <= EXACT_LIMIT else "heuristic"
    if mode == "exact" and g.n > EXACT_LIMIT:
        raise InvalidArgument(f"exact mode is limited to {EXACT_LIMIT} vertices, graph has {g.n}")
    if g.n == 0:
        return DistanceReport(0, [], t, mode, mode == "exact", 0, seed)
    rng = np.random.default_rng(seed)
    h_cost, h_assign = _hill_climb(g, t, rng, restarts)
    if mode == "heuristic":
        return DistanceReport(h_cost, h_assign, t, "heuristic", False, restarts, seed)
    cost, assign, nodes = _exact(g, t, h_cost)
    return DistanceReport(cost, assign, t, "exact", True, nodes, seed)


def is_blowup_partition(g: HyperGraph, assign) -> bool:
    """g is exactly the complete blowup with parts ``assign``: its edges are
    the r-sets meeting r different parts."""
    if len(assign) != g.n:
        raise InvalidArgument(f"need one part per vertex, got {len(assign)} for n={g.n}")
    if not all(len({assign[x] for x in e}) == g.r for e in g.edges):
        return False
    sizes = {}
    for p in assign:
        sizes[p] = sizes.get(p, 0) + 1
    return len(g) == _transversals(list(sizes.values()), g.r)


def _transversals(sizes, r):
    # elementary symmetric polynomial e_r of the part sizes
    e = [1] + [0] * r
    for s in sizes:
        for k in range(r, 0, -1):
            e[k] += e[k - 1] * s
    return e[r]


def is_eps_balanced(partition, n: int, t: int, eps: float) -> bool:
    """Each of the t parts has size within eps of n/t.

    ``partition`` lists parts as vertex collections that must cover
    ``0..n-1`` exactly once, or as plain part sizes summing to n. Missing
    parts count as empty.
    """
    partition = list(partition)
    if len(partition) > t:
        raise InvalidArgument(f"{len(partition)} parts given for t={t}")
    if all(isinstance(p, (int, np.integer)) for p in partition):
        sizes = [int(p) for p in partition]
        if any(s < 0 for s in sizes) or sum(sizes) != n:
            raise InvalidArgument(f"part sizes {sizes} do not sum to n={n}")
    else:
        seen = sorted(v for p in partition for v in p)
        if seen != list(range(n)):
            raise InvalidArgument(f"parts do not cover 0..{n - 1} exactly once")
        sizes = [len(p) for p in partition]
    sizes += [0] * (t - len(sizes))
    target = Fraction(n, t)
    return all(abs(s - target) <= eps for s in sizes)


def _weights(mu, n, probability):
    w = mu.weights if hasattr(mu, "weights") else tuple(mu)
    if len(w) != n:
        raise InvalidArgument(f"need {n} weights, got {len(w)}")
    if any(x < 0 for x in w):
        raise InvalidArgument("weights must be nonnegative")
    total = sum(w)
    if total > 1 + 1e-9:
        raise InvalidArgument(f"total weight {float(total)} exceeds 1")
    if probability and abs(total - 1) > 1e-9:
        raise InvalidArgument(f"weights sum to {float(total)}, not 1")
    return w


def weighted_distance_fixed(g1: HyperGraph, g2: HyperGraph, mu):
    """Sum over the symmetric difference of the products of weights."""
    if g1.n != g2.n or g1.r != g2.r:
        raise InvalidArgument(f"need equal (r, n), got {(g1.r, g1.n)} and {(g2.r, g2.n)}")
    w = _weights(mu, g1.n, probability=False)
    zero = Fraction(0) if any(isinstance(x, Fraction) for x in w) else 0.0
    return sum((prod(w[x] for x in e) for e in g1.edge_set ^ g2.edge_set), zero)


@dataclass
class WeightedDistanceReport:
    """Upper bound on the distance between two weighted graphs.

    ``coupling[i][j]`` is the weight of the common vertex cloned from vertex
    i of the first graph and vertex j of the second; ``feasible`` is false
    when no pair of blowups within the clone cap exists.
    """

    value: float
    coupling: list
    blowup_cap: int
    feasible: bool
    upper_bound: bool = True
    starts: int = 0
    seed: Optional[int] = None
    padded: bool = False

    def to_dict(self):
        return {
            "value": self.value if self.feasible else None,
            "coupling": self.coupling,
            "blowup_cap": self.blowup_cap,
            "feasible": self.feasible,
            "upper_bound": self.upper_bound,
            "starts": self.starts,
            "seed": self.seed,
            "padded": self.padded,
        }


class _CouplingObjective:
    """B(pi): total weight of r-sets of common vertices that are edges in
    both blowups, i.e. the sum over edge pairs (e, f) of the permanent of
    the e-by-f block of pi."""

    def __init__(self, g1, g2):
        self.n1, self.n2, self.r = g1.n, g2.n, g1.r
        self.E1 = np.asarray(g1.edges, dtype=int).reshape(-1, g1.r)
        self.E2 = np.asarray(g2.edges, dtype=int).reshape(-1, g2.r)
        self.perms = list(permutations(range(self.r)))

    def value_grad(self, x):
        P = x.reshape(self.n1, self.n2)
        grad = np.zeros_like(P)
        total = 0.0
        if not len(self.E1) or not len(self.E2):
            return 0.0, grad.ravel()
        for sigma in self.perms:
            factors = [P[np.ix_(self.E1[:, k], self.E2[:, sigma[k]])] for k in range(self.r)]
            total += float(np.prod(factors, axis=0).sum())
            for k in range(self.r):
                rest = np.prod([factors[j] for j in range(self.r) if j != k], axis=0) if self.r > 1 else np.ones_like(factors[0])
                rows = np.broadcast_to(self.E1[:, k][:, None], rest.shape)
                cols = np.broadcast_to(self.E2[:, sigma[k]][None, :], rest.shape)
                np.add.at(grad, (rows, cols), rest)
        return total, grad.ravel()


def _sinkhorn(M, a, b, iters=500):
    M = M.copy()
    for _ in range(iters):
        rs = M.sum(axis=1)
        M *= np.divide(a, rs, out=np.zeros_like(a), where=rs > 0)[:, None]
        cs = M.sum(axis=0)
        M *= np.divide(b, cs, out=np.zeros_like(b), where=cs > 0)[None, :]
    return M


def _northwest(a, b):
    a, b = a.copy(), b.copy()
    P = np.zeros((len(a), len(b)))
    i = j = 0
    while i < len(a) and j < len(b):
        m = min(a[i], b[j])
        P[i, j] = m
        a[i] -= m
        b[j] -= m
        if a[i] <= 1e-15:
            i += 1
        else:
            j += 1
    return P


def _within_cap(P, cap, tol=1e-12):
    S = P > tol
    return S.sum(axis=1).max(initial=0) <= cap and S.sum(axis=0).max(initial=0) <= cap


def _is_coupling(P, a, b, tol=1e-9):
    return P.min(initial=0) >= -tol and np.abs(P.sum(axis=1) - a).max() <= tol and np.abs(P.sum(axis=0) - b).max() <= tol


def _optimize(obj, a, b, start, mask):
    n1, n2 = len(a), len(b)
    A = []
    for i in range(n1):
        row = np.zeros((n1, n2))
        row[i, :] = 1
        A.append(row.ravel())
    for j in range(n2 - 1):
        col = np.zeros((n1, n2))
        col[:, j] = 1
        A.append(col.ravel())
    A = np.asarray(A)
    rhs = np.concatenate([a, b[:-1]])
    bounds = [(0.0, 1.0) if m else (0.0, 0.0) for m in mask.ravel()]
    x0 = np.where(mask.ravel(), start.ravel(), 0.0)

    def fun(x):
        v, gr = obj.value_grad(x)
        return -v, -gr

    res = minimize(
        fun,
        x0,
        jac=True,
        method="SLSQP",
        bounds=bounds,
        constraints=[{"type": "eq", "fun": lambda x: A @ x - rhs, "jac": lambda x: A}],
        options={"maxiter": 300, "ftol": 1e-14},
    )
    P = np.clip(res.x.reshape(n1, n2), 0, None)
    P[~mask] = 0
    return P


def _pad(g, w):
    # leftover mass goes to an isolated extra vertex
    w = [float(x) for x in w]
    rest = 1.0 - sum(w)
    if rest <= 1e-12:
        return g, w, False
    return HyperGraph(g.r, g.n + 1, g.edges), w + [rest], True


def weighted_distance_upper(g1, mu1, g2, mu2, blowup_cap: int, starts: int = 6, seed: int = 0) -> WeightedDistanceReport:
    """Upper bound on d((g1, mu1), (g2, mu2)) over blowups where every
    vertex has at most ``blowup_cap`` clones.

    A pair of blowups on a common weighted vertex set is the same thing as a
    coupling of mu1 and mu2 (the weight of the common vertex cloned from i
    and j). For a coupling pi the distance is
    lambda(g1, mu1) + lambda(g2, mu2) - 2 B(pi), so B is maximized by SLSQP
    from several starts; the cap limits nonzeros per row and column. With
    cap 1 the bijections matching the weights are enumerated instead.
    """
    if blowup_cap < 1:
        raise InvalidArgument("blowup_cap must be at least 1")
    if g1.r != g2.r:
        raise InvalidArgument(f"uniformity mismatch: {g1.r} and {g2.r}")
    g1, w1, pad1 = _pad(g1, _weights(mu1, g1.n, probability=False))
    g2, w2, pad2 = _pad(g2, _weights(mu2, g2.n, probability=False))
    a, b = np.asarray(w1, float), np.asarray(w2, float)
    if abs(a.sum() - b.sum()) > 1e-9:
        raise InvalidArgument("weights must have equal totals")
    base = float(density(g1, w1)) + float(density(g2, w2))
    obj = _CouplingObjective(g1, g2)
    padded = pad1 or pad2

    def score(P):
        return base - 2 * obj.value_grad(P.ravel())[0]

    best_val, best_P = math.inf, None
    tried = 0
    if blowup_cap == 1:
        if g1.n == g2.n:
            for sigma in _weight_bijections(a, b):
                tried += 1
                P = np.zeros((g1.n, g2.n))
                P[np.arange(g1.n), sigma] = a
                v = score(P)
                if v < best_val - 1e-15:
                    best_val, best_P = v, P
        return _weighted_report(best_val, best_P, blowup_cap, tried, seed, padded)

    rng = np.random.default_rng(seed)
    cands = [np.outer(a, b), _northwest(a, b)]
    if g1.n == g2.n:
        # keep matching weight on the diagonal, spread the rest
        d = np.minimum(a, b)
        ra, rb = a - d, b - d
        extra = np.outer(ra, rb) / ra.sum() if ra.sum() > 1e-15 else np.zeros((g1.n, g2.n))
        cands.append(np.diag(d) + extra)
    for _ in range(starts):
        cands.append(_sinkhorn(rng.random((g1.n, g2.n)) + 1e-3, a, b))
    full = np.ones((g1.n, g2.n), dtype=bool)
    for start in cands:
        tried += 1
        P = start
        if _is_coupling(P, a, b) and _within_cap(P, blowup_cap):
            v = score(P)
            if v < best_val - 1e-15:
                best_val, best_P = v, P
        P = _optimize(obj, a, b, P, full)
        if not _within_cap(P, blowup_cap):
            P = _optimize(obj, a, b, P, _cap_mask(P, blowup_cap))
        if _is_coupling(P, a, b) and _within_cap(P, blowup_cap):
            v = score(P)
            if v < best_val - 1e-15:
                best_val, best_P = v, P
    return _weighted_report(best_val, best_P, blowup_cap, tried, seed, padded)


def _cap_mask(P, cap):
    mask = np.zeros(P.shape, dtype=bool)
    for i in range(P.shape[0]):
        mask[i, np.argsort(-P[i])[:cap]] = True
    for j in range(P.shape[1]):
        col = np.flatnonzero(mask[:, j])
        if len(col) > cap:
            drop = col[np.argsort(P[col, j])[: len(col) - cap]]
            mask[drop, j] = False
    return mask


def _weight_bijections(a, b, tol=1e-12):
    n = len(a)
    used = [False] * n
    sigma = [0] * n

    def rec(i):
        if i == n:
            yield list(sigma)
            return
        for j in range(n):
            if not used[j] and abs(a[i] - b[j]) <= tol:
                used[j] = True
                sigma[i] = j
                yield from rec(i + 1)
                used[j] = False

    yield from rec(0)


def _weighted_report(value, P, cap, tried, seed, padded):
    if P is None:
        return WeightedDistanceReport(math.inf, [], cap, False, True, tried, seed, padded)
    return WeightedDistanceReport(max(0.0, float(value)), P.tolist(), cap, True, True, tried, seed, padded)


def coupling_blowups(g1, g2, coupling, tol=1e-15):
    """The two blowups on a common vertex set that a coupling describes.

    Returns ``(b1, b2, weights)``; common vertex k stands for a pair (i, j)
    with positive coupling weight. Used to re-evaluate a coupling directly
    as a fixed-vertex-set distance.
    """
    P = np.asarray(coupling, float)
    pairs = [(i, j) for i in range(P.shape[0]) for j in range(P.shape[1]) if P[i, j] > tol]
    sizes1 = [sum(1 for i, _ in pairs if i == v) for v in range(g1.n)]
    sizes2 = [sum(1 for _, j in pairs if j == v) for v in range(g2.n)]
    if 0 in sizes1 or 0 in sizes2:
        raise InvalidArgument("coupling leaves a vertex without clones")
    b1, origin1 = blowup(g1, sizes1)
    b2, origin2 = blowup(g2, sizes2)
    # map common vertex k to one clone in each blowup
    slot1 = {v: [u for u in range(b1.n) if origin1[u] == v] for v in range(g1.n)}
    slot2 = {v: [u for u in range(b2.n) if origin2[u] == v] for v in range(g2.n)}
    to1, to2 = [], []
    for i, j in pairs:
        to1.append(slot1[i].pop(0))
        to2.append(slot2[j].pop(0))
    inv1 = {u: k for k, u in enumerate(to1)}
    inv2 = {u: k for k, u in enumerate(to2)}
    n = len(pairs)
    h1 = HyperGraph(g1.r, n, tuple(tuple(inv1[x] for x in e) for e in b1.edges))
    h2 = HyperGraph(g2.r, n, tuple(tuple(inv2[x] for x in e) for e in b2.edges))
    return h1, h2, [float(P[i, j]) for i, j in pairs]


@dataclass
class StabilityReport:
    n: int
    t: int
    r: int
    alpha: float
    eps: float
    edges: int
    m: int
    distance: int
    distance_certified: bool
    rhs: float
    inequality_holds: bool
    min_degree: int
    degree_threshold: float
    degree_condition_holds: bool
    flags: list = field(default_factory=list)

    def to_dict(self):
        return dict(self.__dict__)


def stability_probe(g: HyperGraph, t: int, alpha: float, eps: float, mode: str = "auto", seed: int = 0) -> StabilityReport:
    """Evaluate |g| <= m - alpha * d and min degree >= r (1 - eps) m / n for
    the family of blowups of K_t^(r). Data only; a false inequality is a
    recorded outcome, not an error."""
    m = max_blowup_edges(t, g.r, g.n).value
    dist = distance_to_complete_blowups(g, t, mode=mode, seed=seed)
    rhs = m - alpha * dist.value
    threshold = g.r * (1 - eps) * m / g.n if g.n else 0.0
    min_deg = min(g.degrees, default=0)
    flags = [] if dist.certified else ["heuristic-distance"]
    return StabilityReport(
        n=g.n,
        t=t,
        r=g.r,
        alpha=alpha,
        eps=eps,
        edges=len(g),
        m=m,
        distance=dist.value,
        distance_certified=dist.certified,
        rhs=rhs,
        inequality_holds=len(g) <= rhs + 1e-12,
        min_degree=min_deg,
        degree_threshold=threshold,
        degree_condition_holds=min_deg >= threshold - 1e-12,
        flags=flags,
    )


def distance_to_family(g: HyperGraph, family) -> Optional[tuple]:
    """Minimum |g △ h'| over members h with as many vertices as g and all
    relabelings h' of h. Returns ``(distance, member_index, bijection)`` or
    ``None`` when no member has the right order."""
    if g.n > FAMILY_LIMIT:
        raise InvalidArgument(f"distance to a family is limited to {FAMILY_LIMIT} vertices")
    best = None
    for idx, h in enumerate(family):
        if h.n != g.n or h.r != g.r:
            continue
        d, sigma = _best_bijection(g, h, best[0] if best else None)
        if sigma is not None and (best is None or d < best[0]):
            best = (d, idx, sigma)
    return best


def _best_bijection(g, h, cap):
    """Minimum over bijections sigma of |g △ sigma(h)| by branch and bound;
    r-sets are charged once all their vertices are mapped."""
    n, r = g.n, g.r
    ge, he = g.edge_set, h.edge_set
    closing = [[S for S in combinations(range(v + 1), r) if S[-1] == v] for v in range(n)]
    sigma = [-1] * n
    used = [False] * n
    floor = abs(len(g) - len(h))
    best = [cap + 1 if cap is not None else math.inf, None]

    def rec(v, cost):
        if max(cost, floor) >= best[0]:
            return
        if v == n:
            best[0], best[1] = cost, list(sigma)
            return
        for u in range(n):
            if used[u]:
                continue
            sigma[v] = u
            used[u] = True
            step = sum((S in ge) != (tuple(sorted(sigma[x] for x in S)) in he) for S in closing[v])
            rec(v + 1, cost + step)
            used[u] = False
        sigma[v] = -1

    rec(0, 0)
    return best[0], best[1]
