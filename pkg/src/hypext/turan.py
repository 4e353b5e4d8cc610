"""Exact Turán numbers at desk scale, and blowup edge counts.

``turan_number`` grows edge sets one edge at a time by canonical augmentation:
a child ``P + e`` is kept only when ``e`` lies in the automorphism orbit of the
child's canonical deletion edge, so every free graph is visited once up to
isomorphism. Branches are cut when the current size plus the number of edges
that can still be added without creating a forbidden copy falls below the best
size found so far.
"""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional

from .canon import canonical_with_automorphisms
from .constructions import balanced_parts
from .errors import InvalidArgument
from .hypergraph import Family, HyperGraph, _copy_through, _match, canonical_form, is_family_free

THREADS_ENV = "HYPEXT_THREADS"
CHECKPOINT_VERSION = 1


@dataclass
class Budget:
    """Search caps; ``None`` means unlimited."""

    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None


@dataclass
class SearchReport:
    n: int
    r: int
    forbidden: list
    ex_value: int
    extremal: list
    nodes_explored: int
    wall_time: float
    exact: bool = True
    method: str = "canonical-augmentation"
    stop_reason: Optional[str] = None
    seed: int = 0
    threads: int = 1

    @property
    def lower_bound_only(self) -> bool:
        return not self.exact

    @property
    def unique(self) -> bool:
        return self.exact and len(self.extremal) == 1

    def to_dict(self):
        return {
            "n": self.n,
            "r": self.r,
            "forbidden": self.forbidden,
            "ex_value": self.ex_value,
            "exact": self.exact,
            "lower_bound_only": self.lower_bound_only,
            "stop_reason": self.stop_reason,
            "extremal": [{"r": g.r, "n": g.n, "edges": [list(e) for e in g.edges]} for g in self.extremal],
            "extremal_count": len(self.extremal),
            "unique": self.unique,
            "nodes_explored": self.nodes_explored,
            "wall_time": self.wall_time,
            "method": self.method,
            "seed": self.seed,
            "threads": self.threads,
        }


def _as_family(fam) -> Family:
    return fam if isinstance(fam, Family) else Family(list(fam))


def _prepare(n, fam, guard):
    fam = _as_family(fam)
    if not len(fam):
        raise InvalidArgument("forbidden family is empty")
    r = fam.r
    if n < 0:
        raise InvalidArgument("n must be nonnegative")
    if guard:
        limit = {2: 9, 3: 7}.get(r)
        if limit is not None and n > limit:
            raise InvalidArgument(f"n={n} exceeds the feasibility guard n <= {limit} for r={r}")
        if limit is None and comb(n, r) > 36:
            raise InvalidArgument(f"C({n},{r}) = {comb(n, r)} r-sets exceeds the feasibility guard of 36")
    relevant = [m for m in fam if m.n <= n]
    if any(not m.edges for m in relevant):
        raise InvalidArgument("an edgeless member fits on n vertices, so no graph avoids the family")
    return fam, r, relevant


class _Context:
    """Shared read-only data: all r-sets and the patterns that fit."""

    def __init__(self, n, r, patterns):
        self.n, self.r = n, r
        self.sets = list(combinations(range(n), r))
        self.index = {e: i for i, e in enumerate(self.sets)}
        self.patterns = patterns

    def graph(self, mask):
        return HyperGraph(self.r, self.n, tuple(self.sets[i] for i in _bits(mask)))

    def raw(self, mask):
        """Edge set, 2-shadow neighbor sets and degrees of a masked graph."""
        edges = set()
        nbrs = [set() for _ in range(self.n)]
        degs = [0] * self.n
        for i in _bits(mask):
            e = self.sets[i]
            edges.add(e)
            for x in e:
                degs[x] += 1
                nbrs[x].update(e)
        for x in range(self.n):
            nbrs[x].discard(x)
        return edges, nbrs, degs

    def can_add(self, raw, i):
        # raw + e stays free iff no pattern copy uses the new edge
        edges, nbrs, degs = raw
        e = self.sets[i]
        saved = [nbrs[x] for x in e]
        edges.add(e)
        for x in e:
            nbrs[x] = nbrs[x] | set(e)
            nbrs[x].discard(x)
            degs[x] += 1
        try:
            return not any(_copy_through(edges, nbrs, degs, self.n, p, e) for p in self.patterns)
        finally:
            edges.discard(e)
            for x, old in zip(e, saved):
                nbrs[x] = old
                degs[x] -= 1

    def addable(self, mask, candidates):
        raw = self.raw(mask)
        out = 0
        for i in _bits(candidates):
            if self.can_add(raw, i):
                out |= 1 << i
        return out

    def edge_invariants(self, raw):
        edges, nbrs, degs = raw
        nsum = [sum(degs[y] for y in nbrs[x]) for x in range(self.n)]
        return {e: tuple(sorted((degs[x], nsum[x]) for x in e)) for e in edges}

    def slack_bound(self, mask, addable, need):
        """Upper bound on the edges of a free graph between ``mask`` and
        ``mask | addable``.

        Forbidden copies whose addable edges are pairwise disjoint each cost
        at least one addable edge. Stops once the bound drops below ``need``.
        """
        bound = _popcount(mask) + _popcount(addable)
        rest = addable
        while bound >= need and rest:
            edges, nbrs, degs = self.raw(mask | rest)
            hit = None
            for p in self.patterns:
                phi = _match(edges, nbrs, degs, self.n, p, {})
                if phi is not None:
                    hit = {self.index[tuple(sorted(phi[x] for x in e))] for e in p.edges}
                    break
            if hit is None:
                break
            for i in hit:
                rest &= ~(1 << i)
            bound -= 1
        return bound

    def edge_image(self, perm, i):
        return self.index[tuple(sorted(perm[x] for x in self.sets[i]))]

    def edge_orbit(self, gens, i):
        orbit = {i}
        todo = [i]
        while todo:
            j = todo.pop()
            for p in gens:
                k = self.edge_image(p, j)
                if k not in orbit:
                    orbit.add(k)
                    todo.append(k)
        return orbit


def _bits(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _popcount(x):
    return bin(x).count("1")


class _Search:
    def __init__(self, ctx, best, budget, start):
        self.ctx = ctx
        self.best = best
        self.extremal = {}
        self.nodes = 0
        self.budget = budget or Budget()
        self.start = start
        self.stopped = None

    def offer(self, mask, cert_key=None):
        k = _popcount(mask)
        if k < self.best:
            return
        if k > self.best:
            self.best = k
            self.extremal = {}
        if cert_key is None:
            g = self.ctx.graph(mask)
            cert_key = canonical_form(g).key()
        self.extremal.setdefault(cert_key, mask)

    def children(self, mask, addable):
        """Accepted children ``(child_mask, child_addable)`` of a node.

        The canonical deletion edge of a graph is, among the edges with the
        largest cheap invariant, the one with the largest canonical image; a
        child ``P + e`` is accepted when ``e`` is in its automorphism orbit.
        """
        ctx = self.ctx
        g = ctx.graph(mask)
        _, gens = canonical_with_automorphisms(ctx.r, ctx.n, g.edges)
        seen = set()
        out = []
        for i in _bits(addable):
            if i in seen:
                continue
            seen |= ctx.edge_orbit(gens, i)
            child = mask | 1 << i
            rest = addable & ~(1 << i)
            if _popcount(child) + _popcount(rest) < self.best:
                continue
            if not self._is_canonical_deletion(child, i):
                continue
            child_add = ctx.addable(child, rest)
            if child_add and ctx.slack_bound(child, child_add, self.best) < self.best:
                continue
            out.append((child, child_add))
        return out

    def _is_canonical_deletion(self, child, i):
        ctx = self.ctx
        e = ctx.sets[i]
        inv = ctx.edge_invariants(ctx.raw(child))
        top = max(inv.values())
        if inv[e] != top:
            return False
        tied = [f for f in inv if inv[f] == top]
        if len(tied) == 1:
            return True
        cert, cgens = canonical_with_automorphisms(ctx.r, ctx.n, tuple(sorted(inv)))
        lab = cert.relabeling
        last = max(tied, key=lambda f: tuple(sorted(lab[x] for x in f)))
        j = ctx.index[last]
        return j == i or j in ctx.edge_orbit(cgens, i)

    def out_of_budget(self):
        b = self.budget
        if b.max_nodes is not None and self.nodes >= b.max_nodes:
            self.stopped = "max_nodes"
        elif b.max_seconds is not None and time.perf_counter() - self.start >= b.max_seconds:
            self.stopped = "max_seconds"
        return self.stopped is not None

    def run(self, stack):
        """Depth-first search; returns the unexplored frontier if stopped early."""
        while stack:
            if self.out_of_budget():
                return stack
            mask, addable = stack.pop()
            self.nodes += 1
            if _popcount(mask) + _popcount(addable) < self.best:
                continue
            kids = self.children(mask, addable)
            for child, _ in kids:
                self.offer(child)
            # most promising child on top of the stack
            kids.sort(key=lambda c: _popcount(c[0]) + _popcount(c[1]))
            for child, child_add in kids:
                if child_add and _popcount(child) + _popcount(child_add) >= self.best:
                    stack.append((child, child_add))
        return []


def _greedy_lower_bound(ctx, rng, tries):
    """Largest of ``tries`` random maximal free graphs, as ``(size, mask)``."""
    best, best_mask = 0, 0
    order = list(range(len(ctx.sets)))
    for _ in range(tries):
        rng.shuffle(order)
        mask = 0
        raw = ctx.raw(0)
        for i in order:
            if ctx.can_add(raw, i):
                mask |= 1 << i
                raw = ctx.raw(mask)
        if _popcount(mask) > best:
            best, best_mask = _popcount(mask), mask
    return best, best_mask


def _worker(args):
    n, r, patterns, best, stack, budget = args
    ctx = _Context(n, r, patterns)
    s = _Search(ctx, best, budget, time.perf_counter())
    frontier = s.run(list(stack))
    return s.best, list(s.extremal.items()), s.nodes, frontier, s.stopped


def _thread_count(threads):
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    return max(1, threads)


def turan_number(
    n: int,
    fam,
    budget: Optional[Budget] = None,
    seed: int = 0,
    threads: Optional[int] = None,
    checkpoint: Optional[str] = None,
    guard: bool = True,
    greedy_tries: int = 8,
) -> SearchReport:
    """ex(n, fam) with every extremal graph up to isomorphism.

    When the budget runs out the report has ``exact=False`` and ``ex_value``
    is only a lower bound; with ``checkpoint`` the unexplored frontier is
    written there and a later call with the same path resumes from it.
    ``threads`` (default from the ``HYPEXT_THREADS`` environment variable)
    splits the frontier across worker processes.
    """
    start = time.perf_counter()
    fam, r, patterns = _prepare(n, fam, guard)
    ctx = _Context(n, r, patterns)
    threads = _thread_count(threads)
    digest = fam.digest()

    resumed = _load_checkpoint(checkpoint, n, r, digest) if checkpoint else None
    if resumed is not None:
        best, extremal_masks, nodes, stack = resumed
    else:
        rng = random.Random(seed)
        best, witness = _greedy_lower_bound(ctx, rng, greedy_tries) if ctx.sets else (0, 0)
        extremal_masks = [witness]
        full = (1 << len(ctx.sets)) - 1
        stack = [(0, ctx.addable(0, full))]
        nodes = 0

    search = _Search(ctx, best, budget, start)
    search.nodes = nodes
    for mask in extremal_masks:
        search.offer(mask)

    if threads > 1 and resumed is None:
        frontier = _parallel(search, stack, threads, budget, n, r, patterns)
    else:
        frontier = search.run(stack)

    exact = search.stopped is None
    if checkpoint:
        if exact:
            if os.path.exists(checkpoint):
                os.remove(checkpoint)
        else:
            _save_checkpoint(checkpoint, n, r, digest, search, frontier)

    extremal = [ctx.graph(search.extremal[k]) for k in sorted(search.extremal)]
    return SearchReport(
        n=n,
        r=r,
        forbidden=digest,
        ex_value=search.best,
        extremal=extremal,
        nodes_explored=search.nodes,
        wall_time=time.perf_counter() - start,
        exact=exact,
        stop_reason=search.stopped,
        seed=seed,
        threads=threads,
    )


def _parallel(search, stack, threads, budget, n, r, patterns):
    # breadth-first split until there is enough work to spread out
    work = list(stack)
    while work and len(work) < 4 * threads:
        mask, addable = work.pop(0)
        search.nodes += 1
        for child, child_add in search.children(mask, addable):
            search.offer(child)
            if child_add:
                work.append((child, child_add))
    chunks = [work[i::threads] for i in range(threads)]
    frontier = []
    with ProcessPoolExecutor(max_workers=threads) as pool:
        jobs = [(n, r, patterns, search.best, chunk, budget) for chunk in chunks if chunk]
        for best, items, nodes, rest, stopped in pool.map(_worker, jobs):
            search.nodes += nodes
            frontier.extend(rest)
            search.stopped = search.stopped or stopped
            for key, mask in items:
                if _popcount(mask) >= search.best:
                    search.offer(mask, key)
    return frontier


def _save_checkpoint(path, n, r, digest, search, frontier):
    data = {
        "version": CHECKPOINT_VERSION,
        "n": n,
        "r": r,
        "forbidden": digest,
        "best": search.best,
        "nodes_explored": search.nodes,
        "extremal": [list(search.ctx.graph(m).edges) for m in search.extremal.values()],
        "frontier": [
            {"edges": [list(e) for e in search.ctx.graph(mask).edges], "addable": [list(search.ctx.sets[i]) for i in _bits(add)]}
            for mask, add in frontier
        ],
    }
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)


def _load_checkpoint(path, n, r, digest):
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        data = json.load(fh)
    if data.get("version") != CHECKPOINT_VERSION or data["n"] != n or data["r"] != r or data["forbidden"] != digest:
        raise InvalidArgument(f"checkpoint {path} belongs to a different search")
    index = {e: i for i, e in enumerate(combinations(range(n), r))}

    def mask_of(edges):
        m = 0
        for e in edges:
            m |= 1 << index[tuple(sorted(e))]
        return m

    stack = [(mask_of(s["edges"]), mask_of(s["addable"])) for s in data["frontier"]]
    extremal = [mask_of(edges) for edges in data["extremal"]]
    return data["best"], extremal, data["nodes_explored"], stack


def brute_force_turan(n: int, fam, max_sets: int = 20) -> tuple:
    """All-subsets oracle: ``(ex, sorted canonical keys of extremal graphs)``.

    Freeness is decided subset by subset with a plain embedding search, so
    this shares no pruning logic with :func:`turan_number`.
    """
    fam = _as_family(fam)
    r = fam.r
    sets = list(combinations(range(n), r))
    if len(sets) > max_sets:
        raise InvalidArgument(f"{len(sets)} r-sets is too many for the all-subsets oracle (max {max_sets})")
    members = list(fam)
    free = [False] * (1 << len(sets))
    free[0] = is_family_free(HyperGraph(r, n, ()), members)
    best, keys = (0, set()) if free[0] else (-1, set())
    if free[0]:
        keys.add(canonical_form(HyperGraph(r, n, ())).key())
    for mask in range(1, 1 << len(sets)):
        top = mask.bit_length() - 1
        if not free[mask & ~(1 << top)]:
            continue
        g = HyperGraph(r, n, tuple(sets[i] for i in range(len(sets)) if mask >> i & 1))
        if not is_family_free(g, members):
            continue
        free[mask] = True
        k = len(g)
        if k > best:
            best, keys = k, set()
        if k == best:
            keys.add(canonical_form(g).key())
    return best, sorted(keys)


def _elementary(parts, r):
    e = [1] + [0] * r
    for p in parts:
        for j in range(r, 0, -1):
            e[j] += e[j - 1] * p
    return e[r]


def _partitions(n, k, largest=None):
    """Partitions of n into at most k parts, nonincreasing."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    if k == 0:
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, k - 1, first):
            yield (first,) + rest


@dataclass
class BlowupReport:
    t: int
    r: int
    n: int
    value: int
    parts: tuple
    balanced_optimal: bool
    ties: list = field(default_factory=list)
    method: str = "enumeration"

    def to_dict(self):
        return {
            "t": self.t,
            "r": self.r,
            "n": self.n,
            "value": self.value,
            "parts": list(self.parts),
            "balanced_optimal": self.balanced_optimal,
            "ties": [list(p) for p in self.ties],
            "method": self.method,
        }


def max_blowup_edges(t: int, r: int, n: int, enumerate_up_to: int = 60) -> BlowupReport:
    """Most edges of a blowup of K_t^(r) on n vertices.

    Partitions of n into at most t parts are enumerated for n up to
    ``enumerate_up_to``; ``ties`` lists every other optimal partition. Above
    that the balanced partition is returned, which is optimal because the
    transversal count is a Schur-concave function of the part sizes.
    """
    if t < r:
        raise InvalidArgument(f"need t >= r, got t={t}, r={r}")
    if n < 0:
        raise InvalidArgument("n must be nonnegative")
    balanced = tuple(p for p in balanced_parts(t, n) if p)
    bval = _elementary(balanced, r)
    if n > enumerate_up_to:
        return BlowupReport(t, r, n, bval, balanced, True, [], method="balanced")
    best, optimal = -1, []
    for parts in _partitions(n, t):
        v = _elementary(parts, r)
        if v > best:
            best, optimal = v, [parts]
        elif v == best:
            optimal.append(parts)
    if balanced in optimal:
        chosen = balanced
    else:
        chosen = optimal[0]
    ties = [p for p in optimal if p != chosen]
    return BlowupReport(t, r, n, best, chosen, balanced in optimal, ties)


@dataclass
class ExtremalVerdict:
    candidate_free: bool
    candidate_edges: int
    ex_value: int
    matches: bool
    strictly_beaten: bool
    unique: bool
    extremal_count: int
    exact: bool
    report: SearchReport

    def to_dict(self):
        return {
            "candidate_free": self.candidate_free,
            "candidate_edges": self.candidate_edges,
            "ex_value": self.ex_value,
            "matches": self.matches,
            "strictly_beaten": self.strictly_beaten,
            "unique": self.unique,
            "extremal_count": self.extremal_count,
            "exact": self.exact,
            "search": self.report.to_dict(),
        }


def verify_extremal_claim(n: int, fam, candidate: HyperGraph, budget: Optional[Budget] = None, **kwargs) -> ExtremalVerdict:
    """Compare a candidate with the exhaustive search at this n.

    ``matches`` means the candidate is free and attains ex(n, fam); ``unique``
    additionally needs it to be the only extremal graph up to isomorphism.
    A mismatch is a finding about small n, not an error.
    """
    fam = _as_family(fam)
    if candidate.n != n:
        raise InvalidArgument(f"candidate has {candidate.n} vertices, expected {n}")
    if candidate.r != fam.r:
        raise InvalidArgument(f"candidate is {candidate.r}-uniform, family is {fam.r}-uniform")
    free = is_family_free(candidate, fam)
    report = turan_number(n, fam, budget=budget, **kwargs)
    key = canonical_form(candidate).key()
    keys = {canonical_form(g).key() for g in report.extremal}
    matches = free and len(candidate) == report.ex_value and (key in keys or not report.exact)
    return ExtremalVerdict(
        candidate_free=free,
        candidate_edges=len(candidate),
        ex_value=report.ex_value,
        matches=matches,
        strictly_beaten=report.ex_value > len(candidate),
        unique=matches and report.unique,
        extremal_count=len(report.extremal),
        exact=report.exact,
        report=report,
    )
