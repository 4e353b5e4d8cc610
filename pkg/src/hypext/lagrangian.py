"""Weighted densities, Lagrangians and the comparison function ``f``.

The density of ``(g, mu)`` is the sum over edges of the product of vertex
weights; the Lagrangian is its maximum over probability vectors. Maximization
uses multiplicative ascent from Dirichlet starts (each step keeps the weights
on the simplex and never lowers the density). A certified mode additionally
solves the stationarity equations on every vertex support that covers pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial, prod
from typing import Optional

import numpy as np
from scipy.optimize import root

from .errors import InvalidArgument
from .hypergraph import HyperGraph, covers_pairs, link

IDENTITY_TOL = 1e-12
VALUE_TOL = 1e-6


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative vertex weights with total at most one.

    ``probability=True`` additionally requires the total to be one.
    """

    weights: tuple
    probability: bool = True
    tol: float = 1e-9

    def __post_init__(self):
        w = tuple(self.weights)
        object.__setattr__(self, "weights", w)
        if any(x < 0 for x in w):
            raise InvalidArgument("weights must be nonnegative")
        total = sum(w)
        if total > 1 + self.tol:
            raise InvalidArgument(f"total weight {float(total)} exceeds 1")
        if self.probability and abs(total - 1) > self.tol:
            raise InvalidArgument(f"probability weights sum to {float(total)}, not 1")

    @property
    def total(self):
        return sum(self.weights)

    @property
    def max_weight(self):
        return max(self.weights, default=0)

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, v):
        return self.weights[v]

    def array(self):
        return np.asarray(self.weights, dtype=float)

    @classmethod
    def uniform(cls, n):
        return cls(tuple([1.0 / n] * n)) if n else cls((), probability=False)

    @classmethod
    def point(cls, n, v):
        w = [0.0] * n
        w[v] = 1.0
        return cls(tuple(w))

    @classmethod
    def dirichlet(cls, n, rng, alpha=1.0):
        return cls(tuple(rng.dirichlet([alpha] * n)))


def _as_weights(mu, n):
    w = mu.weights if isinstance(mu, WeightVector) else tuple(mu)
    if len(w) != n:
        raise InvalidArgument(f"need {n} weights, got {len(w)}")
    if any(x < 0 for x in w):
        raise InvalidArgument("weights must be nonnegative")
    return w


def _exact(w):
    return any(isinstance(x, Fraction) for x in w)


def density(g: HyperGraph, mu) -> float:
    """Sum over edges of the product of weights."""
    w = _as_weights(mu, g.n)
    if _exact(w):
        return sum((prod(w[x] for x in e) for e in g.edges), Fraction(0))
    if not g.edges:
        return 0.0
    arr = np.asarray(w, dtype=float)
    return float(np.prod(arr[np.asarray(g.edges)], axis=1).sum())


def vertex_density(g: HyperGraph, mu, u: int) -> float:
    w = _as_weights(mu, g.n)
    g._check_vertex(u)
    if g.r == 1:
        return 1.0 if (u,) in g.edge_set else 0.0
    zero = Fraction(0) if _exact(w) else 0.0
    return sum((prod(w[x] for x in I) for I in link(g, [u])), zero)


def pair_density(g: HyperGraph, mu, u: int, v: int) -> float:
    w = _as_weights(mu, g.n)
    if u == v:
        raise InvalidArgument("pair density needs two distinct vertices")
    g._check_vertex(u)
    g._check_vertex(v)
    if g.r == 2:
        return 1.0 if (min(u, v), max(u, v)) in g.edge_set else 0.0
    zero = Fraction(0) if _exact(w) else 0.0
    return sum((prod(w[x] for x in I) for I in link(g, [u, v])), zero)


def vertex_densities(g: HyperGraph, mu) -> np.ndarray:
    """All vertex densities at once; entry v is the partial derivative of the
    density in ``mu(v)``."""
    w = np.asarray(_as_weights(mu, g.n), dtype=float)
    out = np.zeros(g.n)
    if not g.edges:
        return out
    E = np.asarray(g.edges)
    vals = w[E]
    for j in range(g.r):
        others = np.prod(np.delete(vals, j, axis=1), axis=1)
        np.add.at(out, E[:, j], others)
    return out


@dataclass
class LagrangianResult:
    value: float
    argmax: WeightVector
    restarts_used: int
    kkt_residual: float
    support: tuple
    certified: bool = False
    converged: bool = True
    seed: Optional[int] = None
    mode: str = "ascent"
    supports_checked: int = 0

    def to_dict(self):
        return {
            "value": self.value,
            "argmax": list(self.argmax.weights),
            "restarts_used": self.restarts_used,
            "kkt_residual": self.kkt_residual,
            "support": list(self.support),
            "certified": self.certified,
            "converged": self.converged,
            "seed": self.seed,
            "mode": self.mode,
            "supports_checked": self.supports_checked,
        }


def _gradient(E, n, r, w):
    vals = w[E]
    grad = np.zeros(n)
    for j in range(r):
        grad += np.bincount(E[:, j], weights=np.prod(np.delete(vals, j, axis=1), axis=1), minlength=n)
    return grad


def _ascent(E, n, r, w, max_iters, tol):
    """Multiplicative ascent on the simplex; returns (weights, converged).

    Stops when the step is below ``tol`` or no vertex density exceeds the
    weighted average ``r * lambda`` by more than ``tol**1.3``.
    """
    gap_tol = tol**1.3
    for _ in range(max_iters):
        grad = _gradient(E, n, r, w)
        lam = float(w @ grad) / r
        if lam <= 0:
            return w, True
        if float(grad.max()) - r * lam < gap_tol:
            return w, True
        new = w * grad / (r * lam)
        new /= new.sum()
        if np.max(np.abs(new - w)) < tol:
            return new, True
        w = new
    return w, False


def _polish_on(E, n, r, w, S):
    k = len(S)
    pos = np.full(n, -1)
    pos[S] = np.arange(k)
    keep = np.all(pos[E] >= 0, axis=1)
    sub = pos[E[keep]]
    if not len(sub):
        return None

    def equations(z):
        x, c = z[:k], z[k]
        return np.append(_gradient(sub, k, r, x) - c, x.sum() - 1.0)

    x0 = w[S] / w[S].sum()
    z0 = np.append(x0, float(x0 @ _gradient(sub, k, r, x0)))
    for method in ("hybr", "lm"):
        sol = root(equations, z0, method=method, options={"xtol": 1e-15})
        x = sol.x[:k]
        if np.all(np.isfinite(x)) and np.all(x >= 0) and np.max(np.abs(equations(sol.x))) < 1e-12:
            out = np.zeros(n)
            out[S] = x
            return out
    return None


def _polish(E, n, r, w):
    """Solve the stationarity system on the support of w, and on the support
    minus the vertices whose density lags furthest behind.

    Returns weights at least as good as w with no vertex outside the support
    able to gain, or None.
    """
    grad = _gradient(E, n, r, w)
    lam0 = float(w @ grad) / r
    S = [int(v) for v in np.flatnonzero(w > 1e-7 * w.max())]
    S.sort(key=lambda v: grad[v])
    for drop in range(min(3, len(S) - 1)):
        out = _polish_on(E, n, r, w, np.array(sorted(S[drop:])))
        if out is None:
            continue
        g = _gradient(E, n, r, out)
        lam = float(out @ g) / r
        if lam >= lam0 - 1e-15 and np.max(g) <= r * lam + 1e-10:
            return out
    return None


def _maximize(E, n, r, w, max_iters, tol, chunk=200):
    """Ascent in chunks, trying a support polish after each chunk."""
    done = 0
    while done < max_iters:
        step = min(chunk, max_iters - done)
        w, conv = _ascent(E, n, r, w, step, tol)
        done += step
        polished = _polish(E, n, r, w)
        if polished is not None:
            return polished, True
        if conv:
            return w, True
    return w, False


def _kkt(g, w, value, support):
    if not support:
        return 0.0
    grad = vertex_densities(g, w)
    return float(max(abs(grad[v] - g.r * value) for v in support))


def _support(w, cutoff=1e-9):
    return tuple(int(v) for v in np.flatnonzero(w > cutoff))


def _stationary_points(g, S, rng, starts):
    """Interior solutions on the face spanned by S of: every vertex density
    equals a common value c, weights sum to one."""
    sub = g.induced(list(S))
    k = sub.n
    E = np.asarray(sub.edges)
    r = g.r

    def equations(z):
        x, c = z[:k], z[k]
        return np.append(_gradient(E, k, r, x) - c, x.sum() - 1.0)

    found = []
    inits = [np.full(k, 1.0 / k)] + [rng.dirichlet([1.0] * k) for _ in range(starts)]
    for x0 in inits:
        # ascent first lands near a local maximum of the face, Newton polishes it
        x1, _ = _ascent(E, k, r, x0, 300, 1e-9)
        for start in (x1, x0):
            c0 = float(r * density(sub, start))
            sol = root(equations, np.append(start, c0), method="hybr", options={"xtol": 1e-15})
            x = sol.x[:k]
            if sol.success and np.all(x > 0) and np.max(np.abs(equations(sol.x))) < 1e-10:
                found.append(x)
    return found


def lagrangian(
    g: HyperGraph,
    restarts: int = 32,
    max_iters: int = 100_000,
    tol: float = 1e-10,
    seed: int = 0,
    certify: bool = False,
    max_support: int = 12,
) -> LagrangianResult:
    """Maximum density over probability vectors.

    Ascent mode is always run. With ``certify`` (graphs with at most
    ``max_support`` vertices) every pair-covering vertex set is also solved
    for interior stationary points; the best value over both is returned and
    flagged certified. An optimal vector supported on a pair-covering set
    always exists, so the support enumeration is exhaustive up to the
    numerical solver. For 2-graphs the value is the clique formula exactly.
    """
    rng = np.random.default_rng(seed)
    n, r = g.n, g.r
    if not g.edges:
        uni = WeightVector.uniform(n)
        return LagrangianResult(0.0, uni, 0, 0.0, tuple(range(n)), certified=True, seed=seed, mode="empty")

    E = np.asarray(g.edges)
    best_w, best_val, all_conv = None, -1.0, True
    starts = [np.full(n, 1.0 / n)] + [rng.dirichlet([1.0] * n) for _ in range(max(restarts - 1, 0))]
    for w0 in starts:
        w, conv = _maximize(E, n, r, w0, max_iters, tol)
        val = density(g, w)
        all_conv &= conv
        if val > best_val + 1e-15 or (abs(val - best_val) <= 1e-15 and _support(w) < _support(best_w)):
            best_w, best_val = w, val

    mode = "ascent"
    certified = False
    checked = 0
    if certify:
        if n > max_support:
            raise InvalidArgument(f"certified mode limited to {max_support} vertices, graph has {n}")
        mode = "certified"
        if r == 2:
            clique = _max_clique(g)
            exact = (1 - 1 / len(clique)) / 2
            w = np.zeros(n)
            w[list(clique)] = 1 / len(clique)
            checked = 1
            if exact >= best_val - 1e-15:
                best_w, best_val = w, exact
        else:
            for k in range(r, n + 1):
                for S in combinations(range(n), k):
                    sub = g.induced(list(S))
                    if not sub.edges or not covers_pairs(sub):
                        continue
                    checked += 1
                    for x in _stationary_points(g, S, rng, starts=1):
                        w = np.zeros(n)
                        w[list(S)] = x
                        val = density(g, w)
                        if val > best_val + 1e-15:
                            best_w, best_val = w, val
        certified = True

    support = _support(best_w)
    result_w = WeightVector(tuple(float(x) for x in best_w))
    return LagrangianResult(
        value=float(best_val),
        argmax=result_w,
        restarts_used=len(starts),
        kkt_residual=_kkt(g, best_w, best_val, support),
        support=support,
        certified=certified,
        converged=all_conv,
        seed=seed,
        mode=mode,
        supports_checked=checked,
    )


def _max_clique(g):
    best = ()
    nb = g.neighbors

    def expand(clique, cands):
        nonlocal best
        if len(clique) > len(best):
            best = tuple(clique)
        for v in sorted(cands):
            if len(clique) + len(cands) <= len(best):
                return
            expand(clique + [v], cands & nb[v])
            cands = cands - {v}

    expand([], set(range(g.n)))
    return best


def e_norm(t: int, r: int) -> Fraction:
    """Edge density of the complete r-graph on t vertices: C(t,r)/t^r."""
    if not t >= r >= 2:
        raise InvalidArgument(f"need t >= r >= 2, got t={t}, r={r}")
    return Fraction(comb(t, r), t**r)


def d_norm(t: int, r: int) -> Fraction:
    """Normalized vertex degree of the complete r-graph on t vertices."""
    if not t >= r >= 2:
        raise InvalidArgument(f"need t >= r >= 2, got t={t}, r={r}")
    return Fraction(comb(t - 1, r - 1), t ** (r - 1))


def real_binom(y: float, r: int) -> float:
    """Falling-factorial binomial y(y-1)...(y-r+1)/r! for real y."""
    return prod(y - i for i in range(r)) / factorial(r)


def f(r: int, t: float, x: float) -> float:
    """Sidorenko's comparison function with parameter t, evaluated at real x > 2."""
    if r < 2:
        raise InvalidArgument("r must be at least 2")
    if x <= 2:
        raise InvalidArgument(f"x must exceed 2, got {x}")
    y = x + r - 3
    return real_binom(y, r) / y**r * (t - 2) / (x - 2)


@dataclass
class MonotoneReport:
    r: int
    t: float
    grid: list = field(default_factory=list)
    values: list = field(default_factory=list)
    threshold: Optional[float] = None

    @property
    def decreasing_tail(self) -> bool:
        return self.threshold is not None

    def to_dict(self):
        return {"r": self.r, "t": self.t, "grid": self.grid, "values": self.values, "threshold": self.threshold}


def monotone_threshold(r: int, t: float, x_lo: float, x_hi: float, step: float = 1.0) -> MonotoneReport:
    """Tabulate f on a grid and find where it becomes strictly decreasing.

    ``threshold`` is the smallest grid point from which every later successive
    difference is negative, or ``None`` if the last difference is not.
    """
    if x_lo <= 2:
        raise InvalidArgument(f"x_lo must exceed 2, got {x_lo}")
    if step <= 0:
        raise InvalidArgument("step must be positive")
    report = MonotoneReport(r, t)
    if x_hi <= x_lo:
        return report
    count = int(np.floor((x_hi - x_lo) / step + 1e-9)) + 1
    grid = [x_lo + i * step for i in range(count)]
    values = [f(r, t, x) for x in grid]
    report.grid, report.values = grid, values
    if len(grid) < 2:
        return report
    i = len(grid) - 1
    while i > 0 and values[i] < values[i - 1]:
        i -= 1
    if i < len(grid) - 1:
        report.threshold = grid[i]
    return report


@dataclass
class ProbeReport:
    premise: Optional[bool]
    conclusion: Optional[bool]
    inconclusive: bool
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        """Premise implies conclusion (vacuously true when the premise fails)."""
        return self.inconclusive or not self.premise or bool(self.conclusion)

    def to_dict(self):
        return {
            "premise": self.premise,
            "conclusion": self.conclusion,
            "inconclusive": self.inconclusive,
            "holds": self.holds,
            **self.details,
        }


def sidolem_probe(g: HyperGraph, mu, u: int, eps: float, lag: Optional[LagrangianResult] = None) -> ProbeReport:
    """Check: near-optimal ``mu`` with ``mu(u) >= eps`` forces the vertex
    density at ``u`` to be at least ``r * lambda(g) - eps``.

    The closeness threshold is ``(eps^3 - eps^4) / r``. The Lagrangian comes
    from certified mode; an uncertified value makes the report inconclusive.
    """
    w = _as_weights(mu, g.n)
    WeightVector(w)
    g._check_vertex(u)
    if not 0 < eps:
        raise InvalidArgument("eps must be positive")
    if w[u] < eps:
        raise InvalidArgument(f"mu(u) = {w[u]} is below eps = {eps}")
    e = min(eps, 1.0)
    delta = (e**3 - e**4) / g.r
    if lag is None:
        lag = lagrangian(g, certify=g.n <= 12)
    lam = lag.value
    dens = density(g, w)
    vdens = vertex_density(g, w, u)
    premise = dens >= lam - delta
    conclusion = vdens >= g.r * lam - eps
    return ProbeReport(
        premise,
        conclusion,
        not lag.certified,
        {"delta": delta, "lagrangian": lam, "density": dens, "vertex_density": vdens, "certified": lag.certified},
    )


def sidorenko_probe(g: HyperGraph, mu, t: int) -> ProbeReport:
    """Evaluate ``density(g, mu) <= f(r, t, x)`` with
    ``x = max(t, 1/max_weight - r + 3)``.

    Only the inequality is evaluated; whether ``g`` avoids the relevant tree
    expansion is the caller's premise, recorded as ``premise=None``.
    """
    w = _as_weights(mu, g.n)
    WeightVector(w)
    gamma = max(w)
    x = max(t, 1 / gamma - g.r + 3)
    bound = f(g.r, t, x)
    dens = density(g, w)
    return ProbeReport(None, dens <= bound + IDENTITY_TOL, False, {"x": x, "bound": bound, "density": dens})
