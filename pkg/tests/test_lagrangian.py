from fractions import Fraction
from itertools import product
from math import comb, prod

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st
from scipy.optimize import minimize

from hypext import (
    HyperGraph,
    InvalidArgument,
    WeightVector,
    clone_vertex,
    complete,
    d_norm,
    density,
    e_norm,
    edgeless,
    f,
    lagrangian,
    monotone_threshold,
    pair_density,
    sidolem_probe,
    sidorenko_probe,
    vertex_densities,
    vertex_density,
)

from conftest import graph_and_weights, hypergraphs


# -- oracles ------------------------------------------------------------------------


def density_direct(g, mu):
    return sum(prod(mu[v] for v in e) for e in g.edges)


def lagrangian_slsqp(g, starts=30, seed=5):
    """Multi-start SLSQP on the simplex, independent of the package optimizer."""
    if not g.edges:
        return 0.0
    rng = np.random.default_rng(seed)
    E = np.array(g.edges)
    best = 0.0
    cons = ({"type": "eq", "fun": lambda w: w.sum() - 1.0},)
    for _ in range(starts):
        w0 = rng.dirichlet(np.ones(g.n))
        res = minimize(lambda w: -np.prod(w[E], axis=1).sum(), w0, bounds=[(0, 1)] * g.n, constraints=cons, method="SLSQP", options={"ftol": 1e-14, "maxiter": 500})
        w = np.clip(res.x, 0, None)
        w /= w.sum()
        best = max(best, float(np.prod(w[E], axis=1).sum()))
    return best


def grid_max(g, steps):
    best = 0.0
    for c in product(range(steps + 1), repeat=g.n - 1):
        if sum(c) <= steps:
            mu = [x / steps for x in c] + [(steps - sum(c)) / steps]
            best = max(best, density_direct(g, mu))
    return best


# -- density ---------------------------------------------------------------------------


def test_density_examples():
    assert density(complete(3, 2), [1 / 3] * 3) == pytest.approx(1 / 3, abs=1e-15)
    assert density(complete(4, 3), [0.25] * 4) == pytest.approx(0.0625, abs=1e-15)
    assert density(complete(4, 2), [0, 1, 0, 0]) == 0
    with pytest.raises(InvalidArgument):
        density(complete(3, 2), [0.5, 0.7, -0.2])


def test_vertex_density_examples():
    assert vertex_density(complete(3, 2), [1 / 3] * 3, 1) == pytest.approx(2 / 3)
    for r in (2, 3, 4):
        edge = HyperGraph(r, r, (tuple(range(r)),))
        assert vertex_density(edge, [1 / r] * r, 0) == pytest.approx((1 / r) ** (r - 1))
    assert pair_density(complete(4, 3), [0.25] * 4, 0, 1) == pytest.approx(0.5)
    with pytest.raises(InvalidArgument):
        pair_density(complete(4, 3), [0.25] * 4, 1, 1)


@given(graph_and_weights())
@settings(max_examples=150, deadline=None)
def test_handshake_identity(gw):
    g, mu = gw
    lhs = g.r * density(g, mu)
    rhs = sum(mu[v] * vertex_density(g, mu, v) for v in range(g.n))
    assert abs(lhs - rhs) <= 1e-12
    assert abs(density(g, mu) - density_direct(g, mu)) <= 1e-12
    assert np.allclose(vertex_densities(g, mu), [vertex_density(g, mu, v) for v in range(g.n)], atol=1e-12)


@given(graph_and_weights(), st.data())
@settings(max_examples=150, deadline=None)
def test_density_lipschitz(gw, data):
    g, mu = gw
    raw = data.draw(st.lists(st.floats(0, 1), min_size=g.n, max_size=g.n))
    total = sum(raw) or 1.0
    nu = [x / total for x in raw] if sum(raw) else [1 / g.n] * g.n
    gap = abs(density(g, mu) - density(g, nu))
    assert gap <= sum(abs(a - b) for a, b in zip(mu, nu)) + 1e-12


def test_weight_vector_validation():
    WeightVector((0.5, 0.5))
    WeightVector((0.2, 0.3), probability=False)
    with pytest.raises(InvalidArgument):
        WeightVector((0.2, 0.3))
    with pytest.raises(InvalidArgument):
        WeightVector((0.7, 0.7), probability=False)
    with pytest.raises(InvalidArgument):
        WeightVector((1.5, -0.5))


# -- lagrangian --------------------------------------------------------------------------


@pytest.mark.parametrize("t,r", [(3, 2), (4, 2), (5, 2), (4, 3), (5, 3), (6, 3), (5, 4)])
def test_lagrangian_complete_closed_form(t, r):
    res = lagrangian(complete(t, r))
    assert abs(res.value - comb(t, r) / t**r) <= 1e-6
    assert abs(res.value - density(complete(t, r), res.argmax.weights)) <= 1e-12


def test_lagrangian_trivial_cases():
    assert lagrangian(edgeless(5, 3)).value == 0
    two = HyperGraph(2, 6, ((0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)))
    assert lagrangian(two).value == pytest.approx(1 / 3, abs=1e-9)
    # the split parameter s between the triangles gives (s^2 + (1-s)^2) / 3
    assert max((s * s + (1 - s) ** 2) / 3 for s in np.linspace(0, 1, 1001)) == pytest.approx(1 / 3)


@given(hypergraphs(min_n=2, max_n=6))
@settings(max_examples=40, deadline=None)
def test_lagrangian_matches_independent_optimizer(g):
    res = lagrangian(g, restarts=16)
    oracle = lagrangian_slsqp(g)
    assert res.value >= oracle - 1e-9
    assert res.value <= oracle + 1e-6
    assert abs(res.value - density(g, res.argmax.weights)) <= 1e-12


@given(hypergraphs(min_n=2, max_n=4))
@settings(max_examples=30, deadline=None)
def test_lagrangian_dominates_grid(g):
    assert lagrangian(g).value >= grid_max(g, 12) - 1e-12


@given(hypergraphs(min_n=2, max_n=7))
@settings(max_examples=30, deadline=None)
def test_certified_agrees_with_ascent(g):
    a = lagrangian(g)
    c = lagrangian(g, certify=True)
    assert c.certified
    assert abs(a.value - c.value) <= 1e-8


@given(hypergraphs(min_n=1, max_n=6))
@settings(max_examples=30, deadline=None)
def test_kkt_residual_matches_report(g):
    res = lagrangian(g)
    w = res.argmax.weights
    if res.value == 0:
        return
    grads = [vertex_density(g, w, v) for v in res.support]
    assert max(abs(x - g.r * res.value) for x in grads) <= res.kkt_residual + 1e-12


@given(hypergraphs(min_n=1, max_n=6), st.data())
@settings(max_examples=30, deadline=None)
def test_lagrangian_relabel_and_clone_invariance(g, data):
    base = lagrangian(g, certify=True).value
    perm = data.draw(st.permutations(list(range(g.n))))
    assert abs(lagrangian(g.relabel(perm), certify=True).value - base) <= 1e-6
    v = data.draw(st.integers(0, g.n - 1))
    assert abs(lagrangian(clone_vertex(g, v, 2), certify=True).value - base) <= 1e-6


def test_lagrangian_is_seeded():
    g = complete(5, 3).without_edges([(0, 1, 2), (2, 3, 4)])
    assert lagrangian(g, seed=3).to_dict() == lagrangian(g, seed=3).to_dict()
    assert lagrangian(g, seed=3).seed == 3


# -- norms and f -------------------------------------------------------------------------


def test_norms():
    assert e_norm(3, 2) == Fraction(1, 3)
    assert d_norm(3, 2) == Fraction(2, 3)
    for t in (2, 3, 5):
        assert e_norm(t, t) == Fraction(1, t**t)
    with pytest.raises(InvalidArgument):
        e_norm(2, 3)


@pytest.mark.parametrize("t", range(3, 12))
def test_f_at_r2(t):
    assert f(2, t, t) == pytest.approx((t - 2) / (2 * (t - 1)), abs=1e-15)


def test_f_matches_complete_lagrangian():
    assert f(3, 5, 5) == pytest.approx(comb(5, 3) / 5**3, abs=1e-15) == pytest.approx(0.08)
    for r in (2, 3, 4):
        for t in range(4, 9):
            assert abs(f(r, t, t) - lagrangian(complete(t + r - 3, r)).value) <= 1e-6


def test_f_recurrence_grid():
    worst = 0.0
    for r in range(3, 13):
        for t in range(3, 13):
            for x in np.linspace(3, 60, 50):
                rhs = (1 / r) * ((x + r - 4) / (x + r - 3)) ** (r - 1) * f(r - 1, t, x)
                worst = max(worst, abs(f(r, t, x) - rhs))
    assert worst <= 1e-12


def test_f_domain():
    with pytest.raises(InvalidArgument):
        f(3, 5, 2)


def test_monotone_threshold_examples():
    rep = monotone_threshold(2, 10, 3, 60)
    assert rep.threshold == 3
    assert all(b < a for a, b in zip(rep.values, rep.values[1:]))
    assert monotone_threshold(3, 10, 5, 5).grid == []
    rep = monotone_threshold(3, 10, 4, 100)
    assert rep.decreasing_tail and rep.threshold is not None
    i = rep.grid.index(rep.threshold)
    assert all(b < a for a, b in zip(rep.values[i:], rep.values[i + 1 :]))
    with pytest.raises(InvalidArgument):
        monotone_threshold(3, 10, 2, 10)


# -- probes --------------------------------------------------------------------------------


def test_sidolem_examples():
    rep = sidolem_probe(complete(3, 2), [1 / 3] * 3, 0, 0.3)
    assert rep.premise and rep.conclusion and rep.holds
    rep = sidolem_probe(complete(3, 2), [1.0, 0, 0], 0, 0.01)
    assert rep.premise is False and rep.holds
    with pytest.raises(InvalidArgument):
        sidolem_probe(complete(3, 2), [0.1, 0.45, 0.45], 0, 0.3)


def test_sidolem_falsification_run():
    rng = np.random.default_rng(11)
    premise_true = 0
    for _ in range(200):
        r = int(rng.integers(2, 4))
        n = int(rng.integers(r, 7))
        g = HyperGraph(r, n, tuple(e for e in __import__("itertools").combinations(range(n), r) if rng.random() < 0.6))
        lag = lagrangian(g, certify=True)
        if rng.random() < 0.5:
            mu = np.array(lag.argmax.weights) + rng.normal(0, 1e-3, n)
            mu = np.clip(mu, 0, None)
            mu = mu / mu.sum()
        else:
            mu = rng.dirichlet(np.ones(n))
        u = int(np.argmax(mu))
        eps = float(min(mu[u], rng.uniform(0.05, 0.5)))
        rep = sidolem_probe(g, list(mu), u, eps, lag=lag)
        assert rep.holds, rep.to_dict()
        premise_true += bool(rep.premise)
    assert premise_true > 0


def test_sidorenko_probe_reports_bound():
    rep = sidorenko_probe(complete(5, 3), [0.2] * 5, 5)
    assert rep.premise is None
    assert rep.details["x"] == pytest.approx(5.0)
    assert rep.conclusion == (rep.details["density"] <= rep.details["bound"] + 1e-12)
