import json
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from hypext import (
    Family,
    GraphParseError,
    HyperGraph,
    InvalidArgument,
    balanced_blowup,
    blowup,
    brute_force_certificate,
    canonical_form,
    clone_vertex,
    complete,
    contains_subgraph,
    covered_pairs,
    covers_pairs,
    dumps,
    edgeless,
    extension,
    find_embedding,
    graph_from_dict,
    is_family_free,
    is_isomorphic,
    link,
    loads,
    path,
    symmetric_difference_size,
    uncovered_pairs,
)
from hypext.canon import canonical_with_automorphisms

from conftest import hypergraphs


# -- oracles ---------------------------------------------------------------


def embeds_bruteforce(host, pattern):
    edges = host.edge_set
    for image in permutations(range(host.n), pattern.n):
        if all(tuple(sorted(image[v] for v in e)) in edges for e in pattern.edges):
            return True
    return False


def isomorphic_bruteforce(g1, g2):
    if (g1.r, g1.n, len(g1)) != (g2.r, g2.n, len(g2)):
        return False
    target = g2.edge_set
    for perm in permutations(range(g1.n)):
        if all(tuple(sorted(perm[v] for v in e)) in target for e in g1.edges):
            return True
    return False


def all_graphs(r, n):
    pool = list(combinations(range(n), r))
    for mask in range(1 << len(pool)):
        yield HyperGraph(r, n, tuple(e for i, e in enumerate(pool) if mask >> i & 1))


# -- link, pairs -------------------------------------------------------------


def test_link_examples():
    assert link(HyperGraph(3, 3, ((0, 1, 2),)), {0}) == {(1, 2)}
    assert link(complete(4, 3), {0, 1}) == {(2,), (3,)}
    assert link(edgeless(5, 3), {0}) == set()


def test_link_rejects_bad_subsets():
    g = complete(4, 3)
    with pytest.raises(InvalidArgument):
        link(g, {0, 1, 2})
    with pytest.raises(InvalidArgument):
        link(g, {7})


def test_covered_pairs_examples(T):
    assert covers_pairs(complete(5, 3))
    g = HyperGraph(3, 4, ((0, 1, 2),))
    assert covered_pairs(g) == {(0, 1), (0, 2), (1, 2)}
    assert not covers_pairs(g)
    assert uncovered_pairs(T) == [(0, 2)]


@given(hypergraphs())
@settings(max_examples=150, deadline=None)
def test_handshake(g):
    assert g.r * len(g) == sum(len(link(g, {v})) for v in range(g.n))


@given(st.integers(2, 4), st.integers(0, 4))
def test_complete_covers_pairs(r, extra):
    assert covers_pairs(complete(r + extra, r))


# -- containment ---------------------------------------------------------------


def test_contains_examples():
    assert contains_subgraph(complete(4, 2), complete(3, 2))
    assert not contains_subgraph(balanced_blowup(4, 3, 8), complete(5, 3))
    assert not contains_subgraph(complete(3, 2), path(4))


def test_contains_uniformity_mismatch():
    with pytest.raises(InvalidArgument):
        contains_subgraph(complete(4, 3), complete(3, 2))


def test_isolated_pattern_vertices_need_distinct_hosts():
    # one edge plus two isolated vertices needs 4 host vertices
    pattern = HyperGraph(2, 4, ((0, 1),))
    assert not contains_subgraph(complete(3, 2), pattern)
    assert contains_subgraph(HyperGraph(2, 4, ((2, 3),)), pattern)


@given(hypergraphs(r=2, max_n=6), hypergraphs(r=2, max_n=4))
@settings(max_examples=150, deadline=None)
def test_containment_matches_bruteforce_r2(host, pattern):
    assert contains_subgraph(host, pattern) == embeds_bruteforce(host, pattern)


@given(hypergraphs(r=3, max_n=6), hypergraphs(r=3, max_n=5))
@settings(max_examples=120, deadline=None)
def test_containment_matches_bruteforce_r3(host, pattern):
    assert contains_subgraph(host, pattern) == embeds_bruteforce(host, pattern)


@given(hypergraphs(max_n=6))
@settings(max_examples=80, deadline=None)
def test_embedding_witness_is_valid(g):
    host = g.with_edges(g.non_edges()[:2])
    m = find_embedding(host, g)
    assert m is not None
    assert len(set(m.values())) == g.n
    assert all(tuple(sorted(m[v] for v in e)) in host.edge_set for e in g.edges)


@given(hypergraphs(max_n=6), st.data())
@settings(max_examples=80, deadline=None)
def test_containment_monotone_in_host(g, data):
    pattern = data.draw(hypergraphs(r=g.r, max_n=4))
    if contains_subgraph(g, pattern):
        assert contains_subgraph(g.with_edges(g.non_edges()), pattern)


def test_through_edge_restricts_image(T):
    host = extension(T)
    assert find_embedding(host, complete(3, 3), through_edge=(0, 2, 4)) is not None
    # a host edge outside any copy of a two-edge path sharing two vertices
    loose = HyperGraph(3, 7, ((0, 1, 2), (0, 1, 3), (4, 5, 6)))
    pattern = HyperGraph(3, 4, ((0, 1, 2), (0, 1, 3)))
    assert find_embedding(loose, pattern, through_edge=(4, 5, 6)) is None
    assert find_embedding(loose, pattern, through_edge=(0, 1, 3)) is not None


def embeds_through_bruteforce(host, pattern, edge):
    edges = host.edge_set
    for image in permutations(range(host.n), pattern.n):
        mapped = {tuple(sorted(image[v] for v in e)) for e in pattern.edges}
        if mapped <= edges and edge in mapped:
            return True
    return False


@given(hypergraphs(r=2, min_n=2, max_n=6), hypergraphs(r=2, max_n=4), st.data())
@settings(max_examples=120, deadline=None)
def test_through_edge_matches_bruteforce(host, pattern, data):
    if not host.edges:
        return
    edge = data.draw(st.sampled_from(host.edges))
    m = find_embedding(host, pattern, through_edge=edge)
    assert (m is not None) == embeds_through_bruteforce(host, pattern, edge)


def test_family_free_examples():
    ext = extension(edgeless(5, 3))
    assert is_family_free(balanced_blowup(4, 3, 8), [ext])
    assert not is_family_free(complete(3, 2), [complete(3, 2)])
    assert is_family_free(edgeless(6, 3), [complete(3, 3), complete(4, 3)])


# -- cloning -----------------------------------------------------------------


def test_clone_examples():
    k2 = HyperGraph(2, 2, ((0, 1),))
    assert is_isomorphic(clone_vertex(k2, 1, 2), HyperGraph(2, 3, ((0, 1), (0, 2))))
    assert clone_vertex(complete(4, 3), 0, 0) == complete(3, 3)


@given(hypergraphs(max_n=6), st.data())
@settings(max_examples=80, deadline=None)
def test_clone_once_is_identity(g, data):
    if g.n == 0:
        return
    v = data.draw(st.integers(0, g.n - 1))
    assert canonical_form(clone_vertex(g, v, 1)) == canonical_form(g)


@pytest.mark.parametrize("t,r,n", [(3, 2, 7), (4, 3, 9), (3, 3, 5)])
def test_iterated_cloning_gives_balanced_blowup(t, r, n):
    g = complete(t, r)
    sizes = [n // t + (1 if i < n % t else 0) for i in range(t)]
    for v in range(t):
        g = clone_vertex(g, v, sizes[v])
        # clones append at the end, the remaining originals keep their indices
    assert canonical_form(g) == canonical_form(balanced_blowup(t, r, n))


def test_blowup_origin():
    g, origin = blowup(path(3), [2, 1, 2])
    assert origin == (0, 0, 1, 2, 2)
    assert len(g) == 4


# -- canonical form ------------------------------------------------------------


def test_certificate_examples():
    assert canonical_form(complete(3, 2)) != canonical_form(path(3))
    assert len({canonical_form(g) for g in all_graphs(2, 4)}) == 11


def test_certificate_counts_match_bruteforce():
    # 34 graphs on 5 vertices; 34 3-graphs on 5 vertices
    for r, n in ((2, 5), (3, 5)):
        ours = {canonical_form(g).key() for g in all_graphs(r, n)}
        oracle = {brute_force_certificate(g.r, g.n, g.edges).key() for g in all_graphs(r, n)}
        assert len(ours) == len(oracle) == 34


@given(hypergraphs(max_n=7), st.data())
@settings(max_examples=120, deadline=None)
def test_certificate_relabel_invariance(g, data):
    cert = canonical_form(g)
    for _ in range(8):
        perm = data.draw(st.permutations(list(range(g.n))))
        assert canonical_form(g.relabel(perm)) == cert


@given(hypergraphs(max_n=5), hypergraphs(max_n=5))
@settings(max_examples=150, deadline=None)
def test_certificate_equality_iff_isomorphic(g1, g2):
    if g1.r != g2.r:
        return
    assert (canonical_form(g1) == canonical_form(g2)) == isomorphic_bruteforce(g1, g2)


@given(hypergraphs(max_n=6))
@settings(max_examples=80, deadline=None)
def test_certificate_relabeling_reproduces_edges(g):
    cert = canonical_form(g)
    lab = cert.relabeling
    assert tuple(sorted(tuple(sorted(lab[v] for v in e)) for e in g.edges)) == cert.edges


@given(hypergraphs(max_n=6))
@settings(max_examples=80, deadline=None)
def test_automorphism_generators_are_automorphisms(g):
    _, gens = canonical_with_automorphisms(g.r, g.n, g.edges)
    for perm in gens:
        assert g.relabel(perm) == g


# -- symmetric difference --------------------------------------------------------


def test_symmetric_difference_examples():
    k4 = complete(4, 2)
    assert symmetric_difference_size(k4, k4) == 0
    assert symmetric_difference_size(k4, k4.without_edges([(0, 1)])) == 1
    b = balanced_blowup(3, 2, 6)
    assert b == multipartite([0, 0, 1, 1, 2, 2])
    # moving vertex 0 into the part {2, 3} flips pairs 01, 02, 03
    assert symmetric_difference_size(b, multipartite([1, 0, 1, 1, 2, 2])) == 3
    # swapping vertices 0 and 2 flips pairs 01, 03, 12, 23
    assert symmetric_difference_size(b, multipartite([1, 0, 0, 1, 2, 2])) == 4


def multipartite(assign):
    n = len(assign)
    return HyperGraph(2, n, tuple(e for e in combinations(range(n), 2) if assign[e[0]] != assign[e[1]]))


def test_symmetric_difference_mismatch():
    with pytest.raises(InvalidArgument):
        symmetric_difference_size(complete(4, 2), complete(5, 2))


# -- JSON ------------------------------------------------------------------------


@given(hypergraphs(max_n=7))
@settings(max_examples=80, deadline=None)
def test_json_round_trip(g):
    assert loads(dumps(g)) == g


@pytest.mark.parametrize(
    "obj,where",
    [
        ([1, 2], "$"),
        ({"r": 2, "n": 3}, "$"),
        ({"r": 2, "n": "3", "edges": []}, "$.n"),
        ({"r": 2, "n": 3, "edges": [[0, 1], [0, 3]]}, "$.edges[1][1]"),
        ({"r": 2, "n": 3, "edges": [[0, 1], [0, 1]]}, "$.edges[1]"),
        ({"r": 2, "n": 3, "edges": [[1, 0]]}, "$.edges[0]"),
        ({"r": 3, "n": 3, "edges": [[0, 1]]}, "$.edges[0]"),
        ({"r": 2, "n": 2, "edges": [], "labels": ["a"]}, "$.labels"),
    ],
)
def test_parse_errors_are_position_precise(obj, where):
    with pytest.raises(GraphParseError) as info:
        graph_from_dict(obj)
    assert info.value.path == where


def test_family_dedups_isomorphic_members():
    fam = Family([path(3), HyperGraph(2, 3, ((0, 2), (1, 2))), complete(3, 2)])
    assert len(fam) == 2
    assert json.loads(json.dumps(fam.digest())) == fam.digest()
