import itertools
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings

from sidonpolar.analysis import (
    AdjacentPair,
    AnalysisError,
    TooLarge,
    all_pairs_distances,
    certify_triples,
    count_c4_through_pair,
    diameter,
    distance_certify,
    is_c4_free,
    is_c4_saturated,
    is_independent,
    is_isomorphism,
    is_subgraph_embedding,
    kst_bound,
    max_independent_set,
    min_new_c4_count,
    mis_by_enumeration,
    paths_of_length_three,
    petersen_brute_search,
    petersen_graph,
    predicted_distance,
    small_graph_isomorphic,
    sumset_condition,
    triangle_count,
    triangle_free_induced_search,
    triple_count,
    triple_counts_bruteforce,
)
from sidonpolar.graphs import Graph
from sidonpolar.search import exact_mis

from .conftest import bundle, cycle, er, graphs


def _nx(G):
    h = nx.Graph()
    h.add_nodes_from(range(G.n))
    h.add_edges_from(G.edges())
    return h


# -- C4 ----------------------------------------------------------------------


def test_c4_witness():
    cert = is_c4_free(cycle(4))
    assert not cert
    u, w1, v, w2 = cert.witness
    assert {u, v, w1, w2} == {0, 1, 2, 3}
    assert is_c4_free(cycle(5))


def test_c4_free_parallel_matches_serial():
    G = er(5)
    assert is_c4_free(G, jobs=2).to_dict() == is_c4_free(G, jobs=1).to_dict()
    bad = Graph.from_edges(30, [(i, i + 1) for i in range(29)] + [(10, 13)])
    assert is_c4_free(bad, jobs=3).to_dict() == is_c4_free(bad).to_dict()


def test_count_c4_on_path():
    P4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert paths_of_length_three(P4, 0, 3) == 1
    assert count_c4_through_pair(P4, 0, 3) == 1
    with pytest.raises(AdjacentPair):
        count_c4_through_pair(P4, 0, 1)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=8))
def test_count_c4_matches_networkx(G):
    for u, v in itertools.combinations(range(G.n), 2):
        if G.has_edge(u, v):
            continue
        h = _nx(G)
        h.add_edge(u, v)
        assert count_c4_through_pair(G, u, v) == _c4_through(h, u, v)
        break


def _c4_through(h, u, v):
    # 4-cycles containing both u and v, by enumeration
    others = [x for x in h if x not in (u, v)]
    seen = set()
    for a, b in itertools.permutations(others, 2):
        for cyc in ((u, a, v, b), (u, v, a, b)):
            if all(h.has_edge(cyc[k], cyc[(k + 1) % 4]) for k in range(4)):
                seen.add(frozenset(frozenset((cyc[k], cyc[(k + 1) % 4])) for k in range(4)))
    return len(seen)


def test_saturation_basic():
    assert not is_c4_saturated(Graph.empty(4))
    assert not is_c4_saturated(cycle(4))
    assert is_c4_saturated(cycle(5))
    assert is_c4_saturated(Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]))


@pytest.mark.parametrize("q,expected", [(3, 1), (4, 1), (5, 3), (7, 4), (8, 5), (9, 6)])
def test_min_new_c4_frozen(q, expected):
    c, (u, v) = min_new_c4_count(bundle(q).G)
    assert c == expected
    assert count_c4_through_pair(bundle(q).G, u, v) == c


# -- triples -----------------------------------------------------------------


@pytest.mark.parametrize("q", [3, 4, 5])
def test_triples_match_oracle(q):
    S = bundle(q).S
    oracle = triple_counts_bruteforce(S.elements, S.n)
    assert [triple_count(S, x) for x in range(S.n)] == oracle
    assert certify_triples(S)


def test_triple_count_tiny():
    # A = {0, 1} in Z_5: a - b + c with a != b, b != c
    assert triple_counts_bruteforce([0, 1], 5) == [0, 0, 1, 0, 1]


# -- distances ---------------------------------------------------------------


def test_distances_against_networkx():
    G = bundle(5).G
    d = all_pairs_distances(G)
    ref = dict(nx.all_pairs_shortest_path_length(_nx(G)))
    assert all(d[u][v] == ref[u][v] for u in range(G.n) for v in range(G.n))
    assert diameter(G) == 3


def test_predicted_distance_cases():
    S = bundle(4).S
    assert predicted_distance(S, 3, 3) == 0
    assert predicted_distance(S, 0, S.elements[1]) == 1
    assert predicted_distance(S, 0, 5) == 3  # both in H
    assert distance_certify(bundle(4).G, S)


def test_diameter_disconnected():
    assert diameter(Graph.empty(2)) is None


# -- isomorphism ---------------------------------------------------------------


def test_small_iso():
    C5 = cycle(5)
    perm = [2, 4, 1, 3, 0]
    relabelled = Graph.from_edges(5, [(perm[u], perm[v]) for u, v in C5.edges()])
    m = small_graph_isomorphic(C5, relabelled)
    assert m is not None and is_isomorphism(C5, relabelled, m)
    two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert small_graph_isomorphic(cycle(6), two_triangles) is None
    with pytest.raises(TooLarge):
        small_graph_isomorphic(cycle(20), cycle(20))


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=8), graphs(max_n=8))
def test_small_iso_matches_networkx(G, H):
    m = small_graph_isomorphic(G, H)
    assert (m is not None) == nx.is_isomorphic(_nx(G), _nx(H))
    if m is not None:
        assert is_isomorphism(G, H, m)


# -- Petersen ------------------------------------------------------------------


def test_petersen_reference():
    P = petersen_graph()
    assert P.n == 10 and P.edge_count() == 15
    assert set(P.degrees()) == {3}
    assert nx.is_isomorphic(_nx(P), nx.petersen_graph())


def test_petersen_brute():
    emb = petersen_brute_search(er(3))
    assert emb is not None and is_subgraph_embedding(petersen_graph(), er(3), emb)
    # ER_2 has 7 vertices: no room
    assert petersen_brute_search(er(2)) is None
    assert petersen_brute_search(cycle(12)) is None


# -- independence -----------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=14))
def test_mis_matches_enumeration(G):
    res = max_independent_set(G)
    assert res.method == "exact"
    assert res.alpha == mis_by_enumeration(G) == len(res.witness)
    assert is_independent(G, res.witness)


def test_mis_corpus_up_to_20():
    corpus = [bundle(3).G, bundle(4).G, er(2), er(3), petersen_graph(), cycle(20), Graph.empty(5)]
    corpus.append(_from_nx(nx.gnp_random_graph(20, 0.3, seed=1)))
    corpus.append(_from_nx(nx.gnp_random_graph(18, 0.6, seed=2)))
    for G in corpus:
        assert G.n <= 20
        assert max_independent_set(G).alpha == mis_by_enumeration(G)


def _from_nx(h):
    return Graph.from_edges(h.number_of_nodes(), list(h.edges()))


@pytest.mark.parametrize("q,alpha", [(3, 3), (4, 6), (5, 8), (7, 13)])
def test_alpha_cayley(q, alpha):
    b = bundle(q)
    res = max_independent_set(b.G, sidon=b.S)
    assert res.alpha == alpha and res.method == "exact"
    assert res.sumset_ok


@pytest.mark.parametrize("q,alpha", [(3, 5), (4, 7), (5, 10)])
def test_alpha_er(q, alpha):
    assert max_independent_set(er(q)).alpha == alpha


def test_mis_budget():
    size, w, exact = exact_mis(bundle(7).G.rows, bundle(7).G.n, budget=5)
    assert not exact and len(w) == size
    res = max_independent_set(bundle(7).G, budget=5)
    assert res.method == "lower-bound-only" and is_independent(bundle(7).G, res.witness)


def test_mis_cap_falls_back():
    res = max_independent_set(bundle(8).G, cap=10)
    assert res.method == "lower-bound-only" and is_independent(bundle(8).G, res.witness)


def test_enumeration_cap():
    with pytest.raises(TooLarge):
        mis_by_enumeration(Graph.empty(23))


def test_sumset_condition():
    S = bundle(3).S
    assert sumset_condition([0], S)
    a = S.elements[0]
    assert not sumset_condition([0, a], S)


# -- triangle-free -------------------------------------------------------------------


def test_triangle_free_search():
    K4 = Graph.from_edges(4, list(itertools.combinations(range(4), 2)))
    assert triangle_count(K4, range(4)) == 4
    J = triangle_free_induced_search(K4)
    assert len(J) == 2 and triangle_count(K4, J) == 0
    G = bundle(8).G
    J1 = triangle_free_induced_search(G, seed=3)
    assert J1 == triangle_free_induced_search(G, seed=3)
    assert triangle_count(G, J1) == 0


# -- KST ---------------------------------------------------------------------------


def test_kst():
    b = kst_bound(4)
    assert b.exact == 6 and b.floor == 6
    assert b.admits(6) and not b.admits(7)
    assert b >= 6 and b < 7
    assert kst_bound(1).floor == 1
    assert kst_bound(2).exact is None
    # 7^{3/2} = 18.52..., so (18.52 + 7)/2 = 12.76
    assert kst_bound(7).floor == 12
    assert kst_bound(7).admits(Fraction(51, 4)) and not kst_bound(7).admits(Fraction(13))
    with pytest.raises(AnalysisError):
        kst_bound(0)


@pytest.mark.parametrize("n", range(1, 200))
def test_kst_floor_matches_isqrt(n):
    from math import isqrt

    # floor((n^{3/2} + n)/2) = floor((isqrt(n^3) + n)/2)
    assert kst_bound(n).floor == (isqrt(n**3) + n) // 2
