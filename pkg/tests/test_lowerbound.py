import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest

from obddc import lowerbound as lb
from obddc.cnf import Cnf, cnf_size
from obddc.compiler import compile_with_ordering
from obddc.errors import GuardExceeded
from obddc.obdd import obdd_size
from oracles import clauses_of, connected_graphs, direct_eval, expansion_brute, max_productive_brute, random_cnf, sfw_brute

K3 = lb.SimpleGraph.from_edges(3, [(1, 2), (2, 3), (1, 3)])
K4 = lb.SimpleGraph.from_edges(4, itertools.combinations(range(1, 5), 2))
P3 = Cnf([[1, 2], [2, 3]])
C4 = Cnf([[1, 2], [2, 3], [3, 4], [1, 4]])


def brute_min_obdd(F):
    return min(obdd_size(compile_with_ordering(F, s)[0]) for s in itertools.permutations(sorted(F.vars)))


def test_graph_cnf_examples():
    assert lb.graph_cnf(lb.SimpleGraph.from_edges(2, [(1, 2)])) == Cnf([[1, 2]])
    assert lb.graph_cnf(K3) == Cnf([[1, 2], [2, 3], [1, 3]])
    F = lb.graph_cnf(K4)
    assert len(F) == 6 and lb.is_graph_cnf(F)
    assert all(sum(x in c for c in F.clauses) == 3 for x in F.vars)
    with pytest.raises(lb.NotAGraphCnf):
        lb.graph_cnf(lb.SimpleGraph.from_edges(3, [(1, 2)]))
    assert not lb.is_graph_cnf(Cnf([[1, -2]]))
    assert not lb.is_graph_cnf(Cnf([[1, 2, 3]]))


def test_simple_graph_rejects_loops():
    with pytest.raises(ValueError):
        lb.SimpleGraph.from_edges(2, [(1, 1)])
    assert lb.SimpleGraph.from_edges(2, [(2, 1), (1, 2)]).edges == {(1, 2)}


# -- expansion


def test_expansion_examples():
    assert lb.expansion_constant(K4) == 1
    assert lb.expansion_constant(K3) == 2
    assert lb.expansion_constant(lb.SimpleGraph.from_edges(4, [(1, 2), (2, 3), (3, 4)])) == Fraction(1, 2)


def test_expansion_matches_independent_enumerator():
    for n, edges in connected_graphs(6):
        G = lb.SimpleGraph.from_edges(n, edges)
        assert lb.expansion_constant(G) == expansion_brute(n, edges)


def test_expansion_guard():
    big = lb.SimpleGraph.from_edges(21, [(i, i + 1) for i in range(1, 21)])
    with pytest.raises(GuardExceeded):
        lb.expansion_constant(big)


# -- generation


def test_random_regular_examples():
    assert lb.gen_random_regular(4, 3, seed=5) == K4
    G = lb.gen_random_regular(6, 3, seed=1)
    H = nx.Graph(list(G.edges))
    assert all(d == 3 for _, d in H.degree())
    assert nx.is_isomorphic(H, nx.complete_bipartite_graph(3, 3)) or nx.is_isomorphic(H, nx.circular_ladder_graph(3))
    with pytest.raises(ValueError, match="odd"):
        lb.gen_random_regular(5, 3, seed=0)
    with pytest.raises(ValueError):
        lb.gen_random_regular(4, 4, seed=0)


def test_random_regular_is_deterministic_and_simple():
    for seed in range(20):
        G = lb.gen_random_regular(10, 3, seed)
        assert G == lb.gen_random_regular(10, 3, seed)
        degs = [len(nb) for nb in G.adj.values()]
        assert degs == [3] * 10


def test_generated_expanders_are_read3_monotone_2cnf():
    for n in (4, 6, 8, 10, 12):
        G, cert, _ = lb.certified_expander(n, 3, seed=0)
        F = lb.graph_cnf(G)
        assert cert.c > 0 and cert.d == 3
        assert all(len(c) == 2 and min(c) > 0 for c in F.clauses)
        assert all(sum(x in c for c in F.clauses) <= 3 for x in F.vars)
        assert len(F) <= 3 * len(F.vars)
        assert cnf_size(F) == 2 * len(G.edges) <= 2 * 3 * len(F.vars)


# -- productive sets


def test_productive_examples():
    w = lb.max_productive_set(Cnf([[1, 2]]), (1, 2), 1)
    assert w.clauses == ((1, 2),)
    w = lb.max_productive_set(P3, (2, 1, 3), 1)
    assert w.size == 1


def test_opposite_vertices_of_four_cycle():
    # both crossing matchings contain a pair {a_i, u_j} that is an edge of the cycle
    w = lb.max_productive_set(C4, (1, 3, 2, 4), 2)
    assert w.size == 1
    assert max_productive_brute(list(map(tuple, C4.clauses)), {1, 3}) == 1
    F = Cnf([[1, 2], [3, 4]])
    assert lb.max_productive_set(F, (1, 3, 2, 4), 2).clauses == ((1, 2), (3, 4))


def test_max_productive_matches_subset_enumeration():
    rng = random.Random(31)
    for n, edges in connected_graphs(6):
        F = lb.graph_cnf(lb.SimpleGraph.from_edges(n, edges))
        sigma = list(range(1, n + 1))
        rng.shuffle(sigma)
        for j in range(n + 1):
            w = lb.max_productive_set(F, sigma, j)
            assert lb.validate_witness(F, w)
            assert w.size == max_productive_brute(edges, sigma[:j])


def test_productive_guard_and_input_checks():
    with pytest.raises(lb.NotAGraphCnf):
        lb.max_productive_set(Cnf([[1, -2]]), (1, 2), 1)
    big = lb.graph_cnf(lb.SimpleGraph.from_edges(26, [(i, i + 1) for i in range(1, 26)]))
    with pytest.raises(GuardExceeded):
        lb.max_productive_set(big, tuple(range(1, 27)), 13)


def test_sfw_examples():
    assert lb.sfw_exact(Cnf([[1, 2]]))[0] == 1
    assert lb.sfw_exact(P3)[0] == 1
    value, w = lb.sfw_exact(lb.graph_cnf(K4))
    assert value >= 1 and lb.validate_witness(lb.graph_cnf(K4), w) and w.size == value
    with pytest.raises(GuardExceeded):
        lb.sfw_exact(lb.graph_cnf(lb.SimpleGraph.from_edges(9, [(i, i + 1) for i in range(1, 9)])))


def test_sfw_matches_brute_force():
    for n, edges in connected_graphs(5):
        F = lb.graph_cnf(lb.SimpleGraph.from_edges(n, edges))
        assert lb.sfw_exact(F)[0] == sfw_brute(edges, range(1, n + 1))


# -- greedy


def test_greedy_examples():
    F4 = lb.graph_cnf(K4)
    w = lb.greedy_productive(F4, (1, 2, 3, 4))
    assert w.prefix_len == 2 and w.size >= lb.lemma_lower_bound(4, 3, 1) == 1
    w = lb.greedy_productive(Cnf([[1, 2]]), (1, 2))
    assert w.clauses == ((1, 2),)
    C6 = lb.graph_cnf(lb.SimpleGraph.from_edges(6, [(i, i % 6 + 1) for i in range(1, 7)]))
    rng = random.Random(0)
    for _ in range(30):
        sigma = list(range(1, 7))
        rng.shuffle(sigma)
        assert lb.validate_witness(C6, lb.greedy_productive(C6, sigma))


# -- fooling sets


def test_fooling_set_single_edge():
    F = Cnf([[1, 2]])
    w = lb.max_productive_set(F, (1, 2), 1)
    assert lb.verify_fooling_set(F, w)


def test_fooling_set_corrupted_witness():
    F = Cnf([[1, 2], [3, 4]])
    w = lb.max_productive_set(F, (1, 3, 2, 4), 2)
    a1, u2 = w.a_vars[0], w.u_vars[1]
    bad = Cnf(list(F.clauses) + [(a1, u2)])
    assert not lb.validate_witness(bad, w)
    assert not lb.verify_fooling_set(bad, w)


def test_fooling_sets_of_small_graphs_separate_by_completion():
    for n, edges in connected_graphs(6):
        F = lb.graph_cnf(lb.SimpleGraph.from_edges(n, edges))
        cl = clauses_of(F)
        sigma = tuple(range(1, n + 1))
        for j in range(1, n):
            w = lb.max_productive_set(F, sigma, j)
            if not w.size:
                continue
            assert lb.verify_fooling_set(F, w)
            L = list(lb.fooling_assignments(w))
            for f, g in itertools.combinations(L, 2):
                i = next(k for k, a in enumerate(w.a_vars) if f[a] != g[a])
                h = lb.separating_completion(F, w, i)
                assert direct_eval(cl, {**f, **h}) != direct_eval(cl, {**g, **h})


# -- minimum OBDD size


def test_min_obdd_examples():
    assert lb.min_obdd_size_exact(Cnf([[1, 2]]))[0] == 4
    assert lb.min_obdd_size_exact(Cnf([[1], [-1]]))[0] == 1
    size, sigma = lb.min_obdd_size_exact(P3)
    assert size == 5
    assert obdd_size(compile_with_ordering(P3, (2, 1, 3))[0]) == 5
    assert obdd_size(compile_with_ordering(P3, sigma)[0]) == 5


def test_min_obdd_matches_exhaustive_compilation():
    rng = random.Random(41)
    for _ in range(40):
        F = Cnf(random_cnf(rng, max_vars=5, max_clauses=6))
        size, sigma = lb.min_obdd_size_exact(F)
        assert size == brute_min_obdd(F)
        assert obdd_size(compile_with_ordering(F, sigma)[0]) == size
        best = min(
            s for s in itertools.permutations(sorted(F.vars)) if obdd_size(compile_with_ordering(F, s)[0]) == size
        )
        assert sigma == best


def test_truth_table_axes():
    t = lb.truth_table(P3, (1, 2, 3))
    for bits in itertools.product((0, 1), repeat=3):
        assert t[bits] == direct_eval(clauses_of(P3), dict(zip((1, 2, 3), bits)))


# -- I/O


def test_edge_list_round_trip():
    text = lb.write_edges(K4)
    assert text.splitlines()[0] == "4 6"
    assert lb.read_edges(text) == K4
    with pytest.raises(Exception):
        lb.read_edges("3 2\n1 2\n")


def test_sweep_csv():
    text = lb.sweep_csv([{"n": 4, "d": 3, "c": Fraction(1), "sfw_lb": 1, "sfw_exact": 1, "min_obdd": 8, "2^sfw": 2}])
    assert text == "n,d,c,sfw_lb,sfw_exact,min_obdd,2^sfw\n4,3,1,1,1,8,2\n"
    assert lb.lemma_lower_bound(16, 3, Fraction(3, 8)) == 1
