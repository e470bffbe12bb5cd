import itertools
import random

import networkx as nx
import pytest

from obddc import incidence
from obddc.cnf import Cnf
from obddc.errors import GuardExceeded, OrderingError
from obddc.incidence import (
    DeletionSet,
    build_incidence,
    clause_node,
    consecutive_ones_order,
    delete,
    detect_left_convex,
    feedback_vertex_set,
    max_degree,
    var_node,
    verify_convexity_witness,
)
from oracles import clauses_of, convex_brute, fvs_size_brute, incidence_nx, is_interval_ordering, random_cnf

P3 = Cnf([[1, 2], [2, 3]])
K3 = Cnf([[1, 2], [2, 3], [1, 3]])
K4 = Cnf(itertools.combinations(range(1, 5), 2))


def test_build_incidence_path():
    G = build_incidence(P3)
    assert G.adj[var_node(2)] == {clause_node(0), clause_node(1)}
    assert G.adj[clause_node(0)] == {var_node(1), var_node(2)}
    assert nx.is_isomorphic(incidence_nx(P3), nx.path_graph(5))


def test_build_incidence_empty_and_star():
    assert build_incidence(Cnf()).vertices == []
    G = build_incidence(Cnf([[1, 2, 3]]))
    assert G.degree(clause_node(0)) == 3
    assert all(G.degree(var_node(x)) == 1 for x in (1, 2, 3))


def test_degrees():
    assert max_degree(build_incidence(P3)) == 2
    assert max_degree(build_incidence(Cnf([[1, 2, 3]]))) == 3
    assert max_degree(build_incidence(K4)) == 3
    assert max_degree(build_incidence(Cnf())) == 0


def test_empty_clause_is_an_isolated_clause_node():
    G = build_incidence(Cnf([[], [1]]))
    assert any(G.degree(clause_node(j)) == 0 for j in G.clause_nodes)


# -- convexity


def test_convex_examples():
    assert detect_left_convex(build_incidence(P3)) == (1, 2, 3)
    assert detect_left_convex(build_incidence(K3)) is None


def test_complete_incidence_accepts_every_ordering():
    F = Cnf([[1, 2, 3], [-1, 2, 3], [1, -2, -3]])
    G = build_incidence(F)
    assert detect_left_convex(G) is not None
    for sigma in itertools.permutations((1, 2, 3)):
        assert verify_convexity_witness(G, sigma)


def test_verify_witness():
    assert verify_convexity_witness(build_incidence(P3), (1, 2, 3))
    assert not verify_convexity_witness(build_incidence(Cnf([[1, 3], [2]])), (1, 2, 3))
    assert verify_convexity_witness(build_incidence(Cnf([[]])), ())
    with pytest.raises(OrderingError):
        verify_convexity_witness(build_incidence(P3), (1, 2))


def test_consecutive_ones_general_columns():
    rows = [{"a", "b"}, {"b", "c", "d"}, {"d", "e"}, {"c", "d"}]
    order = consecutive_ones_order("abcde", rows)
    pos = {x: i for i, x in enumerate(order)}
    for r in rows:
        ps = sorted(pos[x] for x in r)
        assert ps[-1] - ps[0] + 1 == len(ps)
    assert consecutive_ones_order("abc", [{"a", "b"}, {"b", "c"}, {"a", "c"}]) is None


def test_convexity_agrees_with_brute_force_small():
    rng = random.Random(11)
    seen_yes = seen_no = 0
    for _ in range(400):
        clauses = random_cnf(rng, max_vars=6, max_clauses=6, max_width=4)
        F = Cnf(clauses)
        G = build_incidence(F)
        w = detect_left_convex(G)
        truth = convex_brute(clauses_of(F), F.vars)
        assert (w is not None) == truth
        if w is not None:
            assert is_interval_ordering(clauses_of(F), w)
            seen_yes += 1
        else:
            seen_no += 1
    assert seen_yes > 50 and seen_no > 20


def test_interval_formulas_are_recognised():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(1, 25)
        perm = list(range(1, n + 1))
        rng.shuffle(perm)
        clauses = []
        for _ in range(rng.randint(1, 12)):
            i = rng.randrange(n)
            j = rng.randint(i, min(n - 1, i + 5))
            clauses.append([v if rng.random() < 0.5 else -v for v in perm[i : j + 1]])
        F = Cnf(clauses)
        w = detect_left_convex(build_incidence(F))
        assert w is not None and verify_convexity_witness(build_incidence(F), w)


# -- feedback vertex sets


def test_fvs_forest_is_empty():
    assert feedback_vertex_set(build_incidence(P3), 0) == DeletionSet(frozenset())


def test_fvs_triangle():
    D = feedback_vertex_set(build_incidence(K3), 1)
    assert len(D) == 1
    assert D.members == {clause_node(0)}  # ties broken towards clause vertices, then ids
    assert feedback_vertex_set(build_incidence(K3), 0) is None


def test_fvs_two_disjoint_cycles():
    F = Cnf([[1, 2], [2, 3], [1, 3], [4, 5], [5, 6], [4, 6]])
    G = build_incidence(F)
    assert feedback_vertex_set(G, 1) is None
    D = feedback_vertex_set(G, 2)
    assert len(D) == 2
    H = incidence_nx(F)
    H.remove_nodes_from(D)
    assert nx.is_forest(H)


def test_fvs_budget_guard():
    with pytest.raises(GuardExceeded):
        feedback_vertex_set(build_incidence(K3), 5, budget=3)


def test_fvs_minimal_against_subset_enumeration():
    rng = random.Random(2)
    for _ in range(60):
        F = Cnf(random_cnf(rng, max_vars=6, max_clauses=6, max_width=3))
        H = incidence_nx(F)
        if H.number_of_nodes() > 12:
            continue
        k = fvs_size_brute(H)
        D = feedback_vertex_set(build_incidence(F), k)
        assert D is not None and len(D) == k
        H.remove_nodes_from(D)
        assert nx.is_forest(H) or H.number_of_nodes() == 0
        if k:
            assert feedback_vertex_set(build_incidence(F), k - 1) is None


def test_fvs_is_lexicographically_least_minimum():
    F = Cnf([[1, 2], [2, 3], [1, 3], [3, 4], [4, 5], [3, 5]])
    G = build_incidence(F)
    D = feedback_vertex_set(G, 2)
    H = incidence_nx(F)
    best = None
    for S in itertools.combinations(sorted(H.nodes, key=lambda v: (v[0] != "c", v[1])), len(D)):
        R = H.copy()
        R.remove_nodes_from(S)
        if nx.is_forest(R):
            best = S
            break
    ordered = sorted(D.members, key=lambda v: (v[0] != "c", v[1]))
    assert tuple(ordered) == best


def test_delete_strips_variables_and_clauses():
    F = Cnf([[1, 2], [-2, 3], [3, 4]])
    E = delete(F, [var_node(2), clause_node(2)])
    assert E == Cnf([[1], [3]])
    assert incidence.DeletionSet(frozenset({var_node(2), clause_node(0)})).variables == (2,)
