import itertools
import random

import pytest

from obddc.cnf import Cnf
from obddc.compiler import compile_with_ordering
from obddc.errors import GuardExceeded, ObddcError
from obddc.obdd import (
    FALSE,
    TRUE,
    Node,
    Obdd,
    all_assignments,
    constant,
    equivalent,
    evaluate,
    from_text,
    obdd_size,
    reduce,
    to_dot,
    to_text,
)
from oracles import clauses_of, direct_eval, random_cnf

IDENTITY = Obdd((1,), (Node(1, FALSE, TRUE),), 2)
P3 = Cnf([[1, 2], [2, 3]])


def test_evaluate_examples():
    assert all(evaluate(constant(1, (1, 2)), f) == 1 for f in all_assignments((1, 2)))
    assert [evaluate(IDENTITY, {1: b}) for b in (0, 1)] == [0, 1]
    D, _ = compile_with_ordering(Cnf([[1, 2]]), (1, 2))
    zeros = [f for f in all_assignments((1, 2)) if evaluate(D, f) == 0]
    assert zeros == [{1: 0, 2: 0}]
    with pytest.raises(ValueError):
        evaluate(IDENTITY, {})


def test_ordering_violations_rejected():
    with pytest.raises(ObddcError):
        Obdd((1, 2), (Node(1, 0, 1), Node(2, 2, 1)), 3)
    with pytest.raises(ObddcError):
        Obdd((1,), (Node(2, 0, 1),), 2)
    with pytest.raises(ObddcError):
        Obdd((1,), (Node(1, 0, 7),), 2)


def test_reduce_removes_redundant_test():
    D = Obdd((1,), (Node(1, TRUE, TRUE),), 2)
    R = reduce(D)
    assert R.root == TRUE and obdd_size(R) == 1


def test_reduce_merges_duplicates():
    D = Obdd((1, 2), (Node(2, 0, 1), Node(2, 0, 1), Node(1, 2, 3)), 4)
    R = reduce(D)
    assert obdd_size(R) == 3
    assert [n.var for n in R.nodes] == [2]


def test_unsatisfiable_compiles_to_zero_sink():
    D, report = compile_with_ordering(Cnf([[1], [-1]]), (1,))
    assert D.root == FALSE and obdd_size(D) == 1
    assert report.size_after_reduce == 1


def test_sizes():
    assert obdd_size(constant(1)) == 1
    assert obdd_size(IDENTITY) == 3
    D, _ = compile_with_ordering(P3, (2, 1, 3))
    assert obdd_size(D) == 5


def test_equivalent_examples():
    D, _ = compile_with_ordering(P3, (1, 2, 3))
    raw = Obdd((1, 2, 3), (Node(3, 0, 1), Node(3, 0, 1), Node(2, 2, 1), Node(2, 3, 1), Node(1, 4, 5)), 6)
    assert equivalent(raw, reduce(raw))
    assert not equivalent(constant(0), constant(1))
    E, _ = compile_with_ordering(P3, (3, 1, 2))
    assert equivalent(D, E)
    F, _ = compile_with_ordering(Cnf([[1, 2], [-2, 3]]), (3, 1, 2))
    assert not equivalent(D, F)


def test_equivalence_guard():
    big = constant(1, range(1, 30))
    other = constant(1, range(29, 0, -1))
    with pytest.raises(GuardExceeded):
        equivalent(big, other)


def test_text_golden():
    D, _ = compile_with_ordering(P3, (2, 1, 3))
    assert to_text(D) == "order 2 1 3\nroot 4\n0:F\n1:T\n2 3 0 1\n3 1 0 2\n4 2 3 1\n"
    assert to_text(constant(0, (1, 2))) == "order\nroot 0\n0:F\n"


def test_dot_golden():
    assert to_dot(IDENTITY) == (
        "digraph obdd {\n"
        '  n0 [shape=box, label="0"];\n'
        '  n1 [shape=box, label="1"];\n'
        '  n2 [label="x1"];\n'
        "  n2 -> n0 [style=dashed];\n"
        "  n2 -> n1;\n"
        "}\n"
    )


def test_text_round_trip():
    rng = random.Random(8)
    for _ in range(50):
        F = Cnf(random_cnf(rng, max_vars=6, max_clauses=6))
        sigma = sorted(F.vars)
        rng.shuffle(sigma)
        D, _ = compile_with_ordering(F, sigma)
        back = from_text(to_text(D))
        assert to_text(back) == to_text(D)
        assert equivalent(back, D)


def test_from_text_errors():
    with pytest.raises(ObddcError):
        from_text("root 1\n1:T\n")
    with pytest.raises(ObddcError):
        from_text("order 1\nroot 3\n0:F\n1:T\n3 1 0 1\n")


def test_canonical_form_is_unique_per_ordering():
    # all width-2 clause sets over three variables, every ordering: equal functions give equal text
    lits = [1, -1, 2, -2, 3, -3]
    clauses = [c for w in (1, 2) for c in itertools.combinations(lits, w) if len({abs(x) for x in c}) == w]
    rng = random.Random(0)
    by_function = {}
    for _ in range(300):
        F = Cnf(rng.sample(clauses, rng.randint(1, 4)) + [[1, 2, 3]])
        table = tuple(direct_eval(clauses_of(F), f) for f in all_assignments((1, 2, 3)))
        for sigma in itertools.permutations((1, 2, 3)):
            D, _ = compile_with_ordering(F, sigma)
            text = to_text(D)
            assert by_function.setdefault((table, sigma), text) == text


def test_reduce_invariants():
    rng = random.Random(6)
    for _ in range(100):
        F = Cnf(random_cnf(rng, max_vars=7, max_clauses=8))
        sigma = sorted(F.vars)
        rng.shuffle(sigma)
        D, _ = compile_with_ordering(F, sigma)
        assert to_text(reduce(D)) == to_text(D)
        triples = [D.node(r) for r in D.reachable() if r > 1]
        assert all(n.lo != n.hi for n in triples)
        assert len(set(triples)) == len(triples)
