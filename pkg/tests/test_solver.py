import itertools

import numpy as np
import pytest

from ctxkit.exceptions import ResourceLimitError
from ctxkit.inequalities import InequalityExpr, Term, catalog_get
from ctxkit.solver import bound_sign_flip_check, classical_bound, evaluate_assignment


def naive_bound(expr):
    """Independent reference: walk assignments in lexicographic order
    (-1 before +1, first label most significant) and keep the first
    maximizer, which is exactly the solver's witness convention."""
    labels = expr.labels
    best = None
    best_assignment = None
    for values in itertools.product((-1, 1), repeat=len(labels)):
        assignment = dict(zip(labels, values))
        total = evaluate_assignment(expr, assignment)
        if best is None or total > best:
            best = total
            best_assignment = assignment
    return best, best_assignment


CATALOG_CASES = [
    ("ineq1", None, 7, 2**18),
    ("kcbs3", None, 3, 2**5),
    ("ineq4", None, 4, 2**9),
    ("cfrh6", None, 3, 2**6),
    ("nambu7", None, 4, 2**8),
    ("chsh8", None, 2, 2**4),
    ("ineq9", 3, 3, 2**10),
    ("ineq9", 5, 3, 2**14),
    ("mermin11", 3, 2, 2**6),
    ("mermin11", 5, 2, 2**10),
]


@pytest.mark.parametrize("id_,n,bound,evaluations", CATALOG_CASES)
def test_catalog_bounds(id_, n, bound, evaluations):
    result = classical_bound(catalog_get(id_, n))
    assert result.bound == bound
    assert result.evaluations == evaluations


@pytest.mark.parametrize("id_,n", [
    ("kcbs3", None), ("ineq4", None), ("cfrh6", None),
    ("nambu7", None), ("chsh8", None), ("mermin11", 3), ("ineq9", 3),
])
def test_against_naive_enumeration(id_, n):
    expr = catalog_get(id_, n)
    expected_bound, expected_witness = naive_bound(expr)
    result = classical_bound(expr)
    assert result.bound == expected_bound
    assert result.witness == expected_witness


def test_witness_attains_bound():
    for id_, n, bound, _ in CATALOG_CASES:
        expr = catalog_get(id_, n)
        result = classical_bound(expr)
        assert evaluate_assignment(expr, result.witness) == bound
        assert set(result.witness) == set(expr.labels)
        assert set(result.witness.values()) <= {-1, 1}


def test_chsh8_witness_frozen():
    result = classical_bound(catalog_get("chsh8"))
    assert result.witness == {"P14": -1, "P16": -1, "P24": -1, "P26": -1}


def random_expr(rng, label_count, term_count):
    labels = [f"L{i}" for i in range(label_count)]
    terms = []
    for _ in range(term_count):
        size = int(rng.integers(1, label_count + 1))
        factors = tuple(str(f) for f in rng.choice(labels, size=size, replace=False))
        sign = int(rng.choice([-1, 1]))
        terms.append(Term(sign, factors))
    return InequalityExpr(id="random", set_id="test", terms=tuple(terms), bound=None)


def test_random_expressions_match_naive():
    rng = np.random.default_rng(2024)
    for _ in range(25):
        expr = random_expr(rng, label_count=int(rng.integers(2, 9)),
                           term_count=int(rng.integers(1, 7)))
        expected_bound, expected_witness = naive_bound(expr)
        result = classical_bound(expr)
        assert result.bound == expected_bound
        assert result.witness == expected_witness


def test_constant_term_expression():
    expr = InequalityExpr(
        id="const", set_id="test",
        terms=(Term(1, ()), Term(-1, ("L0",))),
        bound=None,
    )
    result = classical_bound(expr)
    assert result.bound == 2
    assert result.witness == {"L0": -1}


def test_label_cap():
    with pytest.raises(ResourceLimitError):
        classical_bound(catalog_get("ineq9", 15))  # 34 labels
    with pytest.raises(ResourceLimitError):
        classical_bound(catalog_get("chsh8"), max_labels=3)


def test_threaded_scan_is_identical(monkeypatch):
    expr = catalog_get("ineq1")  # 2^18 assignments, four blocks
    serial = classical_bound(expr)
    monkeypatch.setenv("CTXKIT_THREADS", "4")
    threaded = classical_bound(expr)
    assert threaded == serial


def test_evaluate_assignment():
    expr = catalog_get("chsh8")
    assert evaluate_assignment(expr, {lab: 1 for lab in expr.labels}) == 2
    with pytest.raises(KeyError):
        evaluate_assignment(expr, {"P14": 1})


def test_bound_sign_flip_invariance():
    assert bound_sign_flip_check(catalog_get("kcbs3"), "A12")
    assert bound_sign_flip_check(catalog_get("mermin11", 3), "C1")
