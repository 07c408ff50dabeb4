import random
from fractions import Fraction

import pytest

from gadgets import D, EPS, IDX, S, build
from dynmatch.diagnostics import (classify_nodes, classify_paths, count_3_augmentable, degree_class,
                                  eq6_fractional, extended_kernel_count, high_node_coverage, is_maximal,
                                  length3_paths, misclassified_count, mwm)
from dynmatch.kernel import static_kernel
from dynmatch.oracle import max_matching, max_matching_size


def test_degree_classes_at_boundaries():
    assert [degree_class(x, D, EPS, S, IDX) for x in (9, 8, 6, 5, 3, 2, 0)] == \
        ["SH", "H", "H", "M", "M", "L", "L"]


def test_classify_nodes_partition():
    nc = classify_nodes([(0, 1), (0, 2), (0, 3)], 5, 3, 0.1, 0.2, 1)
    assert nc.consistent()
    # with d=3 the light bound is 0.63, so a single kernel edge is already medium
    assert nc.of(0) == "SH" and nc.of(1) == "M" and nc.of(4) == "L"


def test_mwm_rejects_non_positive_weights():
    with pytest.raises(ValueError):
        mwm(2, [(0, 1, 0)])
    assert mwm(3, [(0, 1, 2), (1, 2, 3)]) == 3


@pytest.mark.parametrize("counts", [
    {"1": 1},
    {"1": 2, "2": 1, "3": 3, "4": 1},
    {"2": 2, "4": 2, "if": 2},
])
def test_classify_paths_reproduces_gadget_counts(counts):
    g, paths = build(counts)
    tax = classify_paths(g.kernel, g.n, D, g.m, g.mstar, EPS, S, IDX)
    want = {"1": 0, "2": 0, "3": 0, "4": 0, "if": 0}
    want.update(counts)
    assert tax.counts == want
    assert sorted(tax.paths) == sorted(paths)
    on_paths = {v for p, kind in paths if kind != "if" for v in p}
    matched = {v for e in g.m for v in e}
    assert tax.bad_nodes == frozenset(matched - on_paths)


def test_classify_paths_requires_maximum_kernel_matching():
    with pytest.raises(ValueError):
        classify_paths([(0, 1), (1, 2), (2, 3)], 4, 10, [(1, 2)], [(0, 1), (2, 3)], EPS, S, IDX)


def test_misclassified_counts_wrong_counters():
    deg = {0: 9, 1: 1}
    assert misclassified_count({(1, 0): 9, (0, 1): 1}, deg, D, EPS, S, IDX) == 0
    assert misclassified_count({(1, 0): 5, (0, 1): 1}, deg, D, EPS, S, IDX) == 1


def test_taxonomy_reports_best_index():
    g, _ = build({"1": 1})
    approx = {(a, b): 0 for a, b in g.kernel}
    tax = classify_paths(g.kernel, g.n, D, g.m, g.mstar, EPS, S, IDX, approx=approx, indices=[1, 2, 3])
    assert set(tax.misclassified) == {1, 2, 3}
    assert tax.best_index in (1, 2, 3)


def test_length3_paths_simple():
    assert length3_paths([(1, 2)], [(0, 1), (2, 3)]) == [(0, 1, 2, 3)]
    assert length3_paths([(1, 2)], [(1, 2)]) == []


def test_eq6_on_random_kernels():
    rng = random.Random(5)
    for _ in range(80):
        n = rng.randint(4, 40)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < rng.uniform(0.05, 0.6)]
        k = static_kernel(n, edges, 0.1, 10)
        fm = eq6_fractional(k, 10, max_matching(n, edges), 0.1)
        assert fm.valid and fm.edge_bounds_hold and fm.size_bound_holds


def test_count_3_augmentable_on_greedy_matchings():
    rng = random.Random(6)
    seen = 0
    for _ in range(120):
        n = rng.randint(4, 24)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.2]
        order = edges[:]
        rng.shuffle(order)
        cov, m = set(), []
        for u, v in order:
            if u not in cov and v not in cov:
                m.append((u, v))
                cov |= {u, v}
        assert is_maximal(n, edges, m)
        rep = count_3_augmentable(n, edges, m)
        if rep.precondition:
            seen += 1
            assert rep.holds
    assert seen > 0


def test_extended_count_and_coverage_report():
    k = [(0, 1), (0, 2), (0, 3), (4, 5)]
    rep = extended_kernel_count(k, 3, [(0, 1), (4, 5)], 0.2, 0.1, 0.02, mu_g=2, mu_k=2)
    # (0,1): 3 + 1 >= 3.6 counts; (4,5): 2 <= 2.4 and in the kernel counts
    assert rep.r == 2 and rep.heavy_sum == 1 and rep.light_sum_in_kernel == 1
    assert rep.precondition is False and rep.holds is None
    cov = high_node_coverage(k, 6, 3, 0.1, 0.2, 1)
    assert cov.mu_k == 2 and cov.high_nodes == 1 and cov.unmatched_high == 0
    assert cov.reference == 7 * Fraction(1, 5) * 2
    assert max_matching_size(6, k) == cov.mu_k
