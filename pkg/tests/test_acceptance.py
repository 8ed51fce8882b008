"""Acceptance criteria, one test per criterion, at the stated sizes and limits.

Every instance generator is seeded so runs are reproducible. Criterion 10 reads
the AM iteration counts gathered by the criteria before it, so this module must
run in file order (the pytest default).
"""

import itertools
import time
from functools import lru_cache

import numpy as np
import pytest

from dtgw import (
    DtgwOptions,
    NoiseSpec,
    TemporalGraph,
    am_heuristic,
    build_qp,
    complete_linkage_cluster,
    count_warping_paths,
    cut_dendrogram,
    deanonymization_accuracy,
    dtw_optimal_path,
    enumerate_warping_paths,
    error_stats,
    exact_dtgw,
    is_zero_dtgw,
    non_consistent_distance,
    pairwise_distances,
    perturb,
    random_relabel,
    random_temporal_graph,
    solve_assignment,
    solve_qp_exhaustive,
)
from dtgw.distance import INITS
from dtgw.experiments import NOISE_MODELS, iteration_budget_ok, make_rng

from conftest import ACCEPTANCE_NOTES, AM_ITERATIONS, brute_force_dtgw, random_graph, random_pair, record_am


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_1_assignment_oracle():
    rng = make_rng(101)
    perms = {n: np.array(list(itertools.permutations(range(n)))) for n in range(1, 8)}
    mismatches = 0
    with Timer() as t:
        for _ in range(500):
            n = int(rng.integers(1, 8))
            c = rng.integers(0, 100, size=(n, n))
            brute = int(c[np.arange(n), perms[n]].sum(axis=1).min())
            mismatches += solve_assignment(c).total_cost != brute
    ACCEPTANCE_NOTES[1] = f"500 matrices, {mismatches} mismatches, {t.elapsed:.2f}s (limit 5s)"
    assert mismatches == 0
    assert t.elapsed < 5


def test_criterion_2_dtw_oracle():
    rng = make_rng(202)
    mismatches = 0
    with Timer() as t:
        for _ in range(200):
            T, U = (int(x) for x in rng.integers(1, 6, size=2))
            c = rng.integers(0, 50, size=(T, U))
            best = min(sum(c[i - 1, j - 1] for i, j in p) for p in enumerate_warping_paths(T, U))
            mismatches += dtw_optimal_path(c)[1] != best
    ACCEPTANCE_NOTES[2] = f"200 matrices, {mismatches} mismatches, {t.elapsed:.2f}s (limit 5s)"
    assert mismatches == 0
    assert t.elapsed < 5


@lru_cache(maxsize=None)
def _delannoy(T, U):
    if T == 1 or U == 1:
        return 1
    return _delannoy(T - 1, U) + _delannoy(T, U - 1) + _delannoy(T - 1, U - 1)


def test_criterion_3_path_counts():
    checked = 0
    bad = []
    with Timer() as t:
        for T in range(1, 7):
            for U in range(1, T + 1):
                for lam in list(range(0, U)) + [None]:
                    got = sum(1 for _ in enumerate_warping_paths(T, U, lam))
                    if got != count_warping_paths(T, U, lam):
                        bad.append((T, U, lam))
                    checked += 1
                if count_warping_paths(T, U) != _delannoy(T, U):
                    bad.append((T, U, "delannoy"))
    ACCEPTANCE_NOTES[3] = f"{checked} (T, U, lambda) cases, 3x3 count {count_warping_paths(3, 3)}, {t.elapsed:.2f}s (limit 10s)"
    assert not bad
    assert count_warping_paths(3, 3) == 13
    assert t.elapsed < 10


def test_criterion_4_exact_vs_double_brute_force():
    mismatches = 0
    with Timer() as t:
        for seed in range(100):
            g, h = random_pair(4000 + seed, max_n=4, max_t=4)
            mismatches += exact_dtgw(g, h).distance != brute_force_dtgw(g, h)
    ACCEPTANCE_NOTES[4] = f"100 instances, {mismatches} mismatches, {t.elapsed:.2f}s (limit 60s)"
    assert mismatches == 0
    assert t.elapsed < 60


def _zero_copy(g, rng):
    """Relabel ``g`` and repeat each layer 1 to 2 times."""
    h, _ = random_relabel(g, int(rng.integers(1 << 30)))
    reps = rng.integers(1, 3, size=h.lifetime)
    layers = [layer for layer, r in zip(h.layers, reps) for _ in range(int(r))][:5]
    return TemporalGraph.build(h.vertex_labels, layers)


def test_criterion_5_zero_test_agreement():
    rng = make_rng(505)
    disagreements = zeros = 0
    with Timer() as t:
        for k in range(200):
            n = int(rng.integers(1, 6))
            g = random_graph(rng, n, int(rng.integers(1, 6)), density=float(rng.uniform(0.1, 0.6)))
            if k % 2 == 0:
                h = _zero_copy(g, rng)
            else:
                h = random_graph(rng, n, int(rng.integers(1, 6)), density=float(rng.uniform(0.0, 0.6)))
            exact_zero = exact_dtgw(g, h).distance == 0
            zeros += exact_zero
            disagreements += bool(is_zero_dtgw(g, h)) != exact_zero
    ACCEPTANCE_NOTES[5] = f"200 instances ({zeros} at distance 0), {disagreements} disagreements, {t.elapsed:.2f}s (limit 60s)"
    assert disagreements == 0
    assert t.elapsed < 60


def test_criterion_6_sandwich_and_identity():
    failures = []
    with Timer() as t:
        for seed in range(200):
            g, h = random_pair(6000 + seed, max_n=5, max_t=5)
            exact = exact_dtgw(g, h).distance
            if non_consistent_distance(g, h) > exact + 1e-9:
                failures.append((seed, "non-consistent above exact"))
            if exact_dtgw(g, g).distance != 0:
                failures.append((seed, "exact self-distance"))
            for init in INITS:
                opts = DtgwOptions(init=init)
                res = record_am(am_heuristic(g, h, opts))
                if not res.converged:
                    failures.append((seed, init, "max_iterations exhausted"))
                if res.distance < exact - 1e-9:
                    failures.append((seed, init, "AM below exact"))
                if any(b >= a for a, b in zip(res.trace, res.trace[1:])):
                    failures.append((seed, init, "trace not strictly decreasing"))
                if record_am(am_heuristic(g, g, opts)).distance != 0:
                    failures.append((seed, init, "AM self-distance"))
    ACCEPTANCE_NOTES[6] = f"200 instances x {len(INITS)} inits, {len(failures)} failures, {t.elapsed:.2f}s (limit 120s)"
    assert not failures, failures[:5]
    assert t.elapsed < 120


def test_criterion_7_heuristic_quality():
    # instance family fixed in advance: independent Erdos-Renyi layers with
    # per-graph density drawn uniformly from [0.2, 0.4]
    rng = make_rng(707)
    pairs = {init: [] for init in INITS}
    with Timer() as t:
        for k in range(100):
            g = random_temporal_graph(6, 8, float(rng.uniform(0.2, 0.4)), seed=2 * k)
            h = random_temporal_graph(6, 8, float(rng.uniform(0.2, 0.4)), seed=2 * k + 1)
            exact = exact_dtgw(g, h).distance
            for init in INITS:
                res = record_am(am_heuristic(g, h, DtgwOptions(init=init)))
                assert res.converged
                pairs[init].append((res.distance, exact))
    stats = {init: error_stats(p) for init, p in pairs.items()}
    ACCEPTANCE_NOTES[7] = "; ".join(
        f"{init}: avg {s.avg:.2f}% P0 {s.p0:.2f} max {s.max:.1f}%" for init, s in stats.items()
    ) + f"; {t.elapsed:.1f}s (limit 600s)"
    for init, s in stats.items():
        assert s.p0 >= 0.4, (init, s)
        assert s.avg <= 15, (init, s)
    assert t.elapsed < 600


def test_criterion_8_qp_oracle():
    g2 = TemporalGraph.from_edge_lists(2, [[(0, 1)], []])
    h2 = TemporalGraph.from_edge_lists(2, [[], [(0, 1)]])
    small = build_qp(g2, h2)
    mismatches = 0
    with Timer() as t:
        for seed in range(20):
            g, h = random_pair(8000 + seed, max_n=3, max_t=3)
            value, assignment = solve_qp_exhaustive(build_qp(g, h))
            mismatches += value != exact_dtgw(g, h).distance
    ACCEPTANCE_NOTES[8] = (
        f"20 instances, {mismatches} mismatches; 2x2 model has {len(small.variables)} variables and "
        f"{len(small.constraints)} constraints; {t.elapsed:.2f}s (limit 60s)"
    )
    assert mismatches == 0
    assert (len(small.variables), len(small.constraints)) == (13, 8)
    assert t.elapsed < 60


DENSITIES = (0.05, 0.1, 0.2)


def _clustering_trial(seed):
    """For each noise model: 3 references plus 3 noisy copies of each, cut at k = 3."""
    refs = [random_temporal_graph(20, 50, d, seed=1000 * seed + r) for r, d in enumerate(DENSITIES)]
    recovered = {}
    for m, model in enumerate(NOISE_MODELS):
        graphs, family = [], []
        for r, ref in enumerate(refs):
            graphs.append(ref)
            family.append(r)
            for c in range(3):
                graphs.append(perturb(ref, NoiseSpec(model, 0.1, seed=1000 * seed + 100 * m + 10 * r + c)))
                family.append(r)
        D = pairwise_distances(graphs, "am", DtgwOptions())
        parts = cut_dendrogram(complete_linkage_cluster(D), 3)
        want = sorted(sorted(i for i, f in enumerate(family) if f == r) for r in range(3))
        recovered[model] = sorted(parts) == want
    return recovered


def _deanon_trial(seed):
    model = NOISE_MODELS[seed % len(NOISE_MODELS)]
    g = random_temporal_graph(20, 50, 0.1, seed=9000 + seed)
    noisy = perturb(g, NoiseSpec(model, 0.1, seed=seed))
    h, truth = random_relabel(noisy, seed + 77)
    res = record_am(am_heuristic(g, h, DtgwOptions()))
    assert res.converged
    return deanonymization_accuracy(res.mapping, truth)


def test_criterion_9_clustering_and_deanonymization():
    with Timer() as t:
        trials = [_clustering_trial(seed) for seed in range(10)]
        accuracies = [_deanon_trial(seed) for seed in range(10)]
    cluster_ok = sum(all(r.values()) for r in trials)
    per_model = {m: sum(r[m] for r in trials) for m in NOISE_MODELS}
    deanon_ok = sum(a >= 0.8 for a in accuracies)
    ACCEPTANCE_NOTES[9] = (
        f"clustering recovered in {cluster_ok}/10 trials (per model {per_model}); "
        f"de-anonymization accuracy >= 0.8 in {deanon_ok}/10 (min {min(accuracies):.2f}); "
        f"{t.elapsed:.1f}s (limit 300s)"
    )
    assert cluster_ok >= 9
    assert deanon_ok >= 8
    assert t.elapsed < 300


def test_criterion_10_iteration_counts():
    if not AM_ITERATIONS:
        pytest.skip("no AM runs were recorded (earlier criteria deselected)")
    counts = np.array(AM_ITERATIONS)
    share = float(np.mean(counts <= 10))
    ACCEPTANCE_NOTES[10] = (
        f"{len(counts)} AM runs, {100 * share:.2f}% within 10 iterations, max {counts.max()}; "
        "runs that exhausted max_iterations fail their own criterion"
    )
    # report-only beyond the hard failure on exhaustion, which the suites above assert
    if not iteration_budget_ok(counts):
        pytest.xfail(f"only {100 * share:.2f}% of AM runs needed at most 10 iterations")
