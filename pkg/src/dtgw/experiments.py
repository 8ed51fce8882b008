"""Perturbation models, complete-linkage clustering, error statistics and
re-identification scoring.

All randomness goes through :func:`make_rng`, a Philox (counter-based)
generator, so a seed reproduces the same output on every platform.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .distance import (
    DtgwOptions,
    am_heuristic,
    exact_dtgw,
    non_consistent_distance,
    non_temporal_distance,
)
from .model import Edge, TemporalGraph, VertexMapping, underlying_graph

NOISE_MODELS = ("deletion", "temporal-rewire", "underlying-rewire", "layer-stretch")
REWIRE_RETRIES = 20


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed) & (2**64 - 1)))


@dataclass(frozen=True)
class NoiseSpec:
    model: str
    p: float = 0.0
    seed: int = 0

    def __post_init__(self):
        model = self.model.lower().replace("_", "-")
        if model not in NOISE_MODELS:
            raise ValueError(f"unknown noise model {self.model!r}; expected one of {NOISE_MODELS}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("noise probability must lie in [0, 1]")
        object.__setattr__(self, "model", model)


def _ordered(e: Edge, rng) -> tuple[int, int]:
    return (e[0], e[1]) if rng.random() < 0.5 else (e[1], e[0])


def _canon(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


def _delete(g: TemporalGraph, p: float, rng) -> list[list[Edge]]:
    layers = []
    for layer in g.layers:
        if rng.random() < p:
            layers.append([])
            continue
        keep = rng.random(len(layer)) >= p
        layers.append([e for e, k in zip(layer, keep) if k])
    return layers


def _temporal_rewire(g: TemporalGraph, p: float, rng) -> list[list[Edge]]:
    layers = [set(layer) for layer in g.layers]
    occurrences = [(e, i) for i, layer in enumerate(g.layers) for e in layer]
    # occurrences mutate as edges get rewired; positions stay stable
    for k in range(len(occurrences)):
        if rng.random() >= p:
            continue
        e, i = occurrences[k]
        for _ in range(REWIRE_RETRIES):
            k2 = int(rng.integers(len(occurrences)))
            e2, t = occurrences[k2]
            if k2 == k:
                continue
            u, v = _ordered(e, rng)
            u2, v2 = _ordered(e2, rng)
            new1, new2 = _canon(u, v2), _canon(u2, v)
            if u == v2 or u2 == v or (new1 == new2 and i == t):
                continue
            layers[i].discard(e)
            layers[t].discard(e2)
            if new1 in layers[i] or new2 in layers[t]:
                layers[i].add(e)
                layers[t].add(e2)
                continue
            layers[i].add(new1)
            layers[t].add(new2)
            occurrences[k] = (new1, i)
            occurrences[k2] = (new2, t)
            break
    return [sorted(layer) for layer in layers]


def _underlying_rewire(g: TemporalGraph, p: float, rng) -> list[list[Edge]]:
    edges = sorted(underlying_graph(g).edges)
    current = set(edges)
    relabel = {e: e for e in edges}  # original underlying edge -> its current endpoints
    slots = list(edges)
    for k in range(len(slots)):
        if rng.random() >= p:
            continue
        e = slots[k]
        for _ in range(REWIRE_RETRIES):
            k2 = int(rng.integers(len(slots)))
            if k2 == k:
                continue
            e2 = slots[k2]
            u, v = _ordered(e, rng)
            u2, v2 = _ordered(e2, rng)
            if u == v2 or u2 == v:
                continue
            new1, new2 = _canon(u, v2), _canon(u2, v)
            if new1 == new2 or new1 in current or new2 in current:
                continue
            current -= {e, e2}
            current |= {new1, new2}
            slots[k], slots[k2] = new1, new2
            break
    for orig, now in zip(edges, slots):
        relabel[orig] = now
    return [sorted(relabel[e] for e in layer) for layer in g.layers]


def stretch_copies(rng, size: int) -> np.ndarray:
    """Draw ``X >= 1`` with ``P(X >= x) = x**-3`` by inverse transform."""
    u = 1.0 - rng.random(size)  # in (0, 1]
    return np.floor(u ** (-1.0 / 3.0)).astype(int)


def _layer_stretch(g: TemporalGraph, rng) -> list[list[Edge]]:
    counts = stretch_copies(rng, g.lifetime)
    out = []
    for layer, c in zip(g.layers, counts):
        out.extend([list(layer)] * int(c))
    return out


def perturb(g: TemporalGraph, spec: NoiseSpec) -> TemporalGraph:
    """Noisy copy of ``g``; deterministic for a fixed ``spec.seed``.

    ``deletion`` empties each layer with probability ``p`` and otherwise drops
    each edge with probability ``p``. ``temporal-rewire`` rewires each temporal
    edge with probability ``p`` by swapping endpoints with a uniformly drawn
    edge occurrence. ``underlying-rewire`` does the same on the underlying
    graph and relabels every occurrence of a rewired edge. Rewirings that
    would create a self-loop or a duplicate edge are redrawn up to
    ``REWIRE_RETRIES`` times and then skipped. ``layer-stretch`` replaces each
    layer by ``X`` copies with ``P(X >= x) = x**-3`` (``p`` is ignored).
    """
    rng = make_rng(spec.seed)
    if spec.model == "deletion":
        layers = _delete(g, spec.p, rng)
    elif spec.model == "temporal-rewire":
        layers = _temporal_rewire(g, spec.p, rng)
    elif spec.model == "underlying-rewire":
        layers = _underlying_rewire(g, spec.p, rng)
    else:
        layers = _layer_stretch(g, rng)
    return TemporalGraph.build(g.vertex_labels, layers)


def shift_layers(g: TemporalGraph, k: int) -> TemporalGraph:
    """Delay every event by ``k`` layers (prepend empty layers)."""
    return TemporalGraph.build(g.vertex_labels, [[]] * k + [list(layer) for layer in g.layers])


def random_relabel(g: TemporalGraph, seed: int) -> tuple[TemporalGraph, np.ndarray]:
    """Shuffle vertex positions; ``truth[v]`` is the new index of old vertex ``v``."""
    perm = make_rng(seed).permutation(g.n)
    return g.relabeled(perm), perm


def random_temporal_graph(n: int, T: int, density: float, seed: int) -> TemporalGraph:
    """Independent Erdos-Renyi layers with edge probability ``density``."""
    rng = make_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    layers = []
    for _ in range(T):
        keep = rng.random(len(iu)) < density
        layers.append(list(zip(iu[keep].tolist(), ju[keep].tolist())))
    return TemporalGraph.from_edge_lists(n, layers)


# -- clustering -----------------------------------------------------------------


@dataclass(frozen=True)
class Dendrogram:
    """Merge history in the usual linkage convention.

    Leaves are clusters ``0..n-1``; merge ``k`` creates cluster ``n + k``.
    """

    merges: tuple[tuple[int, int, float], ...]
    labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def members(self) -> dict[int, list[int]]:
        out = {i: [i] for i in range(self.n)}
        for k, (a, b, _) in enumerate(self.merges):
            out[self.n + k] = sorted(out[a] + out[b])
        return out

    def to_nested(self) -> dict:
        def node(c):
            if c < self.n:
                return {"leaf": self.labels[c]}
            a, b, height = self.merges[c - self.n]
            return {"height": height, "children": [node(a), node(b)]}

        return node(self.n + len(self.merges) - 1) if self.merges else node(0)

    def to_newick(self) -> str:
        """Newick text; branch lengths are half the height differences."""
        heights = {i: 0.0 for i in range(self.n)}

        def esc(label: str) -> str:
            return "'" + label.replace("'", "''") + "'" if _needs_quote(label) else label

        def node(c):
            if c < self.n:
                return esc(self.labels[c])
            a, b, h = self.merges[c - self.n]
            heights[c] = h
            parts = []
            for child in (a, b):
                text = node(child)
                parts.append(f"{text}:{(h - heights[child]) / 2:g}")
            return "(" + ",".join(parts) + ")"

        root = self.n + len(self.merges) - 1 if self.merges else 0
        return node(root) + ";"


def _needs_quote(label: str) -> bool:
    return any(ch in label for ch in " ()[]':;,")


def complete_linkage_cluster(distances, labels: Sequence[str] | None = None) -> Dendrogram:
    """Agglomerative clustering; cluster distance is the largest pairwise distance.

    Among equally close cluster pairs the one with the smallest cluster ids
    merges first.
    """
    D = np.asarray(distances, dtype=float)
    n = D.shape[0]
    if D.shape != (n, n):
        raise ValueError("distance matrix must be square")
    if not np.all(np.isfinite(D)) or np.any(D < 0):
        raise ValueError("distance matrix must be finite and nonnegative")
    if not np.allclose(D, D.T, rtol=0, atol=1e-9):
        raise ValueError("distance matrix must be symmetric")
    if np.any(np.abs(np.diag(D)) > 1e-9):
        raise ValueError("distance matrix must have a zero diagonal")
    labels = tuple(str(x) for x in labels) if labels is not None else tuple(str(i) for i in range(n))
    active = list(range(n))
    dist = {(i, j): D[i, j] for i in range(n) for j in range(i + 1, n)}
    merges = []
    for k in range(n - 1):
        a, b = min(dist, key=lambda pair: (dist[pair], pair))
        height = dist[(a, b)]
        new = n + k
        active.remove(a)
        active.remove(b)
        for c in active:
            da = dist.pop((min(a, c), max(a, c)))
            db = dist.pop((min(b, c), max(b, c)))
            dist[(c, new)] = max(da, db)
        del dist[(a, b)]
        active.append(new)
        merges.append((a, b, float(height)))
    return Dendrogram(tuple(merges), labels)


def cut_dendrogram(d: Dendrogram, k: int) -> list[list[int]]:
    """Partition into ``k`` clusters by undoing the last ``k - 1`` merges."""
    if not 1 <= k <= d.n:
        raise ValueError(f"cluster count {k} outside [1, {d.n}]")
    members = d.members()
    alive = set(range(d.n))
    for j, (a, b, _) in enumerate(d.merges[: d.n - k]):
        alive -= {a, b}
        alive.add(d.n + j)
    return sorted((members[c] for c in alive), key=lambda c: c[0])


# -- statistics -------------------------------------------------------------------


@dataclass(frozen=True)
class ErrorStats:
    avg: float
    std: float
    p0: float
    max: float
    count: int

    def as_dict(self) -> dict:
        return {"avg": self.avg, "std": self.std, "P0": self.p0, "max": self.max, "count": self.count}


def error_percentages(pairs) -> np.ndarray:
    eps = []
    for heuristic, exact in pairs:
        if exact == 0:
            if heuristic == 0:
                eps.append(0.0)
                continue
            raise ValueError(f"error percentage undefined for pair {(heuristic, exact)}")
        eps.append(100.0 * (heuristic - exact) / exact)
    return np.asarray(eps)


def error_stats(pairs) -> ErrorStats:
    """Mean, population std, fraction exactly solved and max of the error
    percentages ``100 * (heuristic - exact) / exact``."""
    eps = error_percentages(pairs)
    if len(eps) == 0:
        raise ValueError("no pairs given")
    # float noise on equal values must still count as solved
    eps = np.where(np.abs(eps) < 1e-9, 0.0, eps)
    return ErrorStats(
        float(eps.mean()), float(eps.std()), float(np.mean(eps == 0)), float(eps.max()), len(eps)
    )


def deanonymization_accuracy(m: VertexMapping, truth: Mapping[int, int] | Sequence[int]) -> float:
    """Fraction of mapped pairs agreeing with ``truth``, over ``min(|V|, |W|)``."""
    denom = min(m.n_left, m.n_right)
    if denom == 0:
        return 1.0
    if isinstance(truth, Mapping):
        lookup = truth.get
    else:
        seq = list(truth)
        lookup = lambda u: seq[u] if 0 <= u < len(seq) else None  # noqa: E731
    hits = sum(1 for u, v in m.pairs if lookup(u) == v)
    return hits / denom


# -- pairwise matrices --------------------------------------------------------------

METHODS: dict[str, Callable] = {
    "am": lambda g, h, o: am_heuristic(g, h, o).distance,
    "exact": lambda g, h, o: exact_dtgw(g, h, o).distance,
    "non-consistent": non_consistent_distance,
    "non-temporal": non_temporal_distance,
}


def _pair_job(args):
    i, j, g, h, method, opts = args
    return i, j, METHODS[method](g, h, opts)


def default_jobs() -> int:
    return max(1, int(os.environ.get("DTGW_JOBS", "1")))


def pairwise_distances(
    graphs: Sequence[TemporalGraph], method: str = "am", opts: DtgwOptions | None = None, jobs: int | None = None
) -> np.ndarray:
    """Symmetric distance matrix; each unordered pair is computed once and mirrored."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {tuple(METHODS)}")
    opts = opts or DtgwOptions()
    jobs = default_jobs() if jobs is None else max(1, jobs)
    n = len(graphs)
    tasks = [(i, j, graphs[i], graphs[j], method, opts) for i in range(n) for j in range(i + 1, n)]
    out = np.zeros((n, n))
    if jobs == 1 or len(tasks) < 2:
        results = map(_pair_job, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(_pair_job, tasks, chunksize=max(1, len(tasks) // (4 * jobs)))
    for i, j, value in results:
        out[i, j] = out[j, i] = value
    if jobs != 1 and len(tasks) >= 2:
        pool.shutdown()
    return out


def iteration_budget_ok(counts: Sequence[int], limit: int = 10, share: float = 0.99) -> bool:
    counts = np.asarray(counts)
    return bool(len(counts) == 0 or np.mean(counts <= limit) >= share)
