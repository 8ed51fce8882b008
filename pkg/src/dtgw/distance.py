"""The dynamic temporal graph warping distance.

The objective for a vertex mapping ``M`` and warping path ``p`` is
``sum over (i, j) in p of C(G_i, H_j, M)``, where ``C`` adds the signature
distances of mapped pairs and the deletion costs of unmapped vertices. Fixing
``M`` leaves a DTW problem, fixing ``p`` leaves an assignment problem; the
alternating heuristic and the exact solvers are built from those two halves.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from .assignment import pad_to_square, solve_assignment, solve_assignment_lex
from .model import TemporalGraph, VertexMapping, WarpingPath, underlying_graph, validate_warping_path
from .signatures import (
    DeletionCost,
    Metric,
    SignatureKind,
    SignatureMatrix,
    compute_signatures,
    deletion_costs,
    pairwise,
)
from .warp import (
    Band,
    count_warping_paths,
    dtw_optimal_path,
    dtw_totals,
    shortest_warping_path,
)

ZERO_TOL = 1e-9
# cap on float64 elements materialized per vectorized block
_CHUNK = 1 << 22

INITS = ("sigma_star", "sigma_opt", "swp", "owp")

Init = Union[str, WarpingPath, VertexMapping]


class BudgetExceededError(ValueError):
    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


@dataclass(frozen=True)
class DtgwOptions:
    """Knobs shared by every distance computation.

    ``init`` is one of ``sigma_star``, ``sigma_opt``, ``swp``, ``owp`` or a
    concrete :class:`WarpingPath` / :class:`VertexMapping` seed. With
    ``pin_path`` and a path seed the path is kept fixed and only the mapping is
    optimized. ``budget`` caps the candidate count of the exact solvers.
    """

    signature: SignatureKind = SignatureKind.DEGREE
    metric: Metric = Metric.L1
    deletion: DeletionCost = field(default_factory=DeletionCost)
    band: Band = field(default_factory=Band)
    normalize: bool = False
    lambda_budget: int | None = None
    max_iterations: int = 100
    init: Init = "swp"
    pin_path: bool = False
    budget: int = 10**6

    def __post_init__(self):
        object.__setattr__(self, "signature", SignatureKind.parse(self.signature))
        object.__setattr__(self, "metric", Metric.parse(self.metric))
        object.__setattr__(self, "deletion", DeletionCost.parse(self.deletion))
        if not isinstance(self.band, Band):
            object.__setattr__(self, "band", Band(None if self.band is None else int(self.band)))
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.lambda_budget is not None and self.lambda_budget < 0:
            raise ValueError("lambda_budget must be nonnegative")
        if isinstance(self.init, str):
            init = self.init.lower().replace("-", "_")
            aliases = {"sigma*": "sigma_star", "sigmastar": "sigma_star", "sigmaopt": "sigma_opt"}
            init = aliases.get(init, init)
            if init not in INITS:
                raise ValueError(f"unknown init {self.init!r}; expected one of {INITS}")
            object.__setattr__(self, "init", init)
        elif not isinstance(self.init, (WarpingPath, VertexMapping)):
            raise ValueError("init must be a name, a WarpingPath or a VertexMapping")

    def with_(self, **changes) -> "DtgwOptions":
        return replace(self, **changes)


@dataclass(frozen=True)
class DtgwResult:
    distance: float
    mapping: VertexMapping
    path: WarpingPath
    iterations: int = 0
    trace: tuple[float, ...] = ()
    exact: bool = False
    converged: bool = True
    method: str = ""

    def report(self, g_labels=None, h_labels=None) -> dict:
        """Plain-data summary; mapping pairs use labels when given."""
        if g_labels is None:
            pairs = [list(pair) for pair in self.mapping.pairs]
        else:
            pairs = [[g_labels[u], h_labels[v]] for u, v in self.mapping.pairs]
        return {
            "distance": self.distance,
            "exact": self.exact,
            "method": self.method,
            "iterations": self.iterations,
            "converged": self.converged,
            "trace": list(self.trace),
            "mapping": pairs,
            "path": self.path.to_list(),
        }


def _signatures(x, kind) -> SignatureMatrix:
    if isinstance(x, SignatureMatrix):
        return x
    return compute_signatures(x, kind)


class PairCosts:
    """Signature data of a graph pair plus the cost primitives built on it.

    ``cell(i, j)`` is the ``|V| x |W|`` matrix of signature distances between
    layer ``i`` of the first graph and layer ``j`` of the second (0-based).
    """

    def __init__(self, gsig: SignatureMatrix, hsig: SignatureMatrix, metric, deletion):
        if gsig.k != hsig.k:
            raise ValueError("signature dimensions differ")
        self.metric = Metric.parse(metric)
        self.deletion = DeletionCost.parse(deletion)
        self.F = gsig.values
        self.H = hsig.values
        self.T, self.n, _ = self.F.shape
        self.U, self.m, _ = self.H.shape
        self.del_g = deletion_costs(self.deletion, self.metric, self.F)
        self.del_h = deletion_costs(self.deletion, self.metric, self.H)
        self._full = None

    @classmethod
    def from_graphs(cls, g, h, opts: DtgwOptions) -> "PairCosts":
        return cls(
            _signatures(g, opts.signature), _signatures(h, opts.signature), opts.metric, opts.deletion
        )

    def swapped(self) -> "PairCosts":
        other = PairCosts.__new__(PairCosts)
        other.metric, other.deletion = self.metric, self.deletion
        other.F, other.H = self.H, self.F
        other.T, other.n, other.U, other.m = self.U, self.m, self.T, self.n
        other.del_g, other.del_h = self.del_h, self.del_g
        other._full = None if self._full is None else self._full.transpose(1, 0, 3, 2)
        return other

    def cells(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Stack of ``cell`` matrices for paired layer indices, shape ``(L, n, m)``."""
        if self._full is not None:
            return self._full[rows, cols]
        return pairwise(self.metric, self.F[rows][:, :, None, :], self.H[cols][:, None, :, :])

    def full(self) -> np.ndarray:
        if self._full is None:
            rows, cols = np.meshgrid(np.arange(self.T), np.arange(self.U), indexing="ij")
            self._full = self.cells(rows.ravel(), cols.ravel()).reshape(
                self.T, self.U, self.n, self.m
            )
        return self._full

    def _row_block(self, per_row: int) -> int:
        return max(1, _CHUNK // max(1, per_row))

    # -- objective pieces -------------------------------------------------

    def layer_costs(self, mapping: VertexMapping) -> np.ndarray:
        """``T x U`` matrix of ``C(G_i, H_j, M)`` for a fixed mapping."""
        left = np.array([u for u, _ in mapping.pairs], dtype=np.intp)
        right = np.array([v for _, v in mapping.pairs], dtype=np.intp)
        A = self.F[:, left, :]
        B = self.H[:, right, :]
        out = np.empty((self.T, self.U))
        step = self._row_block(self.U * max(1, len(left)))
        for s in range(0, self.T, step):
            blk = pairwise(self.metric, A[s : s + step, None, :, :], B[None, :, :, :])
            out[s : s + step] = blk.sum(axis=-1)
        out += self.del_g[:, mapping.left_unmapped()].sum(axis=1)[:, None]
        out += self.del_h[:, mapping.right_unmapped()].sum(axis=1)[None, :]
        return out

    def path_sigma(self, path: WarpingPath) -> np.ndarray:
        """Padded square assignment costs for a fixed path."""
        rows, cols = path.indices()
        sigma = np.zeros((self.n, self.m))
        step = self._row_block(self.n * self.m)
        for s in range(0, len(rows), step):
            sigma += self.cells(rows[s : s + step], cols[s : s + step]).sum(axis=0)
        return pad_to_square(
            sigma, self.del_g[rows].sum(axis=0), self.del_h[cols].sum(axis=0)
        )

    def mapping_from_permutation(self, perm: np.ndarray) -> VertexMapping:
        if self.n <= self.m:
            pairs = [(u, int(perm[u])) for u in range(self.n)]
        else:
            pairs = [(u, int(perm[u])) for u in range(self.n) if perm[u] < self.m]
        return VertexMapping(pairs, self.n, self.m)

    def objective(self, mapping: VertexMapping, path: WarpingPath) -> float:
        rows, cols = path.indices()
        return float(self.layer_costs(mapping)[rows, cols].sum())

    # -- the two fixed halves ---------------------------------------------

    def best_path(self, mapping: VertexMapping, band=None) -> tuple[WarpingPath, float]:
        return dtw_optimal_path(self.layer_costs(mapping), band)

    def best_mapping(self, path: WarpingPath) -> tuple[VertexMapping, float]:
        sigma = self.path_sigma(path)
        sol = solve_assignment(sigma)
        return self.mapping_from_permutation(sol.permutation), sol.total_cost

    def layer_distance(self, i: int, j: int) -> tuple[float, VertexMapping]:
        cell = self.cells(np.array([i]), np.array([j]))[0]
        padded = pad_to_square(cell, self.del_g[i], self.del_h[j])
        sol = solve_assignment(padded)
        return sol.total_cost, self.mapping_from_permutation(sol.permutation)

    def layer_distance_matrix(self) -> np.ndarray:
        D = np.empty((self.T, self.U))
        for i in range(self.T):
            for j in range(self.U):
                D[i, j] = self.layer_distance(i, j)[0]
        return D

    # -- seed estimates -----------------------------------------------------

    def sigma_estimate(self, kind: str) -> np.ndarray:
        """Padded ``sigma_star`` (sum over all layer pairs) or ``sigma_opt``
        (per first-graph layer, the best layer of the second graph)."""
        est = np.zeros((self.n, self.m))
        step = self._row_block(self.U * self.n * self.m)
        for s in range(0, self.T, step):
            blk = pairwise(
                self.metric,
                self.F[s : s + step, None, :, None, :],
                self.H[None, :, None, :, :],
            )
            if kind == "sigma_star":
                est += blk.sum(axis=(0, 1))
            else:
                est += blk.min(axis=1).sum(axis=0)
        if kind == "sigma_star":
            row_pad = self.U * self.del_g.sum(axis=0)
            col_pad = self.T * self.del_h.sum(axis=0)
        else:
            row_pad = self.del_g.sum(axis=0)
            col_pad = self.T * self.del_h.min(axis=0)
        return pad_to_square(est, row_pad, col_pad)


def _costs(g, h, opts: DtgwOptions) -> PairCosts:
    if isinstance(g, PairCosts):
        return g
    return PairCosts.from_graphs(g, h, opts)


def _improves(new: float, old: float) -> bool:
    return old == np.inf or new < old - ZERO_TOL * max(1.0, abs(old))


def _scale(raw: float, n: int, m: int, normalize: bool) -> float:
    k = min(n, m)
    return raw / k if normalize and k else raw


def normalize_distance(raw: float, g, h, normalize: bool = True) -> float:
    """Divide by ``min(|V|, |W|)`` when ``normalize`` is set."""
    if raw < 0:
        raise ValueError("raw distance must be nonnegative")
    return _scale(raw, g.n, h.n, normalize)


def _finish(costs: PairCosts, opts, mapping, path, **kw) -> DtgwResult:
    raw = costs.objective(mapping, path)
    trace = tuple(_scale(t, costs.n, costs.m, opts.normalize) for t in kw.pop("trace", ()))
    return DtgwResult(
        _scale(raw, costs.n, costs.m, opts.normalize), mapping, path, trace=trace, **kw
    )


# -- public single-step operations -------------------------------------------


def _layer_index(i: int, size: int, name: str) -> int:
    if not 1 <= i <= size:
        raise IndexError(f"{name} layer index {i} outside [1, {size}]")
    return i - 1


def mapping_cost(gsig, hsig, i: int, j: int, m: VertexMapping, metric="l1", deletion=None) -> float:
    """``C(G_i, H_j, M)`` for 1-based layer indices."""
    costs = PairCosts(gsig, hsig, metric, deletion or DeletionCost())
    i0 = _layer_index(i, costs.T, "first graph")
    j0 = _layer_index(j, costs.U, "second graph")
    cell = costs.cells(np.array([i0]), np.array([j0]))[0]
    total = sum(cell[u, v] for u, v in m.pairs)
    total += costs.del_g[i0, m.left_unmapped()].sum() + costs.del_h[j0, m.right_unmapped()].sum()
    return float(total)


def layer_distance(gsig, hsig, i: int, j: int, metric="l1", deletion=None) -> float:
    """Minimum of ``mapping_cost`` over all vertex mappings (1-based layers)."""
    costs = PairCosts(gsig, hsig, metric, deletion or DeletionCost())
    i0 = _layer_index(i, costs.T, "first graph")
    j0 = _layer_index(j, costs.U, "second graph")
    return costs.layer_distance(i0, j0)[0]


def optimal_path_for_mapping(gsig, hsig, m: VertexMapping, opts=None) -> tuple[WarpingPath, float]:
    opts = opts or DtgwOptions()
    return _costs(gsig, hsig, opts).best_path(m, opts.band)


def optimal_mapping_for_path(gsig, hsig, p: WarpingPath, opts=None) -> tuple[VertexMapping, float]:
    opts = opts or DtgwOptions()
    costs = _costs(gsig, hsig, opts)
    if p.order != (costs.T, costs.U) or validate_warping_path(p) is not None:
        raise ValueError(f"path is not a valid warping path of order {costs.T}x{costs.U}")
    return costs.best_mapping(p)


def path_objective(g, h, m: VertexMapping, p: WarpingPath, opts=None) -> float:
    """Raw objective of a (mapping, path) pair."""
    opts = opts or DtgwOptions()
    return _costs(g, h, opts).objective(m, p)


# -- initializations ----------------------------------------------------------


def _init_sigma(costs: PairCosts, kind: str) -> VertexMapping:
    # near-ties in the estimate are common (vertices with equal signature
    # multisets); among estimate-optimal mappings prefer the one that is
    # cheapest along the shortest warping path
    primary = costs.sigma_estimate(kind)
    secondary = costs.path_sigma(shortest_warping_path(costs.T, costs.U))
    sol = solve_assignment_lex(primary, secondary)
    return costs.mapping_from_permutation(sol.permutation)


def init_sigma_star(gsig, hsig, metric="l1", deletion=None) -> VertexMapping:
    return _init_sigma(PairCosts(gsig, hsig, metric, deletion or DeletionCost()), "sigma_star")


def init_sigma_opt(gsig, hsig, metric="l1", deletion=None) -> VertexMapping:
    return _init_sigma(PairCosts(gsig, hsig, metric, deletion or DeletionCost()), "sigma_opt")


def init_owp(gsig, hsig, opts=None) -> WarpingPath:
    """DTW path over the matrix of per-layer-pair optimal mapping costs."""
    opts = opts or DtgwOptions()
    costs = _costs(gsig, hsig, opts)
    return dtw_optimal_path(costs.layer_distance_matrix(), opts.band)[0]


# -- heuristic ------------------------------------------------------------------


def am_heuristic(g, h, opts=None) -> DtgwResult:
    """Alternate optimal mappings and optimal paths until no strict improvement.

    Each iteration solves both halves; the loop stops as soon as an iteration
    fails to lower the objective or after ``max_iterations``.
    """
    opts = opts or DtgwOptions()
    costs = _costs(g, h, opts)
    init = opts.init
    path: WarpingPath | None = None
    mapping: VertexMapping | None = None
    if isinstance(init, WarpingPath):
        if init.order != (costs.T, costs.U) or validate_warping_path(init) is not None:
            raise ValueError(f"seed path is not a valid warping path of order {costs.T}x{costs.U}")
        path = init
    elif isinstance(init, VertexMapping):
        if (init.n_left, init.n_right) != (costs.n, costs.m):
            raise ValueError("seed mapping does not match the vertex counts")
        mapping = init
    elif init == "swp":
        path = shortest_warping_path(costs.T, costs.U)
    elif init == "owp":
        path = dtw_optimal_path(costs.layer_distance_matrix(), opts.band)[0]
    else:
        mapping = _init_sigma(costs, init)
    name = init if isinstance(init, str) else ("fixed_path" if path is not None else "fixed_mapping")

    if path is not None and opts.pin_path:
        mapping, total = costs.best_mapping(path)
        return _finish(
            costs, opts, mapping, path, iterations=1, trace=(total,), method=f"am:{name}:pinned"
        )

    # the trace holds the objective of every accepted iterate, so it strictly decreases
    trace: list[float] = []
    converged = False
    iterations = 0
    best = None
    for iterations in range(1, opts.max_iterations + 1):
        if path is not None:
            mapping, _ = costs.best_mapping(path)
            path, obj = costs.best_path(mapping, opts.band)
        else:
            path, _ = costs.best_path(mapping, opts.band)
            mapping, obj = costs.best_mapping(path)
        if best is not None and not _improves(obj, best[0]):
            converged = True
            mapping, path = best[1], best[2]
            break
        trace.append(obj)
        best = (obj, mapping, path)
    return _finish(
        costs, opts, mapping, path,
        iterations=iterations, trace=tuple(trace), converged=converged, method=f"am:{name}",
    )


# -- exact solvers ----------------------------------------------------------------


def _count_in_band(T: int, U: int, band: Band) -> int:
    mask = band.mask(T, U)
    N = [[0] * U for _ in range(T)]
    for i in range(T):
        for j in range(U):
            if not mask[i, j]:
                continue
            if i == 0 and j == 0:
                N[i][j] = 1
                continue
            N[i][j] = (
                (N[i - 1][j] if i else 0)
                + (N[i][j - 1] if j else 0)
                + (N[i - 1][j - 1] if i and j else 0)
            )
    return N[-1][-1]


def candidate_path_count(T: int, U: int, opts: DtgwOptions) -> int:
    """Upper bound on the number of paths an exact path search visits."""
    count = count_warping_paths(max(T, U), min(T, U), opts.lambda_budget)
    if not opts.band.unconstrained:
        count = min(count, _count_in_band(T, U, opts.band))
    return count


def candidate_mapping_count(n: int, m: int) -> int:
    return math.perm(max(n, m), min(n, m))


def _exact_by_paths(costs: PairCosts, opts: DtgwOptions):
    """Depth-first search over warping paths with a cheap lower bound.

    The prefix bound adds per-cell optimal mapping costs (a relaxation of one
    consistent mapping) to the best DTW completion over those same costs.
    """
    T, U = costs.T, costs.U
    big, small = max(T, U), min(T, U)
    max_len = T + U - 1 if opts.lambda_budget is None else min(T + U - 1, big + opts.lambda_budget)
    mask = opts.band.mask(T, U)
    full = costs.full()
    D = costs.layer_distance_matrix()
    # suffix[i, j]: cheapest completion from cell (i, j) (inclusive) to (T-1, U-1)
    suffix = np.full((T + 1, U + 1), np.inf)
    for i in range(T - 1, -1, -1):
        for j in range(U - 1, -1, -1):
            if not mask[i, j]:
                continue
            if i == T - 1 and j == U - 1:
                suffix[i, j] = D[i, j]
            else:
                suffix[i, j] = D[i, j] + min(suffix[i + 1, j + 1], suffix[i, j + 1], suffix[i + 1, j])
    del_g, del_h = costs.del_g, costs.del_h
    best = [np.inf, None, None]
    cells: list[tuple[int, int]] = [(0, 0)]

    def leaf(sigma, dg, dh):
        padded = pad_to_square(sigma, dg, dh)
        sol = solve_assignment(padded)
        if _improves(sol.total_cost, best[0]):
            best[0] = sol.total_cost
            best[1] = sol.permutation
            best[2] = tuple(cells)

    def rec(i, j, sigma, dg, dh, lower):
        if i == T - 1 and j == U - 1:
            leaf(sigma, dg, dh)
            return
        for di, dj in ((1, 1), (0, 1), (1, 0)):
            ni, nj = i + di, j + dj
            if ni >= T or nj >= U or not mask[ni, nj]:
                continue
            if len(cells) + 1 + max(T - 1 - ni, U - 1 - nj) > max_len:
                continue
            if not _improves(lower + suffix[ni, nj], best[0]):
                continue
            cells.append((ni, nj))
            rec(ni, nj, sigma + full[ni, nj], dg + del_g[ni], dh + del_h[nj], lower + D[ni, nj])
            cells.pop()

    if mask[0, 0]:
        rec(0, 0, full[0, 0].copy(), del_g[0].copy(), del_h[0].copy(), D[0, 0])
    if best[1] is None:
        raise ValueError("no warping path satisfies the band and length constraints")
    path = WarpingPath([(i + 1, j + 1) for i, j in best[2]], (T, U))
    return costs.mapping_from_permutation(best[1]), path


def _injections(n: int, m: int):
    return itertools.permutations(range(m), n)


def _exact_by_mappings(costs: PairCosts, opts: DtgwOptions):
    """Enumerate every vertex mapping; DTW per mapping, vectorized in batches."""
    if costs.n > costs.m:
        mapping, path = _exact_by_mappings(costs.swapped(), opts)
        return mapping.inverse(), path.transposed()
    T, U, n, m = costs.T, costs.U, costs.n, costs.m
    full = costs.full()
    del_h_total = costs.del_h.sum(axis=1)
    batch = max(1, _CHUNK // max(1, T * U * max(n, 1)))
    best_val, best_perm = np.inf, None
    gen = _injections(n, m)
    left = np.arange(n)
    while True:
        perms = np.array(list(itertools.islice(gen, batch)), dtype=np.intp).reshape(-1, n)
        if len(perms) == 0:
            break
        if n:
            C = full[:, :, left[None, :], perms].sum(axis=-1)  # (T, U, P)
            dh = del_h_total[:, None] - costs.del_h[:, perms].sum(axis=-1)  # (U, P)
        else:
            C = np.zeros((T, U, len(perms)))
            dh = np.repeat(del_h_total[:, None], len(perms), axis=1)
        C = C + dh[None, :, :]
        totals = dtw_totals(np.moveaxis(C, -1, 0), opts.band)
        k = int(np.argmin(totals))
        if _improves(totals[k], best_val):
            best_val, best_perm = totals[k], perms[k]
    if best_perm is None or not np.isfinite(best_val):
        raise ValueError("no warping path satisfies the band constraint")
    mapping = VertexMapping([(u, int(best_perm[u])) for u in range(n)], n, m)
    path, _ = costs.best_path(mapping, opts.band)
    return mapping, path


def exact_dtgw(g, h, opts=None, method: str = "auto") -> DtgwResult:
    """Exact distance by exhaustive search.

    ``method="paths"`` enumerates warping paths (honouring ``lambda_budget``
    and the band) and solves one assignment per path; ``method="mappings"``
    enumerates vertex mappings and solves one DTW per mapping. ``auto`` takes
    the smaller search space. The candidate count must not exceed
    ``opts.budget``.
    """
    opts = opts or DtgwOptions()
    costs = _costs(g, h, opts)
    n_paths = candidate_path_count(costs.T, costs.U, opts)
    n_maps = candidate_mapping_count(costs.n, costs.m)
    if method == "auto":
        method = "paths" if opts.lambda_budget is not None or n_paths <= n_maps else "mappings"
    if method == "paths":
        if n_paths > opts.budget:
            raise BudgetExceededError(
                f"{n_paths} candidate warping paths exceed the budget of {opts.budget}", n_paths
            )
        mapping, path = _exact_by_paths(costs, opts)
    elif method == "mappings":
        if opts.lambda_budget is not None:
            raise ValueError("the mapping enumeration does not support a path length budget")
        if n_maps > opts.budget:
            raise BudgetExceededError(
                f"{n_maps} candidate vertex mappings exceed the budget of {opts.budget}", n_maps
            )
        mapping, path = _exact_by_mappings(costs, opts)
    else:
        raise ValueError(f"unknown exact method {method!r}")
    return _finish(costs, opts, mapping, path, exact=True, method=f"exact:{method}")


@dataclass(frozen=True)
class ZeroTest:
    is_zero: bool
    mapping: VertexMapping | None = None
    path: WarpingPath | None = None

    def __bool__(self) -> bool:
        return self.is_zero


def _blocks(values: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of consecutive layers with identical layer signatures."""
    starts = [0]
    for i in range(1, len(values)):
        if not np.array_equal(values[i], values[i - 1]):
            starts.append(i)
    ends = starts[1:] + [len(values)]
    return [(s, e - 1) for s, e in zip(starts, ends)]


def staircase_path(g_blocks, h_blocks, order) -> WarpingPath:
    """Pair the k-th layer run of each graph: along the run of the second
    graph first, then down the run of the first, then diagonally into the next
    pair of runs."""
    pairs = []
    for (a, b), (c, d) in zip(g_blocks, h_blocks):
        pairs.extend((a + 1, j + 1) for j in range(c, d + 1))
        pairs.extend((i + 1, d + 1) for i in range(a + 1, b + 1))
    return WarpingPath(pairs, order)


def is_zero_dtgw(g, h, opts=None) -> ZeroTest:
    """Polynomial test for distance zero between equally sized graphs.

    At distance zero, runs of identical consecutive layer signatures must be
    warped run-to-run in order, which fixes one candidate path; the answer is
    then a single assignment on that path.
    """
    opts = opts or DtgwOptions()
    costs = _costs(g, h, opts)
    if costs.n != costs.m:
        raise ValueError("the zero-distance test requires equal vertex counts")
    g_blocks = _blocks(costs.F)
    h_blocks = _blocks(costs.H)
    if len(g_blocks) != len(h_blocks):
        return ZeroTest(False)
    path = staircase_path(g_blocks, h_blocks, (costs.T, costs.U))
    mapping, total = costs.best_mapping(path)
    if total <= ZERO_TOL:
        return ZeroTest(True, mapping, path)
    return ZeroTest(False)


# -- baselines ----------------------------------------------------------------------


def non_consistent_distance(g, h, opts=None) -> float:
    """DTW over per-layer-pair optimal mapping costs (a fresh mapping per pair)."""
    opts = opts or DtgwOptions()
    costs = _costs(g, h, opts)
    _, total = dtw_optimal_path(costs.layer_distance_matrix(), opts.band)
    return _scale(total, costs.n, costs.m, opts.normalize)


def non_temporal_distance(g: TemporalGraph, h: TemporalGraph, opts=None) -> float:
    """Optimal mapping cost between the two underlying graphs."""
    opts = opts or DtgwOptions()
    gu = underlying_graph(g).as_temporal()
    hu = underlying_graph(h).as_temporal()
    costs = PairCosts.from_graphs(gu, hu, opts)
    return normalize_distance(costs.layer_distance(0, 0)[0], g, h, opts.normalize)


def decide_dtgw(g, h, c: float, opts=None) -> bool:
    """Is the (exact) distance at most ``c``?"""
    opts = opts or DtgwOptions()
    if c < 0:
        return False
    costs = _costs(g, h, opts)
    if c == 0 and costs.n == costs.m and opts.band.unconstrained and opts.lambda_budget is None:
        return is_zero_dtgw(costs, None, opts).is_zero
    return exact_dtgw(g, h, opts).distance <= c + ZERO_TOL * max(1.0, abs(c))
