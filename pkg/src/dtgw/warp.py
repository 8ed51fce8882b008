"""Dynamic time warping over layer-cost matrices.

Optimal paths by dynamic programming (optionally inside a Sakoe-Chiba band),
exhaustive path enumeration with a length budget, and the closed-form count of
length-bounded paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, floor
from typing import Iterator

import numpy as np

from .model import WarpingPath


class BandInfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class Band:
    """Sakoe-Chiba band of half-width ``width``; ``None`` means unconstrained.

    For unequal lifetimes the band follows the diagonal through ``(1, 1)`` and
    ``(T, U)`` and the width is measured along the longer axis, so with
    ``T == U`` a cell is admissible iff ``|i - j| <= width``.
    """

    width: int | None = None

    def __post_init__(self):
        if self.width is not None and self.width < 0:
            raise ValueError("band width must be nonnegative")

    @property
    def unconstrained(self) -> bool:
        return self.width is None

    def mask(self, T: int, U: int) -> np.ndarray:
        if self.width is None or min(T, U) == 1:
            return np.ones((T, U), dtype=bool)
        i = np.arange(T)[:, None]
        j = np.arange(U)[None, :]
        if T >= U:
            offset = np.abs(i - j * (T - 1) / (U - 1))
        else:
            offset = np.abs(j - i * (U - 1) / (T - 1))
        return offset <= self.width + 1e-9


UNCONSTRAINED = Band()


def _as_band(band) -> Band:
    if band is None:
        return UNCONSTRAINED
    if isinstance(band, Band):
        return band
    return Band(int(band))


def accumulate(costs: np.ndarray, band=None) -> np.ndarray:
    """Accumulated-cost table; inadmissible cells are ``inf``."""
    costs = np.asarray(costs, dtype=float)
    T, U = costs.shape
    mask = _as_band(band).mask(T, U)
    c = np.where(mask, costs, np.inf).tolist()
    inf = float("inf")
    acc = [[inf] * U for _ in range(T)]
    acc[0][0] = c[0][0]
    for j in range(1, U):
        acc[0][j] = acc[0][j - 1] + c[0][j]
    for i in range(1, T):
        prev = acc[i - 1]
        row = acc[i]
        ci = c[i]
        row[0] = prev[0] + ci[0]
        for j in range(1, U):
            best = prev[j - 1]
            if row[j - 1] < best:
                best = row[j - 1]
            if prev[j] < best:
                best = prev[j]
            row[j] = best + ci[j]
    return np.array(acc)


def dtw_optimal_path(costs, band=None) -> tuple[WarpingPath, float]:
    """Minimum-total warping path through ``costs`` (shape ``T x U``).

    When predecessors tie the backtrack prefers the diagonal step, then the
    step that advances only ``j``, then the one that advances only ``i``.
    """
    costs = np.asarray(costs, dtype=float)
    if costs.ndim != 2 or 0 in costs.shape:
        raise ValueError("layer cost matrix must be a nonempty 2-D array")
    if not np.all(np.isfinite(costs)) or np.any(costs < 0):
        raise ValueError("layer costs must be finite and nonnegative")
    T, U = costs.shape
    acc = accumulate(costs, band)
    total = acc[-1, -1]
    if not np.isfinite(total):
        raise BandInfeasibleError(
            f"band width {_as_band(band).width} admits no warping path of order {T}x{U}"
        )
    i, j = T - 1, U - 1
    pairs = [(T, U)]
    while i > 0 or j > 0:
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            diag, vert, horiz = acc[i - 1, j - 1], acc[i, j - 1], acc[i - 1, j]
            if diag <= vert and diag <= horiz:
                i, j = i - 1, j - 1
            elif vert <= horiz:
                j -= 1
            else:
                i -= 1
        pairs.append((i + 1, j + 1))
    pairs.reverse()
    return WarpingPath(pairs, (T, U)), float(total)


def dtw_totals(costs: np.ndarray, band=None) -> np.ndarray:
    """Optimal DTW totals for a batch of matrices ``costs[b, T, U]``."""
    costs = np.asarray(costs, dtype=float)
    _, T, U = costs.shape
    mask = _as_band(band).mask(T, U)
    c = np.where(mask[None], costs, np.inf)
    acc = np.empty_like(c)
    acc[:, 0, :] = np.cumsum(c[:, 0, :], axis=1)
    for i in range(1, T):
        acc[:, i, 0] = acc[:, i - 1, 0] + c[:, i, 0]
        prev = acc[:, i - 1, :]
        # diagonal and vertical predecessors are available for the whole row at once
        best_prev = np.minimum(prev[:, :-1], prev[:, 1:])
        for j in range(1, U):
            acc[:, i, j] = np.minimum(best_prev[:, j - 1], acc[:, i, j - 1]) + c[:, i, j]
    return acc[:, -1, -1]


def check_band_feasible(T: int, U: int, band=None) -> None:
    dtw_optimal_path(np.zeros((T, U)), band)


def path_in_band(p: WarpingPath, band=None) -> bool:
    mask = _as_band(band).mask(*p.order)
    rows, cols = p.indices()
    return bool(mask[rows, cols].all())


def enumerate_warping_paths(
    T: int, U: int, lam: int | None = None, band=None
) -> Iterator[WarpingPath]:
    """Yield every order ``T x U`` warping path of length ``<= max(T, U) + lam``.

    Depth-first; a branch is cut as soon as the steps still required to reach
    ``(T, U)`` would overrun the length budget. ``band`` additionally restricts
    the cells a path may visit.
    """
    if T < 1 or U < 1:
        raise ValueError("lifetimes must be positive")
    if lam is not None and lam < 0:
        raise ValueError("length budget must be nonnegative")
    max_len = T + U - 1 if lam is None else min(T + U - 1, max(T, U) + lam)
    mask = _as_band(band).mask(T, U)
    if not mask[0, 0]:
        return
    order = (T, U)
    stack = [(1, 1)]

    def rec():
        i, j = stack[-1]
        if i == T and j == U:
            yield WarpingPath(tuple(stack), order)
            return
        for di, dj in ((1, 1), (0, 1), (1, 0)):
            ni, nj = i + di, j + dj
            if ni > T or nj > U or not mask[ni - 1, nj - 1]:
                continue
            if len(stack) + max(T - ni, U - nj) + 1 > max_len:
                continue
            stack.append((ni, nj))
            yield from rec()
            stack.pop()

    yield from rec()


def count_warping_paths(T: int, U: int, lam: int | None = None) -> int:
    """Number of order ``T x U`` paths of length at most ``T + lam`` (``T >= U``).

    Sum over the number ``l`` of vertical steps: the vertical steps can sit in
    ``C(T+l-1, l)`` positions among all steps and the ``l + t`` horizontal
    ones in ``C(T-1, l+t)`` positions among the rest, with ``t = T - U``.
    """
    if T < U:
        raise ValueError("count_warping_paths expects T >= U; transpose the arguments")
    if U < 1:
        raise ValueError("lifetimes must be positive")
    t = T - U
    lam = U - 1 if lam is None else min(lam, U - 1)
    if lam < 0:
        raise ValueError("length budget must be nonnegative")
    return sum(comb(T + l - 1, l) * comb(T - 1, l + t) for l in range(lam + 1))


def shortest_warping_path(T: int, U: int) -> WarpingPath:
    """Length ``max(T, U)`` path hugging the diagonal from ``(1, 1)`` to ``(T, U)``."""
    if T < 1 or U < 1:
        raise ValueError("lifetimes must be positive")
    if T < U:
        return shortest_warping_path(U, T).transposed()
    if T == 1:
        return WarpingPath([(1, 1)], (1, 1))
    pairs = []
    for i in range(1, T + 1):
        j = floor(1 + (i - 1) * (U - 1) / (T - 1) + 0.5)
        pairs.append((i, min(max(j, 1), U)))
    return WarpingPath(pairs, (T, U))
