"""Per-layer vertex signatures, signature metrics and deletion costs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import TemporalGraph


class SignatureKind(str, Enum):
    DEGREE = "degree"
    COMPONENT_SIZE = "component-size"
    BETWEENNESS = "betweenness"

    @classmethod
    def parse(cls, value) -> "SignatureKind":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("_", "-")
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown signature kind {value!r}") from None


class Metric(str, Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @classmethod
    def parse(cls, value) -> "Metric":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown metric {value!r}") from None


@dataclass(frozen=True)
class SignatureMatrix:
    """``values[i, v]`` is the signature vector of vertex ``v`` in layer ``i``."""

    values: np.ndarray
    kind: SignatureKind

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 2:
            values = values[:, :, None]
        if values.ndim != 3:
            raise ValueError("signature values must have shape (lifetime, n, k)")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def lifetime(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def k(self) -> int:
        return self.values.shape[2]


def _adjacency(n: int, layer) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in layer:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def _degrees(n: int, layer) -> np.ndarray:
    if not layer:
        return np.zeros(n)
    ends = np.asarray(layer, dtype=np.intp).ravel()
    return np.bincount(ends, minlength=n).astype(float)


def _component_sizes(n: int, layer) -> np.ndarray:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in layer:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    roots = np.array([find(v) for v in range(n)], dtype=np.intp)
    return np.bincount(roots, minlength=n)[roots].astype(float)


def _betweenness(n: int, layer) -> np.ndarray:
    """Unnormalized betweenness over unordered vertex pairs (Brandes accumulation)."""
    adj = _adjacency(n, layer)
    score = np.zeros(n)
    for s in range(n):
        if not adj[s]:
            continue
        order = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        dist = [-1] * n
        sigma[s], dist[s] = 1, 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                score[w] += delta[w]
    return score / 2.0


_LAYER_FUNCS = {
    SignatureKind.DEGREE: _degrees,
    SignatureKind.COMPONENT_SIZE: _component_sizes,
    SignatureKind.BETWEENNESS: _betweenness,
}


def compute_signatures(g: TemporalGraph, kind="degree") -> SignatureMatrix:
    """Compute one-dimensional signatures for every vertex of every layer.

    ``component-size`` counts the vertices of the vertex's connected component,
    so an isolated vertex scores 1. ``betweenness`` uses unnormalized
    shortest-path counts over unordered pairs.
    """
    kind = SignatureKind.parse(kind)
    func = _LAYER_FUNCS[kind]
    values = np.stack([func(g.n, layer) for layer in g.layers]) if g.n else np.zeros((g.lifetime, 0))
    return SignatureMatrix(values.reshape(g.lifetime, g.n, 1), kind)


def metric_eval(metric, x, y) -> float:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return float(pairwise(metric, x, y))


def pairwise(metric, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcasting metric: ``a[..., k]`` against ``b[..., k]`` reduced over ``k``.

    The leading axes broadcast normally, so ``a[:, None, :]`` with ``b[None, :, :]``
    yields the full cross-distance matrix.
    """
    metric = Metric.parse(metric)
    diff = np.abs(a - b)
    if diff.shape[-1] == 1:
        return diff[..., 0]
    if metric is Metric.L1:
        return diff.sum(axis=-1)
    if metric is Metric.L2:
        return np.sqrt((diff * diff).sum(axis=-1))
    return diff.max(axis=-1)


@dataclass(frozen=True)
class DeletionCost:
    """Cost of leaving a vertex unmapped.

    ``signature-norm`` charges the metric distance to the zero signature, i.e.
    the price of matching against an isolated phantom vertex; ``constant``
    charges ``value`` regardless of the signature.
    """

    kind: str = "signature-norm"
    value: float = 0.0

    def __post_init__(self):
        kind = self.kind.lower().replace("_", "-")
        if kind not in ("signature-norm", "constant"):
            raise ValueError(f"unknown deletion policy {self.kind!r}")
        if kind == "constant" and not self.value >= 0:
            raise ValueError("constant deletion cost must be nonnegative")
        object.__setattr__(self, "kind", kind)

    @classmethod
    def constant(cls, c: float) -> "DeletionCost":
        return cls("constant", float(c))

    @classmethod
    def parse(cls, text) -> "DeletionCost":
        """Accept ``"signature-norm"``, ``"constant:<c>"`` or a bare number."""
        if isinstance(text, cls):
            return text
        text = str(text).strip()
        if text.lower().replace("_", "-") == "signature-norm":
            return cls()
        if text.lower().startswith("constant:"):
            return cls.constant(float(text.split(":", 1)[1]))
        try:
            return cls.constant(float(text))
        except ValueError:
            raise ValueError(f"unknown deletion policy {text!r}") from None

    def __str__(self) -> str:
        return self.kind if self.kind == "signature-norm" else f"constant:{self.value:g}"


def deletion_costs(policy: DeletionCost, metric, values: np.ndarray) -> np.ndarray:
    """Deletion cost for every signature in ``values[..., k]``."""
    values = np.asarray(values, dtype=float)
    if policy.kind == "constant":
        return np.full(values.shape[:-1], policy.value)
    return pairwise(metric, values, np.zeros_like(values))


def deletion_cost(policy: DeletionCost, metric, sig) -> float:
    sig = np.atleast_1d(np.asarray(sig, dtype=float))
    return float(deletion_costs(policy, metric, sig[None, :])[0])
