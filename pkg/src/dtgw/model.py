"""Temporal graphs, warping paths and vertex mappings.

Vertices are dense 0-based indices internally; ``vertex_labels`` carries the
external names. Layer indices are 0-based everywhere except inside
:class:`WarpingPath`, whose pairs are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

Edge = tuple[int, int]


class InvalidGraphError(ValueError):
    """Raised when building a temporal graph that violates its invariants."""


class InvalidPathError(ValueError):
    pass


class InvalidMappingError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    """First invariant violation found by one of the ``validate_*`` checks."""

    kind: str
    message: str
    layer: int | None = None
    item: tuple | None = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def _canonical(edge) -> Edge:
    a, b = edge
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class TemporalGraph:
    """A vertex set together with an ordered sequence of edge sets.

    Use :meth:`build` to construct a checked, canonical instance. Direct
    construction only freezes the containers so that malformed input can still
    be handed to :func:`validate_temporal_graph`.
    """

    vertex_labels: tuple[str, ...]
    layers: tuple[tuple[Edge, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex_labels", tuple(self.vertex_labels))
        object.__setattr__(
            self, "layers", tuple(tuple(tuple(e) for e in layer) for layer in self.layers)
        )

    @classmethod
    def build(
        cls, vertex_labels: Iterable, layers: Iterable[Iterable[Sequence[int]]]
    ) -> "TemporalGraph":
        """Canonicalize edges to ``(min, max)``, sort each layer and validate."""
        labels = tuple(str(v) for v in vertex_labels)
        raw = tuple(tuple(tuple(int(x) for x in e) for e in layer) for layer in layers)
        violation = validate_temporal_graph(cls(labels, raw))
        if violation is not None:
            raise InvalidGraphError(str(violation))
        canon = tuple(tuple(sorted(_canonical(e) for e in layer)) for layer in raw)
        return cls(labels, canon)

    @classmethod
    def from_edge_lists(cls, n: int, layers) -> "TemporalGraph":
        """Convenience constructor with labels ``"0" .. "n-1"``."""
        return cls.build([str(i) for i in range(n)], layers)

    @property
    def n(self) -> int:
        return len(self.vertex_labels)

    @property
    def lifetime(self) -> int:
        return len(self.layers)

    def __len__(self) -> int:
        return self.lifetime

    def edge_count(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def layer_sets(self) -> list[set[Edge]]:
        return [set(layer) for layer in self.layers]

    def relabeled(self, perm: Sequence[int]) -> "TemporalGraph":
        """Move vertex ``v`` to position ``perm[v]``; labels travel with vertices."""
        perm = list(perm)
        labels = [""] * self.n
        for v, pv in enumerate(perm):
            labels[pv] = self.vertex_labels[v]
        layers = [[(perm[a], perm[b]) for a, b in layer] for layer in self.layers]
        return TemporalGraph.build(labels, layers)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertex_labels),
            "layers": [[list(e) for e in layer] for layer in self.layers],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TemporalGraph":
        return cls.build(data["vertices"], data["layers"])


def validate_temporal_graph(g: TemporalGraph) -> Violation | None:
    """Return ``None`` when ``g`` is well formed, else the first violation."""
    if len(g.layers) < 1:
        return Violation("empty lifetime", "a temporal graph needs at least one layer")
    seen_labels: set[str] = set()
    for v, label in enumerate(g.vertex_labels):
        if label in seen_labels:
            return Violation("duplicate label", f"label {label!r} used twice", item=(v,))
        seen_labels.add(label)
    n = len(g.vertex_labels)
    for i, layer in enumerate(g.layers):
        seen: set[Edge] = set()
        for edge in layer:
            if len(edge) != 2:
                return Violation(
                    "malformed edge", f"layer {i}: edge {edge!r} is not a pair", i, tuple(edge)
                )
            a, b = edge
            if not (0 <= a < n and 0 <= b < n):
                return Violation(
                    "out-of-range vertex", f"layer {i}: edge {edge!r} outside [0, {n})", i, edge
                )
            if a == b:
                return Violation("self-loop", f"layer {i}: self-loop at vertex {a}", i, edge)
            c = _canonical(edge)
            if c in seen:
                return Violation("duplicate edge", f"layer {i}: edge {c!r} repeated", i, c)
            seen.add(c)
    return None


@dataclass(frozen=True)
class UnderlyingGraph:
    n: int
    edges: frozenset[Edge]

    def as_temporal(self, vertex_labels: Sequence[str] | None = None) -> TemporalGraph:
        labels = vertex_labels if vertex_labels is not None else [str(i) for i in range(self.n)]
        return TemporalGraph.build(labels, [sorted(self.edges)])


def underlying_graph(g: TemporalGraph) -> UnderlyingGraph:
    edges: set[Edge] = set()
    for layer in g.layers:
        edges.update(_canonical(e) for e in layer)
    return UnderlyingGraph(g.n, frozenset(edges))


@dataclass(frozen=True)
class WarpingPath:
    """Monotone alignment of layer indices; ``pairs`` are 1-based."""

    pairs: tuple[tuple[int, int], ...]
    order: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(i), int(j)) for i, j in self.pairs))
        object.__setattr__(self, "order", (int(self.order[0]), int(self.order[1])))

    @classmethod
    def checked(cls, pairs, order) -> "WarpingPath":
        p = cls(pairs, order)
        violation = validate_warping_path(p)
        if violation is not None:
            raise InvalidPathError(str(violation))
        return p

    @classmethod
    def diagonal(cls, T: int) -> "WarpingPath":
        return cls([(i, i) for i in range(1, T + 1)], (T, T))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def indices(self) -> tuple[np.ndarray, np.ndarray]:
        """0-based row and column index arrays."""
        arr = np.asarray(self.pairs, dtype=np.intp).reshape(-1, 2) - 1
        return arr[:, 0], arr[:, 1]

    def transposed(self) -> "WarpingPath":
        return WarpingPath([(j, i) for i, j in self.pairs], (self.order[1], self.order[0]))

    def to_list(self) -> list[list[int]]:
        return [[i, j] for i, j in self.pairs]


_STEPS = {(1, 0), (0, 1), (1, 1)}


def validate_warping_path(p: WarpingPath) -> Violation | None:
    T, U = p.order
    if T < 1 or U < 1:
        return Violation("bad order", f"order {p.order} must be positive")
    if not p.pairs:
        return Violation("empty path", "a warping path has at least one pair")
    if p.pairs[0] != (1, 1):
        return Violation("bad start", f"path starts at {p.pairs[0]}, not (1, 1)", item=p.pairs[0])
    if p.pairs[-1] != (T, U):
        return Violation("bad end", f"path ends at {p.pairs[-1]}, not {(T, U)}", item=p.pairs[-1])
    for k in range(1, len(p.pairs)):
        (i0, j0), (i1, j1) = p.pairs[k - 1], p.pairs[k]
        if (i1 - i0, j1 - j0) not in _STEPS:
            return Violation(
                "illegal step", f"step {p.pairs[k - 1]} -> {p.pairs[k]}", item=(k - 1, k)
            )
    # length bounds follow from the step rules; kept as a guard for the contract
    if not max(T, U) <= len(p.pairs) <= T + U - 1:
        return Violation("bad length", f"length {len(p.pairs)} outside [{max(T, U)}, {T + U - 1}]")
    return None


@dataclass(frozen=True)
class VertexMapping:
    """Injective partial correspondence between ``[0, n_left)`` and ``[0, n_right)``.

    Exactly ``min(n_left, n_right)`` pairs; vertices not covered are deleted.
    """

    pairs: tuple[tuple[int, int], ...]
    n_left: int
    n_right: int
    _forward: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pairs = tuple(sorted((int(u), int(v)) for u, v in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        fwd = np.full(self.n_left, -1, dtype=np.intp)
        for u, v in pairs:
            if 0 <= u < self.n_left:
                fwd[u] = v
        fwd.setflags(write=False)
        object.__setattr__(self, "_forward", fwd)

    @classmethod
    def checked(cls, pairs, n_left: int, n_right: int) -> "VertexMapping":
        m = cls(pairs, n_left, n_right)
        violation = validate_vertex_mapping(m)
        if violation is not None:
            raise InvalidMappingError(str(violation))
        return m

    @classmethod
    def from_array(cls, forward: Sequence[int], n_right: int) -> "VertexMapping":
        """Build from ``forward[u] = v`` (``-1`` marks a deleted left vertex)."""
        return cls([(u, v) for u, v in enumerate(forward) if v >= 0], len(forward), n_right)

    @classmethod
    def identity(cls, n: int) -> "VertexMapping":
        return cls([(u, u) for u in range(n)], n, n)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def forward(self) -> np.ndarray:
        return self._forward

    def inverse(self) -> "VertexMapping":
        return VertexMapping([(v, u) for u, v in self.pairs], self.n_right, self.n_left)

    def left_unmapped(self) -> np.ndarray:
        return np.flatnonzero(self._forward < 0)

    def right_unmapped(self) -> np.ndarray:
        used = np.zeros(self.n_right, dtype=bool)
        used[[v for _, v in self.pairs]] = True
        return np.flatnonzero(~used)


def validate_vertex_mapping(m: VertexMapping) -> Violation | None:
    if len(m.pairs) != min(m.n_left, m.n_right):
        return Violation(
            "bad size", f"{len(m.pairs)} pairs, expected {min(m.n_left, m.n_right)}"
        )
    left: set[int] = set()
    right: set[int] = set()
    for u, v in m.pairs:
        if not (0 <= u < m.n_left and 0 <= v < m.n_right):
            return Violation("out-of-range vertex", f"pair {(u, v)} out of range", item=(u, v))
        if u in left or v in right:
            return Violation("not injective", f"pair {(u, v)} reuses a vertex", item=(u, v))
        left.add(u)
        right.add(v)
    return None
