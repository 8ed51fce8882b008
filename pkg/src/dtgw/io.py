"""Contact-event files and JSON graph files.

A contact-event file has one ``timestamp label_a label_b`` record per line
(extra trailing columns, as in SocioPatterns exports, are ignored; blank lines
and ``#`` comments are skipped). Events are binned by ``timestamp //
bin_width``; empty bins before the first and after the last event are
trimmed.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .model import TemporalGraph

DEFAULT_BIN_WIDTH = 20


class IngestError(ValueError):
    pass


def parse_events(lines: Iterable[str]) -> list[tuple[int, str, str]]:
    events = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) < 3:
            raise IngestError(f"line {lineno}: expected 'timestamp label_a label_b', got {raw.strip()!r}")
        try:
            t = int(fields[0])
        except ValueError:
            raise IngestError(f"line {lineno}: timestamp {fields[0]!r} is not an integer") from None
        if t < 0:
            raise IngestError(f"line {lineno}: negative timestamp {t}")
        a, b = fields[1], fields[2]
        if a == b:
            raise IngestError(f"line {lineno}: contact of {a!r} with itself")
        events.append((t, a, b))
    return events


def ingest(
    source,
    bin_width: int = DEFAULT_BIN_WIDTH,
    drop_isolated: bool = False,
    vertices: Iterable[str] | None = None,
) -> TemporalGraph:
    """Bin a contact-event file (path, text lines or parsed events) into layers.

    ``vertices`` adds labels that may never appear in an event (e.g. from a
    metadata file); ``drop_isolated`` removes every vertex without any edge.
    Vertices are ordered by first appearance, extra labels last.
    """
    if bin_width < 1:
        raise IngestError("bin width must be a positive integer")
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            events = parse_events(fh)
    else:
        items = list(source)
        events = items if items and not isinstance(items[0], str) else parse_events(items)
    if not events:
        raise IngestError("no contact events found")

    index: dict[str, int] = {}
    for _, a, b in events:
        index.setdefault(a, len(index))
        index.setdefault(b, len(index))
    for label in vertices or ():
        index.setdefault(str(label), len(index))
    bins = [t // bin_width for t, _, _ in events]
    first = min(bins)
    layers: list[set[tuple[int, int]]] = [set() for _ in range(max(bins) - first + 1)]
    for (_, a, b), k in zip(events, bins):
        u, v = index[a], index[b]
        layers[k - first].add((min(u, v), max(u, v)))

    labels = list(index)
    if drop_isolated:
        used = sorted({x for layer in layers for e in layer for x in e})
        remap = {old: new for new, old in enumerate(used)}
        labels = [labels[i] for i in used]
        layers = [{(remap[a], remap[b]) for a, b in layer} for layer in layers]
    return TemporalGraph.build(labels, [sorted(layer) for layer in layers])


def format_events(g: TemporalGraph, bin_width: int = DEFAULT_BIN_WIDTH, start: int = 0) -> str:
    """Contact-event text with one event per edge, timestamped at its bin start."""
    out = []
    for i, layer in enumerate(g.layers):
        t = start + i * bin_width
        for a, b in layer:
            out.append(f"{t} {g.vertex_labels[a]} {g.vertex_labels[b]}")
    return "\n".join(out) + ("\n" if out else "")


def write_events(g: TemporalGraph, path, bin_width: int = DEFAULT_BIN_WIDTH) -> None:
    Path(path).write_text(format_events(g, bin_width))


def load_graph(path, bin_width: int = DEFAULT_BIN_WIDTH, drop_isolated: bool = False, vertices=None):
    """Read a ``.json`` graph file or a contact-event file."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(path.read_text())
            return TemporalGraph.from_dict(data)
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise IngestError(f"{path}: not a temporal-graph JSON file ({exc})") from None
    return ingest(path, bin_width, drop_isolated, vertices)


def save_graph_json(g: TemporalGraph, path) -> None:
    Path(path).write_text(json.dumps(g.to_dict()) + "\n")
