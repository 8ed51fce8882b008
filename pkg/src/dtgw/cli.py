"""Command-line front end.

Exit codes: 0 success (or "yes" for ``decide``), 1 "no" for ``decide``,
2 usage error, 3 input error, 4 exact-solver budget exceeded.

Settings come from built-in defaults, then a JSON ``--manifest`` file, then
explicit flags, later sources winning. Manifest keys are the long flag names
with dashes replaced by underscores, plus ``inputs`` (a list of graph files)
and ``noise`` (``{"model", "p", "seed"}`` for ``perturb``).
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import json
import sys
from pathlib import Path

import numpy as np

from .distance import (
    BudgetExceededError,
    DtgwOptions,
    am_heuristic,
    decide_dtgw,
    exact_dtgw,
    non_consistent_distance,
    non_temporal_distance,
)
from .experiments import (
    NoiseSpec,
    complete_linkage_cluster,
    cut_dendrogram,
    deanonymization_accuracy,
    pairwise_distances,
    perturb,
)
from .io import DEFAULT_BIN_WIDTH, IngestError, format_events, load_graph
from .model import InvalidGraphError, InvalidMappingError, InvalidPathError
from .qp import build_qp, format_qp, to_lp

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3, 4

DEFAULTS = {
    "signature": "degree",
    "metric": "l1",
    "delta": "signature-norm",
    "band": None,
    "normalize": False,
    "init": "swp",
    "max_iter": 100,
    "lambda": None,
    "budget": 10**6,
    "bin_width": DEFAULT_BIN_WIDTH,
    "drop_isolated": False,
    "seed": 0,
    "jobs": None,
    "method": "am",
    "pin_path": False,
}
MANIFEST_KEYS = set(DEFAULTS) | {"inputs", "noise"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors are a single diagnostic line."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _optional_int(text: str):
    if text.lower() in ("none", "off", ""):
        return None
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer or 'none'")
    return value


def _common_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    S = argparse.SUPPRESS
    grp = common.add_argument_group("distance options")
    grp.add_argument("--signature", default=S, choices=["degree", "component-size", "betweenness"])
    grp.add_argument("--metric", default=S, choices=["l1", "l2", "linf"])
    grp.add_argument("--delta", default=S, help="deletion cost: 'signature-norm' or 'constant:C'")
    grp.add_argument("--band", default=S, type=_optional_int, help="Sakoe-Chiba half-width or 'none'")
    grp.add_argument("--normalize", default=S, action="store_true", help="divide by min(|V|, |W|)")
    grp.add_argument("--init", default=S, choices=["swp", "owp", "sigma_star", "sigma_opt"])
    grp.add_argument("--max-iter", dest="max_iter", default=S, type=int)
    grp.add_argument("--lambda", dest="lambda", default=S, type=_optional_int,
                     help="exact search: paths of length at most max(T, U) + lambda")
    grp.add_argument("--budget", default=S, type=int, help="candidate cap for the exact solver")
    grp.add_argument("--pin-path", dest="pin_path", default=S, action="store_true",
                     help="keep the initial path fixed and only optimize the mapping")
    grp.add_argument("--method", default=S, choices=["am", "exact", "non-consistent", "non-temporal"])
    inp = common.add_argument_group("input options")
    inp.add_argument("--bin-width", dest="bin_width", default=S, type=int)
    inp.add_argument("--drop-isolated", dest="drop_isolated", default=S, action="store_true")
    inp.add_argument("--seed", default=S, type=int)
    inp.add_argument("--jobs", default=S, type=int, help="worker processes (default: $DTGW_JOBS or 1)")
    inp.add_argument("--manifest", default=None, help="JSON run manifest")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(prog="dtgw", description="Dynamic temporal graph warping distances.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", parents=[common], help="distance between two graphs")
    p.add_argument("graphs", nargs="*")
    p.add_argument("--exact-method", default="auto", choices=["auto", "paths", "mappings"])

    p = sub.add_parser("matrix", parents=[common], help="pairwise distance matrix as CSV")
    p.add_argument("graphs", nargs="*")
    p.add_argument("-o", "--output")

    p = sub.add_parser("cluster", parents=[common], help="complete-linkage clustering")
    p.add_argument("graphs", nargs="*")
    p.add_argument("--matrix", help="CSV distance matrix written by 'dtgw matrix'")
    p.add_argument("--k", type=int, required=True, help="number of clusters in the partition")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")

    p = sub.add_parser("perturb", parents=[common], help="write a noisy copy as contact events")
    p.add_argument("graphs", nargs="*")
    p.add_argument("--model", choices=["deletion", "temporal-rewire", "underlying-rewire", "layer-stretch"])
    p.add_argument("--p", type=float)
    p.add_argument("-o", "--output")

    p = sub.add_parser("deanon", parents=[common], help="match the vertices of two graphs")
    p.add_argument("graphs", nargs="*")
    p.add_argument("--truth", help="file of 'label_in_first label_in_second' lines")

    p = sub.add_parser("qp-export", parents=[common], help="write the binary quadratic model")
    p.add_argument("graphs", nargs="*")
    p.add_argument("--format", default="dtgw", choices=["dtgw", "lp"])
    p.add_argument("-o", "--output")

    p = sub.add_parser("decide", parents=[common], help="exit 0 iff the distance is at most C")
    p.add_argument("graphs", nargs="*")
    p.add_argument("--c", type=float, required=True)
    return parser


def load_manifest(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise IngestError(f"cannot read manifest {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"manifest {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("manifest must be a JSON object")
    unknown = sorted(set(data) - MANIFEST_KEYS)
    if unknown:
        raise UsageError(f"unknown manifest key(s): {', '.join(unknown)}")
    noise = data.get("noise")
    if noise is not None and (not isinstance(noise, dict) or set(noise) - {"model", "p", "seed"}):
        raise UsageError("manifest 'noise' must be an object with keys model, p, seed")
    return data


def resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    cfg["inputs"], cfg["noise"] = [], {}
    if args.manifest:
        cfg.update(load_manifest(args.manifest))
    for key in DEFAULTS:
        if key in vars(args):
            cfg[key] = vars(args)[key]
    if args.graphs:
        cfg["inputs"] = list(args.graphs)
    return cfg


def make_options(cfg: dict) -> DtgwOptions:
    try:
        return DtgwOptions(
            signature=cfg["signature"],
            metric=cfg["metric"],
            deletion=cfg["delta"],
            band=cfg["band"],
            normalize=bool(cfg["normalize"]),
            lambda_budget=cfg["lambda"],
            max_iterations=int(cfg["max_iter"]),
            init=cfg["init"],
            pin_path=bool(cfg["pin_path"]),
            budget=int(cfg["budget"]),
        )
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _graphs(cfg: dict, count: int | None = None):
    paths = cfg["inputs"]
    if count is not None and len(paths) != count:
        raise UsageError(f"expected {count} graph file(s), got {len(paths)}")
    if not paths:
        raise UsageError("no input graphs given")
    if cfg["bin_width"] < 1:
        raise UsageError("--bin-width must be positive")
    graphs = [load_graph(p, cfg["bin_width"], bool(cfg["drop_isolated"])) for p in paths]
    return paths, graphs


def graph_names(paths) -> list[str]:
    stems = [Path(p).stem for p in paths]
    return stems if len(set(stems)) == len(stems) else [str(p) for p in paths]


def _emit(text: str, output=None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _single(g, h, cfg, opts, exact_method="auto") -> dict:
    method = cfg["method"]
    if method == "am":
        return am_heuristic(g, h, opts).report(g.vertex_labels, h.vertex_labels)
    if method == "exact":
        return exact_dtgw(g, h, opts, exact_method).report(g.vertex_labels, h.vertex_labels)
    fn = non_consistent_distance if method == "non-consistent" else non_temporal_distance
    return {"distance": fn(g, h, opts), "method": method}


def cmd_distance(args, cfg) -> int:
    _, (g, h) = _graphs(cfg, 2)
    report = _single(g, h, cfg, make_options(cfg), args.exact_method)
    print(json.dumps(report))
    return EXIT_OK


def format_matrix_csv(names, matrix) -> str:
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(names))
    for name, row in zip(names, matrix):
        writer.writerow([name] + [repr(float(x)) for x in row])
    return buf.getvalue()


def read_matrix_csv(path) -> tuple[list[str], np.ndarray]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc.strerror}") from None
    if not rows or len(rows) != len(rows[0]):
        raise IngestError(f"{path}: expected a square matrix with a header row and column")
    names = rows[0][1:]
    try:
        values = np.array([[float(x) for x in row[1:]] for row in rows[1:]])
    except ValueError as exc:
        raise IngestError(f"{path}: {exc}") from None
    if values.shape != (len(names), len(names)) or [r[0] for r in rows[1:]] != names:
        raise IngestError(f"{path}: row and column names disagree")
    return names, values


def _jobs(cfg) -> int | None:
    return None if cfg["jobs"] is None else int(cfg["jobs"])


def cmd_matrix(args, cfg) -> int:
    paths, graphs = _graphs(cfg)
    opts = make_options(cfg)
    matrix = pairwise_distances(graphs, cfg["method"], opts, _jobs(cfg))
    _emit(format_matrix_csv(graph_names(paths), matrix), args.output)
    return EXIT_OK


def cmd_cluster(args, cfg) -> int:
    if args.matrix:
        if cfg["inputs"]:
            raise UsageError("give either graph files or --matrix, not both")
        names, matrix = read_matrix_csv(args.matrix)
    else:
        paths, graphs = _graphs(cfg)
        names = graph_names(paths)
        matrix = pairwise_distances(graphs, cfg["method"], make_options(cfg), _jobs(cfg))
    if not 1 <= args.k <= len(names):
        raise UsageError(f"--k must lie between 1 and {len(names)}")
    dendrogram = complete_linkage_cluster(matrix, names)
    clusters = [[names[i] for i in c] for c in cut_dendrogram(dendrogram, args.k)]
    if args.json:
        text = json.dumps({"newick": dendrogram.to_newick(), "partition": clusters}) + "\n"
    else:
        lines = [dendrogram.to_newick()]
        lines += [f"cluster {k}: {' '.join(c)}" for k, c in enumerate(clusters, 1)]
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_perturb(args, cfg) -> int:
    _, (g,) = _graphs(cfg, 1)
    noise = dict(cfg["noise"])
    if args.model is not None:
        noise["model"] = args.model
    if args.p is not None:
        noise["p"] = args.p
    if "seed" in vars(args) or "seed" not in noise:
        noise["seed"] = cfg["seed"]
    if "model" not in noise:
        raise UsageError("perturb needs --model (or 'noise.model' in the manifest)")
    try:
        spec = NoiseSpec(noise["model"], float(noise.get("p", 0.0)), int(noise["seed"]))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    _emit(format_events(perturb(g, spec), cfg["bin_width"]), args.output)
    return EXIT_OK


def _read_truth(path, g, h) -> dict[int, int]:
    g_index = {label: k for k, label in enumerate(g.vertex_labels)}
    h_index = {label: k for k, label in enumerate(h.vertex_labels)}
    truth = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) != 2 or line[0] not in g_index or line[1] not in h_index:
            raise IngestError(f"{path} line {lineno}: expected two known vertex labels")
        truth[g_index[line[0]]] = h_index[line[1]]
    return truth


def cmd_deanon(args, cfg) -> int:
    _, (g, h) = _graphs(cfg, 2)
    opts = make_options(cfg)
    if cfg["method"] not in ("am", "exact"):
        raise UsageError("deanon needs a mapping; use --method am or exact")
    result = am_heuristic(g, h, opts) if cfg["method"] == "am" else exact_dtgw(g, h, opts)
    if args.truth:
        truth = _read_truth(args.truth, g, h)
    else:
        h_index = {label: k for k, label in enumerate(h.vertex_labels)}
        truth = {u: h_index[label] for u, label in enumerate(g.vertex_labels) if label in h_index}
    report = {
        "accuracy": deanonymization_accuracy(result.mapping, truth),
        "distance": result.distance,
        "mapping": [[g.vertex_labels[u], h.vertex_labels[v]] for u, v in result.mapping.pairs],
    }
    print(json.dumps(report))
    return EXIT_OK


def cmd_qp_export(args, cfg) -> int:
    _, (g, h) = _graphs(cfg, 2)
    model = build_qp(g, h, make_options(cfg))
    _emit(format_qp(model) if args.format == "dtgw" else to_lp(model), args.output)
    return EXIT_OK


def cmd_decide(args, cfg) -> int:
    _, (g, h) = _graphs(cfg, 2)
    yes = decide_dtgw(g, h, args.c, make_options(cfg))
    print("yes" if yes else "no")
    return EXIT_OK if yes else EXIT_NO


COMMANDS = {
    "distance": cmd_distance,
    "matrix": cmd_matrix,
    "cluster": cmd_cluster,
    "perturb": cmd_perturb,
    "deanon": cmd_deanon,
    "qp-export": cmd_qp_export,
    "decide": cmd_decide,
}


def _fail(code: int, message: str) -> int:
    print(f"dtgw: error: {' '.join(str(message).split())}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        return _fail(EXIT_USAGE, exc)
    except BudgetExceededError as exc:
        return _fail(EXIT_BUDGET, exc)
    except (IngestError, InvalidGraphError, InvalidPathError, InvalidMappingError) as exc:
        return _fail(EXIT_INPUT, exc)
    except OSError as exc:
        return _fail(EXIT_INPUT, f"{exc.filename or ''}: {exc.strerror or exc}")
    except ValueError as exc:
        return _fail(EXIT_INPUT, exc)


if __name__ == "__main__":
    sys.exit(main())
