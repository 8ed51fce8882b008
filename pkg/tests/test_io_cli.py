import csv
import json

import numpy as np
import pytest

from dtgw import IngestError, TemporalGraph, format_events, ingest, load_graph, random_temporal_graph
from dtgw.cli import main
from dtgw.io import save_graph_json


def test_bins_and_trimming():
    g = ingest(["0 a b", "20 a b"], bin_width=20)
    assert g.lifetime == 2 and g.layers == (((0, 1),), ((0, 1),))
    g = ingest(["0 a b", "5 b a"], bin_width=20)
    assert g.lifetime == 1 and g.layers == (((0, 1),),)
    g = ingest(["100 a b", "160 b c", "# note", "", "161 a c 1A 2B"], bin_width=20)
    assert g.lifetime == 4 and g.layers[1] == () and g.vertex_labels == ("a", "b", "c")


def test_extra_vertices_and_dropping():
    g = ingest(["0 a b"], vertices=["c"])
    assert g.vertex_labels == ("a", "b", "c")
    g = ingest(["0 a b"], vertices=["c"], drop_isolated=True)
    assert g.vertex_labels == ("a", "b")


@pytest.mark.parametrize(
    "lines, where",
    [(["0 a b", "x a b"], "line 2"), (["0 a"], "line 1"), (["0 a b", "", "5 c c"], "line 3"), (["-3 a b"], "line 1")],
)
def test_malformed_lines_are_reported(lines, where):
    with pytest.raises(IngestError, match=where):
        ingest(lines)


def test_no_events():
    with pytest.raises(IngestError):
        ingest(["# only a comment"])
    with pytest.raises(IngestError):
        ingest(["0 a b"], bin_width=0)


def test_serialize_round_trip(tmp_path):
    g = random_temporal_graph(6, 9, 0.3, seed=2)
    g = TemporalGraph.build(g.vertex_labels, [[(0, 1)]] + [list(layer) for layer in g.layers[1:-1]] + [[(2, 3)]])
    back = ingest(format_events(g, 20).splitlines(), 20)
    keep = [g.vertex_labels.index(label) for label in back.vertex_labels]
    used = {x for layer in g.layers for e in layer for x in e}
    assert sorted(keep) == sorted(used)
    pos = {old: new for new, old in enumerate(keep)}
    assert [sorted((min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b in layer) for layer in g.layers] == [
        list(layer) for layer in back.layers
    ]
    path = tmp_path / "g.json"
    save_graph_json(g, path)
    assert load_graph(path) == g


@pytest.fixture
def files(tmp_path):
    paths = []
    for k, density in enumerate((0.3, 0.5, 0.7)):
        g = random_temporal_graph(4, 4, density, seed=k)
        g = TemporalGraph.build(g.vertex_labels, [[(0, 1)]] + list(g.layers[1:-1]) + [[(2, 3)]])
        p = tmp_path / f"g{k}.txt"
        p.write_text(format_events(g, 20))
        paths.append(str(p))
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_distance_to_self_is_zero(capsys, files):
    code, out, _ = run(capsys, "distance", files[0], files[0])
    assert code == 0 and json.loads(out)["distance"] == 0


def test_distance_methods(capsys, files):
    values = {}
    for method in ("am", "exact", "non-consistent", "non-temporal"):
        code, out, _ = run(capsys, "distance", files[0], files[1], "--method", method)
        assert code == 0
        values[method] = json.loads(out)["distance"]
    assert values["non-consistent"] <= values["exact"] <= values["am"]


def test_matrix_csv(capsys, files, tmp_path):
    out_path = tmp_path / "m.csv"
    code, _, _ = run(capsys, "matrix", *files, "-o", out_path, "--method", "exact")
    assert code == 0
    rows = list(csv.reader(out_path.open()))
    assert rows[0] == ["", "g0", "g1", "g2"] and [r[0] for r in rows[1:]] == ["g0", "g1", "g2"]
    M = np.array([[float(x) for x in r[1:]] for r in rows[1:]])
    assert np.array_equal(M, M.T) and not M.diagonal().any()

    code, out, _ = run(capsys, "cluster", "--matrix", out_path, "--k", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].endswith(";") and len(lines) == 3
    code, out, _ = run(capsys, "cluster", *files, "--k", "3", "--json")
    assert sorted(map(tuple, json.loads(out)["partition"])) == [("g0",), ("g1",), ("g2",)]


def test_decide_exit_codes(capsys, files):
    assert run(capsys, "decide", files[0], files[0], "--c", "0")[0] == 0
    code, out, _ = run(capsys, "decide", files[0], files[2], "--c", "0")
    assert code == 1 and out.strip() == "no"


def test_perturb_writes_events(capsys, files, tmp_path):
    out = tmp_path / "noisy.txt"
    code, _, _ = run(capsys, "perturb", files[1], "--model", "deletion", "--p", "0.2", "--seed", "3", "-o", out)
    assert code == 0
    noisy = ingest(out)
    assert set(noisy.vertex_labels) <= set(load_graph(files[1]).vertex_labels)


def test_deanon(capsys, files):
    code, out, _ = run(capsys, "deanon", files[1], files[1])
    report = json.loads(out)
    assert code == 0 and report["accuracy"] == 1.0
    assert all(a == b for a, b in report["mapping"])


def test_qp_export_formats(capsys, files):
    code, out, _ = run(capsys, "qp-export", files[0], files[1])
    assert code == 0 and out.startswith("# dtgw") and "CONSTRAINTS" in out
    code, out, _ = run(capsys, "qp-export", files[0], files[1], "--format", "lp")
    assert code == 0 and out.startswith("Minimize")


def test_manifest(capsys, files, tmp_path):
    manifest = tmp_path / "run.json"
    manifest.write_text(json.dumps({"inputs": [files[0], files[1]], "method": "exact", "metric": "l2"}))
    code, out, _ = run(capsys, "distance", "--manifest", manifest)
    assert code == 0 and json.loads(out)["exact"]
    manifest.write_text(json.dumps({"inputs": files[:2], "colour": "red"}))
    code, _, err = run(capsys, "distance", "--manifest", manifest)
    assert code == 2 and "colour" in err and err.count("\n") == 1


@pytest.mark.parametrize(
    "argv, code",
    [
        (["distance", "MISSING"], 2),
        (["distance", "--bogus-flag"], 2),
        (["distance", "{0}", "{0}", "--max-iter", "0"], 2),
        (["distance", "{0}", "/nonexistent/file.txt"], 3),
        (["distance", "{0}", "{1}", "--method", "exact", "--budget", "1"], 4),
    ],
)
def test_error_exit_codes(capsys, files, argv, code):
    argv = [a.format(*files) for a in argv]
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.count("\n") == 1


def test_malformed_input_file(capsys, files, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 a b\nnot a line\n")
    code, _, err = run(capsys, "distance", files[0], bad)
    assert code == 3 and "line 2" in err and err.count("\n") == 1
