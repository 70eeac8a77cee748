import json

import pytest

import treecov as tc
from treecov.cli import main


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def ws(tmp_path_factory):
    """Shared workspace: a 5x5 grid plus spanning/metric covers."""
    d = tmp_path_factory.mktemp("cli")
    assert run("gen", "--family", "grid", "--rows", 5, "--cols", 5,
               "--out", d / "grid.gr") == 0
    for kind in ("spanning", "metric"):
        assert run("build-cover", "--graph", d / "grid.gr", "--kind", kind,
                   "--full", "--seed", 3, "--out", d / f"{kind}.json") == 0
    return d


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

def test_gen_text_round_trip(tmp_path, capsys):
    out = tmp_path / "g.gr"
    assert run("gen", "--family", "grid", "--rows", 4, "--out", out) == 0
    text = out.read_text()
    assert text.splitlines()[0].startswith("c config {")
    g = tc.load_graph_text(text)
    assert g.n == 16 and g.m == 24
    assert "gen family=grid n=16 m=24" in capsys.readouterr().out


def test_gen_json_embeds_config(tmp_path):
    out = tmp_path / "g.json"
    assert run("gen", "--family", "gnp", "--n", 30, "--p", "0.2",
               "--seed", 7, "--out", out) == 0
    obj = json.loads(out.read_text())
    assert obj["run_config"]["seed"] == 7
    assert obj["run_config"]["family"] == "gnp"
    g = tc.load_graph_json(out.read_text())
    assert g.n == 30


def test_gen_partial_k_tree_writes_decomposition(tmp_path):
    out = tmp_path / "kt.gr"
    assert run("gen", "--family", "partial-k-tree", "--n", 40, "--k", 2,
               "--seed", 5, "--out", out, "--td-out", tmp_path / "kt.td") == 0
    g = tc.load_graph_text(out.read_text())
    td, n = tc.parse_pace_td((tmp_path / "kt.td").read_text())
    assert n == g.n == 40
    tc.validate_decomposition(td, g)
    assert td.width <= 2


def test_gen_td_default_path(tmp_path):
    out = tmp_path / "kt.json"
    assert run("gen", "--family", "partial-k-tree", "--n", 20,
               "--out", out) == 0
    assert (tmp_path / "kt.td").exists()


def test_gen_random_tree(tmp_path):
    out = tmp_path / "t.gr"
    assert run("gen", "--family", "random-tree", "--n", 50,
               "--max-weight", 9, "--out", out) == 0
    g = tc.load_graph_text(out.read_text())
    assert g.n == 50 and g.m == 49


def test_gen_seed_position_equivalent(tmp_path):
    a, b = tmp_path / "a.gr", tmp_path / "b.gr"
    assert run("--seed", 11, "gen", "--family", "grid", "--rows", 4,
               "--out", a) == 0
    assert run("gen", "--seed", 11, "--family", "grid", "--rows", 4,
               "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()


# ---------------------------------------------------------------------------
# build-cover
# ---------------------------------------------------------------------------

def test_build_cover_artifact(ws):
    obj = json.loads((ws / "spanning.json").read_text())
    assert obj["run_config"]["command"] == "build-cover"
    cover = tc.cover_from_json_obj(obj["cover"])
    assert cover.kind == "spanning" and cover.full and cover.size >= 1


def test_build_cover_pairwise(ws, tmp_path, capsys):
    out = tmp_path / "pw.json"
    assert run("build-cover", "--graph", ws / "grid.gr", "--mode", "pairwise",
               "--a", "0,12,24", "--kind", "metric", "--seed", 2,
               "--out", out) == 0
    cover = tc.cover_from_json_obj(json.loads(out.read_text())["cover"])
    assert cover.guarantee == "a-shortest-path-pairs"
    assert "cover kind=metric" in capsys.readouterr().out


def test_build_cover_general(ws, tmp_path):
    out = tmp_path / "gen.json"
    assert run("build-cover", "--graph", ws / "grid.gr", "--mode", "general",
               "--kind", "spanning", "--out", out) == 0
    cover = tc.cover_from_json_obj(json.loads(out.read_text())["cover"])
    assert cover.guarantee == "all-pairs" and cover.kind == "spanning"


def test_build_cover_realize_hst(ws, tmp_path):
    out = tmp_path / "re.json"
    assert run("build-cover", "--graph", ws / "grid.gr", "--kind", "hst",
               "--realize", "--full", "--out", out) == 0
    obj = json.loads(out.read_text())
    assert obj["run_config"]["realized"] is True
    cover = tc.cover_from_json_obj(obj["cover"])
    assert cover.kind != "hst"


def test_build_cover_deterministic(ws, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run("build-cover", "--graph", ws / "grid.gr", "--kind",
                   "metric", "--k", 2, "--seed", 9, "--out", out) == 0
    assert a.read_bytes() == b.read_bytes()


def test_build_cover_td_mode(tmp_path):
    assert run("gen", "--family", "partial-k-tree", "--n", 30, "--seed", 4,
               "--out", tmp_path / "kt.gr") == 0
    out = tmp_path / "cov.json"
    assert run("build-cover", "--graph", tmp_path / "kt.gr", "--sep", "td",
               "--td", tmp_path / "kt.td", "--kind", "spanning", "--full",
               "--out", out) == 0
    cover = tc.cover_from_json_obj(json.loads(out.read_text())["cover"])
    assert cover.full


def test_build_cover_pairwise_requires_a(ws, tmp_path, capsys):
    assert run("build-cover", "--graph", ws / "grid.gr", "--mode",
               "pairwise", "--kind", "metric",
               "--out", tmp_path / "x.json") == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_passes(ws, capsys):
    assert run("verify", "--graph", ws / "grid.gr",
               "--cover", ws / "spanning.json") == 0
    out = capsys.readouterr().out
    lines = [ln for ln in out.splitlines() if ln.startswith(("PASS", "FAIL"))]
    assert lines and all(ln.startswith("PASS") for ln in lines)
    assert "verify passed=true" in out


def test_verify_report_and_figures(ws, tmp_path):
    rep = tmp_path / "report.json"
    figs = tmp_path / "figs"
    assert run("verify", "--graph", ws / "grid.gr",
               "--cover", ws / "metric.json",
               "--report", rep, "--figures", figs) == 0
    obj = json.loads(rep.read_text())
    assert obj["record"]["passed"] is True
    assert (figs / "stretch.png").stat().st_size > 0
    csv_lines = (figs / "stretch.csv").read_text().splitlines()
    assert csv_lines[0].startswith("# config {")
    assert csv_lines[1] == "ratio"
    assert all(float(ln) >= 1.0 for ln in csv_lines[2:])


def test_verify_csv_report(ws, tmp_path):
    rep = tmp_path / "report.csv"
    assert run("verify", "--graph", ws / "grid.gr",
               "--cover", ws / "spanning.json", "--report", rep) == 0
    lines = rep.read_text().splitlines()
    assert lines[1] == "check,result,detail"
    assert any("non-contraction" in ln for ln in lines[2:])


def test_verify_threshold_failure(ws, capsys):
    assert run("verify", "--graph", ws / "grid.gr",
               "--cover", ws / "spanning.json",
               "--threshold-K", "0.0001") == 1
    out = capsys.readouterr().out
    assert any(ln.startswith("FAIL stretch-threshold")
               for ln in out.splitlines())


def test_verify_suites(ws, capsys):
    assert run("verify", "--graph", ws / "grid.gr",
               "--cover", ws / "metric.json", "--suite", "core") == 0
    lines = [ln for ln in capsys.readouterr().out.splitlines()
             if ln.startswith("PASS")]
    assert len(lines) == 2
    assert run("verify", "--graph", ws / "grid.gr",
               "--cover", ws / "metric.json",
               "--suite", "spanning-subgraph") == 2


def test_verify_deterministic_artifacts(ws, tmp_path):
    outs = []
    for tag in ("x", "y"):
        rep = tmp_path / f"{tag}.json"
        figs = tmp_path / f"figs-{tag}"
        assert run("verify", "--graph", ws / "grid.gr",
                   "--cover", ws / "spanning.json",
                   "--report", rep, "--figures", figs) == 0
        outs.append((rep.read_bytes(), (figs / "stretch.png").read_bytes(),
                     (figs / "stretch.csv").read_bytes()))
    assert outs[0] == outs[1]


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

def test_oracle_separator_certified(ws, capsys):
    assert run("oracle", "--graph", ws / "grid.gr", "--mode", "separator",
               "--seed", 7, "--pairs", "sample:10", "--certify") == 0
    out = capsys.readouterr().out
    for name in ("oracle-domination", "oracle-upper-bound",
                 "oracle-domain-covered"):
        assert f"PASS {name}" in out


def test_oracle_pairwise_query(ws, capsys):
    assert run("oracle", "--graph", ws / "grid.gr", "--mode", "pairwise",
               "--a", "0,12,24", "--pairs", "0,24", "--certify") == 0
    out = capsys.readouterr().out
    assert "PASS oracle-domination" in out


def test_oracle_csv(ws, tmp_path):
    out = tmp_path / "answers.csv"
    assert run("oracle", "--graph", ws / "grid.gr", "--pairs", "all",
               "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "u,v,estimate"
    assert len(lines) == 2 + 25 * 24 // 2
    first = lines[2].split(",")
    assert int(first[2]) >= 1  # estimates dominate the unit grid distance


def test_oracle_pairwise_requires_a(ws, capsys):
    assert run("oracle", "--graph", ws / "grid.gr", "--mode",
               "pairwise") == 2
    assert "error:" in capsys.readouterr().err


def test_oracle_stdout_rows(ws, capsys):
    assert run("oracle", "--graph", ws / "grid.gr", "--pairs", "0,8") == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("0,8,")


# ---------------------------------------------------------------------------
# label
# ---------------------------------------------------------------------------

def test_label_artifact_and_query(ws, tmp_path, capsys):
    out = tmp_path / "labels.json"
    assert run("label", "--cover", ws / "metric.json", "--out", out,
               "--query", "0,24") == 0
    printed = capsys.readouterr().out.splitlines()
    obj = json.loads(out.read_text())
    assert len(obj["labels"]) == 25
    assert obj["max_words"] >= max(l["words"] for l in obj["labels"])
    cover = tc.cover_from_json_obj(
        json.loads((ws / "metric.json").read_text())["cover"])
    labeling = tc.CoverDistanceLabeling(cover)
    est, tid = tc.CoverDistanceLabeling.query(labeling.label_of(0),
                                              labeling.label_of(24))
    assert printed[0] == f"0,24,{est},{tid}"
    assert obj["build_id"] == labeling.build_id


# ---------------------------------------------------------------------------
# route
# ---------------------------------------------------------------------------

def _data_rows(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config {")
    return lines[1], [ln.split(",") for ln in lines[2:]]


def test_route_graph_trace(ws, tmp_path):
    out = tmp_path / "trace.csv"
    assert run("route", "--graph", ws / "grid.gr",
               "--cover", ws / "spanning.json", "--pairs", "all",
               "--out", out) == 0
    header, rows = _data_rows(out)
    assert header == "u,v,tree,hop,vertex,header,cum_weight"
    cover = tc.cover_from_json_obj(
        json.loads((ws / "spanning.json").read_text())["cover"])
    g = tc.load_graph_text((ws / "grid.gr").read_text())
    scheme = tc.GraphRoutingScheme(g, cover)
    finals = {}
    for u, v, tree, hop, vertex, hdr, cum in rows:
        assert hdr.startswith(f"{tree}:")
        finals[(int(u), int(v))] = (vertex, cum)
    for (u, v), (vertex, cum) in finals.items():
        res = scheme.route(u, v)
        assert int(vertex) == v and int(cum) == res.total


def test_route_metric_two_hops(ws, tmp_path):
    out = tmp_path / "m.csv"
    assert run("route", "--cover", ws / "metric.json", "--mode", "metric",
               "--pairs", "all", "--out", out) == 0
    header, rows = _data_rows(out)
    assert header == "u,v,tree,hop,edge,weight,cum_weight"
    per_pair = {}
    for u, v, tree, hop, edge, w, cum in rows:
        per_pair.setdefault((u, v), []).append(int(hop))
    assert all(len(h) <= 2 for h in per_pair.values())


def test_route_threads_consistent(ws, tmp_path):
    outs = []
    for threads in (1, 4):
        p = tmp_path / f"t{threads}.csv"
        assert run("route", "--graph", ws / "grid.gr",
                   "--cover", ws / "spanning.json", "--pairs", "all",
                   "--threads", threads, "--out", p) == 0
        lines = p.read_text().splitlines()
        cfg = json.loads(lines[0][len("# config "):])
        assert cfg["threads"] == threads
        outs.append(lines[1:])
    assert outs[0] == outs[1]


def test_route_same_config_bytes(ws, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run("route", "--graph", ws / "grid.gr",
                   "--cover", ws / "spanning.json", "--pairs", "sample:16",
                   "--threads", 4, "--out", p) == 0
    assert a.read_bytes() == b.read_bytes()


def test_route_requires_graph(ws, capsys):
    assert run("route", "--cover", ws / "spanning.json") == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def test_bench_artifacts_and_threads(tmp_path, capsys):
    dirs = []
    for tag, threads in (("one", 4), ("two", 4), ("serial", 1)):
        d = tmp_path / tag
        assert run("bench", "--families", "grid", "--sizes", "64,128",
                   "--k", 2, "--seed", 9, "--threads", threads,
                   "--out-dir", d) == 0
        dirs.append(d)
    capsys.readouterr()
    assert (dirs[0] / "records-grid.json").read_bytes() == \
        (dirs[1] / "records-grid.json").read_bytes()
    assert (dirs[0] / "counts-grid.csv").read_bytes() == \
        (dirs[1] / "counts-grid.csv").read_bytes()
    # thread count is recorded config, not measured output
    one = json.loads((dirs[0] / "records-grid.json").read_text())
    ser = json.loads((dirs[2] / "records-grid.json").read_text())
    assert one["run_config"].pop("threads") == 4
    assert ser["run_config"].pop("threads") == 1
    assert one == ser


def test_bench_rejects_unknown_family(tmp_path, capsys):
    assert run("bench", "--families", "hypercube",
               "--out-dir", tmp_path / "b") == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

def test_missing_file_is_reported(tmp_path, capsys):
    assert run("verify", "--graph", tmp_path / "nope.gr",
               "--cover", tmp_path / "nope.json") == 2
    assert "error:" in capsys.readouterr().err
