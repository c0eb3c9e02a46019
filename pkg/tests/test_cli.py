import csv
import json

import pytest

from ehrhart_roots.cli import main, parse_family_spec


@pytest.fixture(autouse=True)
def isolate_env(monkeypatch, tmp_path):
    monkeypatch.delenv("EHRHART_CACHE", raising=False)
    monkeypatch.chdir(tmp_path)


def read_cache(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def test_family_spec_parsing():
    g, fam = parse_family_spec("complete:4")
    assert g.d == 4 and fam == ("complete", (4,))
    g, fam = parse_family_spec("multipartite:3,2,2")
    assert g.d == 7 and fam == ("multipartite", (3, 2, 2))
    g, fam = parse_family_spec("gamma:6,3")
    assert g.loops == frozenset({1, 2, 3})
    g, fam = parse_family_spec("tree:path:5")
    assert len(g.edges) == 4


def test_enumerate(tmp_path, capsys):
    out = tmp_path / "g5.txt"
    assert main(["enumerate", "--order", "5", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 21
    assert all(line.startswith("d=5;") for line in lines)
    assert "21" in capsys.readouterr().out


def test_enumerate_bad_order(tmp_path):
    assert main(["enumerate", "--order", "17", str(tmp_path / "x.txt")]) == 2


def test_compute_family_both_methods(tmp_path):
    cache = tmp_path / "c.jsonl"
    assert main(["compute", "complete:3", "--method", "both", "--cache", str(cache)]) == 0
    (rec,) = read_cache(cache)
    assert rec["kind"] == "edge"
    assert rec["degree"] == 2
    assert rec["ehrhart"] == ["1/1", "3/2", "1/2"]
    assert [r["exact"] for r in rec["roots"]] == ["-2/1", "-1/1"]
    assert all(r["residual"] == 0 for r in rec["roots"])


def test_compute_corpus_file(tmp_path):
    gfile = tmp_path / "g4.txt"
    cache = tmp_path / "c.jsonl"
    assert main(["enumerate", "--order", "4", str(gfile)]) == 0
    assert main(["compute", str(gfile), "--kind", "symmetric", "--cache", str(cache), "--jobs", "1"]) == 0
    recs = read_cache(cache)
    assert len(recs) == 6
    keys = [(r["graph_key"], r["kind"]) for r in recs]
    assert keys == sorted(keys)
    assert all(r["degree"] == 3 for r in recs)


def test_compute_usage_errors(tmp_path):
    cache = str(tmp_path / "c.jsonl")
    assert main(["compute", "complete:x", "--cache", cache]) == 2
    assert main(["compute", "frob:3", "--cache", cache]) == 2
    assert main(["compute", "no-such-file.txt", "--cache", cache]) == 2
    assert main(["compute", "tree:ring:4", "--cache", cache]) == 2
    # looped families have no symmetric edge polytope
    assert main(["compute", "gamma:5,2", "--kind", "symmetric", "--cache", cache]) == 2
    # no closed form for an odd cycle's edge polytope
    assert main(["compute", "cycle:5", "--method", "formula", "--cache", cache]) == 2


def test_compute_formula_tree(tmp_path):
    cache = tmp_path / "c.jsonl"
    assert main(["compute", "tree:path:5", "--method", "both", "--cache", str(cache)]) == 0
    (rec,) = read_cache(cache)
    assert rec["degree"] == 3


def test_cache_idempotent_bytes(tmp_path):
    gfile = tmp_path / "g4.txt"
    cache = tmp_path / "c.jsonl"
    main(["enumerate", "--order", "4", str(gfile)])
    main(["compute", str(gfile), "--cache", str(cache)])
    first = cache.read_bytes()
    main(["compute", str(gfile), "--cache", str(cache)])
    assert cache.read_bytes() == first
    # a check pass stores verdicts; recomputing must not drop them
    main(["check", str(gfile), "--cache", str(cache), "--report", str(tmp_path / "r.csv")])
    with_checks = cache.read_bytes()
    assert b'"checks"' in with_checks
    main(["compute", str(gfile), "--cache", str(cache)])
    assert cache.read_bytes() == with_checks


def test_check_pass_and_report(tmp_path, capsys):
    cache = tmp_path / "c.jsonl"
    report = tmp_path / "report.csv"
    rc = main(
        [
            "check",
            "complete:4",
            "--checks",
            "strip,circle,narrow-strip",
            "--cache",
            str(cache),
            "--report",
            str(report),
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "check strip (gated): 1 pass / 0 fail / 0 n-a" in out
    rows = list(csv.DictReader(report.open()))
    assert len(rows) == 1
    assert rows[0]["strip"] == "pass"
    assert rows[0]["circle"] == "pass"
    assert rows[0]["graph_key"].startswith("g4-")


def test_check_observational_failure_exits_zero(tmp_path, capsys):
    # the 7-cycle's symmetric polytope has roots off the half-line
    cache = tmp_path / "c.jsonl"
    rc = main(
        [
            "check",
            "cycle:7",
            "--kind",
            "symmetric",
            "--checks",
            "half-line,narrow-strip",
            "--cache",
            str(cache),
            "--report",
            str(tmp_path / "r.csv"),
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "check half-line (observational): 0 pass / 1 fail / 0 n-a" in out
    assert "check narrow-strip (gated): 1 pass / 0 fail / 0 n-a" in out


def test_check_gated_failure_exits_one(tmp_path):
    cache = tmp_path / "c.jsonl"
    main(["compute", "complete:3", "--cache", str(cache)])
    recs = read_cache(cache)
    for r in recs[0]["roots"]:
        r["re"], r["exact"] = 99.0, None
    cache.write_text("\n".join(json.dumps(r) for r in recs) + "\n")
    rc = main(["check", "complete:3", "--cache", str(cache), "--report", str(tmp_path / "r.csv")])
    assert rc == 1


def test_check_not_applicable(tmp_path, capsys):
    cache = tmp_path / "c.jsonl"
    rc = main(
        [
            "check",
            "cycle:5",
            "--checks",
            "circle,half-line",
            "--cache",
            str(cache),
            "--report",
            str(tmp_path / "r.csv"),
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    # circle applies only to complete multipartite graphs, half-line only to
    # the symmetric kind
    assert "check circle (gated): 0 pass / 0 fail / 1 n-a" in out
    assert "check half-line (observational): 0 pass / 0 fail / 1 n-a" in out


def test_check_unknown_name(tmp_path):
    assert main(["check", "complete:3", "--checks", "bogus", "--cache", str(tmp_path / "c.jsonl")]) == 2


def test_check_no_compute_missing_cache(tmp_path):
    rc = main(
        [
            "check",
            "complete:3",
            "--cache",
            str(tmp_path / "empty.jsonl"),
            "--no-compute",
            "--report",
            str(tmp_path / "r.csv"),
        ]
    )
    assert rc == 3


def test_export_csv(tmp_path):
    cache = tmp_path / "c.jsonl"
    out = tmp_path / "roots.csv"
    assert main(["export", "complete:3", str(out), "--cache", str(cache)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [(r["re"], r["exact"]) for r in rows] == [("-2", "-2/1"), ("-1", "-1/1")]
    assert rows[0]["polytope"] == "edge"
    assert rows[0]["D"] == "2"


def test_export_expands_multiplicity(tmp_path):
    cache = tmp_path / "c.jsonl"
    out = tmp_path / "roots.csv"
    assert main(["export", "multipartite:3,3", str(out), "--cache", str(cache)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 4  # degree of the K_{3,3} polynomial
    assert [r["re"] for r in rows] == ["-2", "-2", "-1", "-1"]


def test_export_svg_deterministic(tmp_path):
    cache = tmp_path / "c.jsonl"
    out = tmp_path / "scatter.svg"
    assert main(["export", "complete:5", str(out), "--format", "svg", "--cache", str(cache)]) == 0
    assert (tmp_path / "scatter.csv").exists()
    first = out.read_bytes()
    assert main(["export", "complete:5", str(out), "--format", "svg", "--cache", str(cache)]) == 0
    assert out.read_bytes() == first
    assert b"<svg" in first


def test_env_var_cache(tmp_path, monkeypatch):
    cache = tmp_path / "envcache.jsonl"
    monkeypatch.setenv("EHRHART_CACHE", str(cache))
    assert main(["compute", "complete:3"]) == 0
    assert cache.exists()
    assert len(read_cache(cache)) == 1


def test_version_flag(capsys):
    with pytest.raises(SystemExit):
        main_argv = ["--version"]
        from ehrhart_roots.cli import build_parser

        build_parser().parse_args(main_argv)
    assert "ehrhart-roots" in capsys.readouterr().out


def test_bad_subcommand_returns_two():
    assert main(["frobnicate"]) == 2
    assert main(["compute"]) == 2
