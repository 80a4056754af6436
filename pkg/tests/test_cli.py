import json

import pytest

from eoturan.cli import main
from eoturan.graph import EdgeOrderedGraph, complete_graph, serialize


@pytest.fixture
def files(tmp_path):
    k7 = tmp_path / "k7.eog"
    k7.write_text(serialize(complete_graph(7)))
    match = tmp_path / "matching.eog"
    match.write_text(serialize(EdgeOrderedGraph(6, ((0, 1, 1), (2, 3, 2), (4, 5, 3)))))
    small = tmp_path / "k4.eog"
    small.write_text(serialize(complete_graph(4)))
    two = tmp_path / "two.eog"
    two.write_text("4 2\n0 1 1\n2 3 2\n")
    bad = tmp_path / "bad.eog"
    bad.write_text("3 2\n0 1 1\n0 1 2\n")
    return {"k7": str(k7), "matching": str(match), "k4": str(small), "two": str(two), "bad": str(bad), "dir": tmp_path}


def run(capsys, *argv):
    code = main([*argv, "--format", "json", "--no-meta"])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_contains(files, capsys):
    code, rep, _ = run(capsys, "contains", files["k7"], "P5^1342")
    assert code == 0 and rep["result"] == "contains" and len(rep["embedding"]) == 5
    code, rep, _ = run(capsys, "contains", files["matching"], "P3^12")
    assert code == 1 and rep["result"] == "avoids"


def test_malformed_input_exits_2(files, capsys):
    code, rep, err = run(capsys, "contains", files["bad"], "P3^12")
    assert code == 2 and rep is None and "duplicate edge" in err and "line 3" in err
    code, _, err = run(capsys, "contains", str(files["dir"] / "missing.eog"), "P3^12")
    assert code == 2 and "no such file" in err
    code, _, err = run(capsys, "contains", files["k7"], "P5^1322")
    assert code == 2 and "repeated" in err


def test_classify(capsys):
    code, rep, _ = run(capsys, "classify", "P5^1342")
    assert code == 0 and rep["ocn2"] and rep["k"] == 3 and rep["left_order"] == [0, 4, 2]
    code, rep, _ = run(capsys, "classify", "P5^3142")
    assert code == 1 and not rep["ocn2"]
    code, rep, _ = run(capsys, "classify", "P2^1")
    assert code == 0 and rep["k"] == 1 and rep["star"]


def test_step(files, capsys):
    code, rep, _ = run(capsys, "step", files["matching"], "P5^1342")
    assert code == 1 and rep["outcome"] == "dense"
    assert rep["audit"]["f"] >= 3 and rep["audit"]["gstar_edges"] == 3
    code, rep, _ = run(capsys, "step", files["two"], "P5^1342")
    assert code == 1 and rep["outcome"] == "host"
    code, rep, _ = run(capsys, "step", files["k7"], "P5^1342", "--f", "1", "--seed", "5")
    assert code in (0, 1, 2) and rep["outcome"] in {"embedding", "dense", "diagnostic"}


def test_step_rejects_non_ocn2(files, capsys):
    code, _, err = run(capsys, "step", files["k7"], "P5^3142")
    assert code == 2 and "order chromatic" in err


def test_drive(files, capsys):
    code, rep, _ = run(capsys, "drive", files["k7"], "P5^1342")
    assert code == 0 and rep["outcome"] == "found"
    code, rep, _ = run(capsys, "drive", files["matching"], "P3^12")
    assert code == 1 and rep["outcome"] == "certificate" and rep["avoidance_proved"]


def test_bound(capsys):
    code, rep, _ = run(capsys, "bound", "1024", "2", "3")
    assert code == 0
    assert rep["constants"]["c5"] == "3" and rep["constants"]["c1"] == "2412"
    lo, hi = rep["exp_branch"]
    assert lo <= 1024 * 2 ** (3 * 10**0.5) <= hi * (1 + 1e-12)
    assert rep["bound"] == 449036752896 * 1024
    code, _, err = run(capsys, "bound", "10", "1", "3")
    assert code == 2 and "k >= 2" in err


def test_exmax_and_cache_flag_beats_env(files, capsys, monkeypatch):
    env_cache = files["dir"] / "env.jsonl"
    flag_cache = files["dir"] / "flag.jsonl"
    monkeypatch.setenv("EOTURAN_CACHE", str(env_cache))
    code, rep, _ = run(capsys, "exmax", "4", "P3^12", "--cache", str(flag_cache))
    assert code == 0 and rep["value"] == 2 and not rep["cached"]
    assert flag_cache.exists() and not env_cache.exists()
    code, rep, _ = run(capsys, "exmax", "4", "P3^12", "--cache", str(flag_cache))
    assert rep["cached"]
    code, rep, _ = run(capsys, "exmax", "4", "P3^12")
    assert env_cache.exists() and not rep["cached"]


def test_exmax_budget(capsys):
    code, rep, _ = run(capsys, "exmax", "5", "P5^1342", "--budget", "50")
    assert code == 2 and rep["lower"] <= 10 <= rep["upper"]


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "P5^1342"],
        ["bound", "1000", "3", "5"],
        ["drive", "{k7}", "P5^1342", "--seed", "9"],
        ["step", "{k7}", "P5^1342", "--seed", "18446744073709551615"],
    ],
)
@pytest.mark.parametrize("fmt", ["text", "json"])
def test_reports_are_byte_identical(files, capsys, argv, fmt):
    argv = [a.format(**files) for a in argv]
    outs = []
    for _ in range(2):
        main([*argv, "--format", fmt, "--no-meta", "--threads", "2"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] and outs[0]


def test_meta_is_included_by_default(capsys):
    main(["classify", "P5^1342", "--format", "json"])
    rep = json.loads(capsys.readouterr().out)
    assert {"version", "generated", "elapsed_seconds"} <= rep["meta"].keys()


def test_text_format(capsys):
    assert main(["classify", "P5^1342", "--no-meta"]) == 0
    out = capsys.readouterr().out
    assert "left_order: 0 4 2" in out and "ocn2: yes" in out


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "eoturan", "classify", "P5^3142", "--no-meta"], capture_output=True, text=True)
    assert proc.returncode == 1 and "ocn2: no" in proc.stdout


def test_exmax_report_is_reproducible(capsys):
    outs = []
    for _ in range(2):
        main(["exmax", "5", "P3^12", "--no-meta"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] and "seconds" not in outs[0]
