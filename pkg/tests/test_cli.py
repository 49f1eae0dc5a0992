import json
import subprocess
import sys

import pytest

from quadol.cli import main
from quadol.netlist import parse_blif_file

from conftest import fixture


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["quadol", "x.blif", "--metric", "wrong"])
    assert err.value.code == 2


def test_parse_error_exits_3(tmp_path, capsys):
    bad = tmp_path / "bad.blif"
    bad.write_text(".model m\n.inputs a\n.outputs y\n.names a y\n2 1\n.end\n")
    assert main(["quadol", str(bad)]) == 3
    assert "error:" in capsys.readouterr().err


def test_missing_file_exits_5(capsys):
    assert main(["quadol", "/nonexistent/input.blif"]) == 5
    assert main(["evaluate", fixture("mult4.blif"),
                 "/nonexistent/approx.blif"]) == 5
    capsys.readouterr()


def test_unwritable_report_exits_5(capsys):
    assert main(["quadol", fixture("mult4.blif"), "--bound", "0.05",
                 "--report", "/nonexistent-dir/report.json"]) == 5
    capsys.readouterr()


def test_infeasible_exits_4(capsys):
    code = main(["quadol", fixture("mult4.blif"),
                 "--base", fixture("mult4_approx.blif"), "--bound", "0.0"])
    assert code == 4
    assert "infeasible" in capsys.readouterr().out


def test_interface_mismatch_exits_3(capsys):
    assert main(["evaluate", fixture("mult4.blif"),
                 fixture("mult4_badio.blif")]) == 3
    assert "interface" in capsys.readouterr().err


def test_quadol_writes_netlist_sidecar_and_report(tmp_path, capsys):
    out = tmp_path / "opt.blif"
    rep = tmp_path / "report.json"
    argv = ["quadol", fixture("mult4.blif"), "--metric", "er",
            "--bound", "0.05", "--seed", "42",
            "--output", str(out), "--report", str(rep)]
    assert main(argv) == 0
    text = capsys.readouterr().out
    assert "luts: 21 -> 19" in text
    doc = json.loads(rep.read_text())
    assert doc["schema"] == 1
    assert doc["tool"] == "quadol"
    assert doc["params"]["bound"] == 0.05 and doc["params"]["seed"] == 42
    assert doc["result"]["feasible"] is True
    assert doc["result"]["error"]["er"] <= 0.05
    assert doc["result"]["merged_pair_count"] == 2
    side = json.loads((tmp_path / "opt.blif.merges.json").read_text())
    assert side["schema"] == 1
    assert len(side["merged_pairs"]) == 2
    for entry in side["merged_pairs"]:
        assert entry["lut_a"].startswith("0x") and len(entry["lut_a"]) == 10
        assert entry["f_port"] in ("O5", "O6")
    # the emitted netlist parses and has one node per original LUT
    net = parse_blif_file(str(out))
    assert len(net.nodes) == 21

    # byte-identical reruns
    out2 = tmp_path / "opt2.blif"
    rep2 = tmp_path / "report2.json"
    assert main(["quadol", fixture("mult4.blif"), "--metric", "er",
                 "--bound", "0.05", "--seed", "42",
                 "--output", str(out2), "--report", str(rep2)]) == 0
    capsys.readouterr()
    assert out.read_bytes() == out2.read_bytes()
    assert rep.read_bytes() == rep2.read_bytes()


def test_evaluate_reports_both_metrics(tmp_path, capsys):
    rep = tmp_path / "eval.json"
    assert main(["evaluate", fixture("mult4.blif"),
                 fixture("mult4_approx.blif"), "--report", str(rep)]) == 0
    text = capsys.readouterr().out
    assert "er = " in text and "mred = " in text
    doc = json.loads(rep.read_text())
    assert doc["tool"] == "evaluate"
    assert doc["lut_count"] == {"exact": 21, "approx": 20}
    assert 0 < doc["error"]["er"] < 1
    assert doc["error"]["mode"] == "exhaustive"


def test_evaluate_msb_first_changes_mred(capsys):
    assert main(["evaluate", fixture("mult4.blif"),
                 fixture("mult4_approx.blif")]) == 0
    lsb = capsys.readouterr().out
    assert main(["evaluate", fixture("mult4.blif"),
                 fixture("mult4_approx.blif"), "--msb-first"]) == 0
    msb = capsys.readouterr().out
    lsb_mred = [l for l in lsb.splitlines() if l.startswith("mred")][0]
    msb_mred = [l for l in msb.splitlines() if l.startswith("mred")][0]
    assert lsb_mred != msb_mred
    assert lsb.splitlines()[0] == msb.splitlines()[0]  # er unaffected


def test_pairs_listing(tmp_path, capsys):
    rep = tmp_path / "pairs.json"
    assert main(["pairs", fixture("adder8.blif"), "--report", str(rep)]) == 0
    text = capsys.readouterr().out
    assert "2 candidate pairs" in text
    doc = json.loads(rep.read_text())
    assert doc["tool"] == "pairs"
    assert [(p["f"], p["g"], p["type"]) for p in doc["pairs"]] == [
        ("g03", "p03", "shared6"), ("g36", "p36", "shared6")]


def test_quadol_plus_reports_winner(tmp_path, capsys):
    rep = tmp_path / "plus.json"
    out = tmp_path / "winner.blif"
    argv = ["quadol-plus", fixture("mult4.blif"),
            fixture("mult4_approx.blif"), fixture("mult4_badio.blif"),
            "--metric", "er", "--bound", "0.1", "--seed", "7",
            "--report", str(rep), "--output", str(out)]
    assert main(argv) == 0
    text = capsys.readouterr().out
    assert "winner:" in text and "skipped" in text
    doc = json.loads(rep.read_text())
    assert doc["tool"] == "quadol-plus"
    assert doc["winner"].endswith("mult4_approx.blif")
    labels = [r["label"] for r in doc["runs"]]
    assert labels[0] == "exact" and len(labels) == 3
    assert "skipped" in doc["runs"][2]
    assert parse_blif_file(str(out)).primary_outputs == (
        "p0", "p1", "p2", "p3", "p4", "p5", "p6", "p7")


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "quadol.cli", "evaluate",
         fixture("adder4.blif"), fixture("adder4.blif")],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "er = 0" in proc.stdout
