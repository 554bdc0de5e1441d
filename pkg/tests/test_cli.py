import csv
import io
import json
import subprocess
import sys

import pytest

from relcommit import cli
from relcommit.netsim import ProtocolTranscript
from relcommit.reports import parse_envelope


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def result_of(text):
    return parse_envelope(text)[1]


def test_bound_multiround(capsys):
    code, out, _ = run(capsys, "bound", "multiround", "--n", "512", "--m", "5")
    assert code == 0
    res = result_of(out)
    assert 2.2e-10 <= res["epsilon"] <= 2.4e-10
    assert res["flags"]["secure"]


def test_bound_chshn(capsys):
    code, out, _ = run(capsys, "bound", "chshn", "--n", "512", "--adversary", "quantum")
    assert code == 0 and f"{result_of(out)['epsilon']:.3g}" == "1.22e-77"
    code, out, _ = run(capsys, "bound", "chshn", "--n", "1", "--adversary", "quantum")
    assert code == 0 and result_of(out)["epsilon"] == "insecure"


def test_bound_qbc(capsys):
    code, out, _ = run(capsys, "bound", "qbc", "--n", "100", "--delta", "0.05")
    assert code == 0
    res = result_of(out)
    assert res["epsilon"] == pytest.approx(4.18e-2, rel=1e-2)
    code, _, err = run(capsys, "bound", "qbc", "--n", "100", "--delta", "0.2")
    assert code == 1 and "lambda_1" in err
    code, out, _ = run(capsys, "bound", "qbc", "--n", "1000", "--delta", "0.05", "--mu", "0.01", "--gamma", "0.3",
                       "--eta", "0.9", "--err", "0.01")
    assert code == 0


def test_game_value_and_bound(capsys):
    code, out, _ = run(capsys, "game", "value", "--q", "2", "--m", "2")
    assert code == 0 and result_of(out)["value"] == "3/4"
    code, out, _ = run(capsys, "game", "value", "--game", "chshn", "--n", "2")
    assert code == 0 and result_of(out)["value"] == "5/8"
    code, out, _ = run(capsys, "game", "bound", "--q", "4", "--m", "2")
    res = result_of(out)
    assert code == 0 and res["value"] == "9/16" and res["within_bound"]
    code, out, _ = run(capsys, "game", "bound", "--q", "2", "--m", "5")
    res = result_of(out)
    assert code == 0 and res["value"] is None and "budget" in res["bruteforce_skipped"]
    code, _, err = run(capsys, "game", "value", "--q", "3", "--m", "2")
    assert code == 1 and "power of two" in err


def test_simulate_transcript_is_deterministic(capsys):
    args = ("simulate", "multiround", "--n", "8", "--m", "3", "--seed", "9")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    tr = ProtocolTranscript.from_jsonl(first)
    assert tr.get("verdict").payload == "1"
    _, other, _ = run(capsys, "simulate", "multiround", "--n", "8", "--m", "3", "--seed", "10")
    assert other != first


def test_simulate_summary_and_adversaries(capsys):
    code, out, _ = run(capsys, "simulate", "sbgkw", "--n", "4", "--t-open", "2", "--summary",
                       "--adversary", '{"strategy": "expiry", "challenge": 1}')
    res = result_of(out)
    assert code == 0 and res["accepted"] and res["flags"]
    code, _, err = run(capsys, "simulate", "sbgkw", "--n", "4", "--t-open", "1",
                       "--adversary", '{"strategy": "expiry", "challenge": 1}')
    assert code == 1 and "not causal" in err
    code, _, err = run(capsys, "simulate", "sbgkw", "--adversary", "{bad")
    assert code == 1 and "JSON" in err
    code, out, _ = run(capsys, "simulate", "dot", "--m0", "01", "--m1", "11", "--c", "1", "--summary")
    assert code == 0 and result_of(out)["message"] == "11"
    code, out, _ = run(capsys, "simulate", "secret-sharing", "--d", "1", "--summary")
    assert code == 0 and result_of(out)["accepted"]


def test_simulate_physical_duration(capsys):
    code, out, _ = run(capsys, "simulate", "multiround", "--m", "5", "--distance-km", "131", "--summary")
    assert code == 0
    assert result_of(out)["duration"] == pytest.approx(2.18e-3, abs=1e-5)


def test_causality_audit_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "causality_violations", lambda t, s=None: ["forged"])
    code, _, _ = run(capsys, "simulate", "secret-sharing")
    assert code == 2


def test_feasibility_sweep_csv(capsys):
    code, out, _ = run(capsys, "qbc", "feasibility", "--mu", "0.5", "--eta", "0.8",
                       "--sweep", "err=0.1462:0.1467:0.0001")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6
    flags = {r["err"]: r["achievable"] for r in rows}
    assert flags["0.1464"] == "1" and flags["0.1465"] == "0"
    code, _, _ = run(capsys, "qbc", "feasibility", "--sweep", "err=0.2:0.1:0.01")
    assert code == 1
    code, _, _ = run(capsys, "qbc", "feasibility", "--sweep", "n=1,2")
    assert code == 1


def test_parse_sweep():
    grid = cli.parse_sweep(["err=0.1:0.1003:0.0001", "eta=0.5,1"])
    assert grid["err"] == [0.1, 0.1001, 0.1002, 0.1003]
    assert grid["eta"] == [0.5, 1.0]


def test_spacetime_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "spacetime", "window", "--distance-km", "12742")
    assert code == 0
    assert json.dumps(result_of(out))  # serialisable
    path = tmp_path / "ev.json"
    path.write_text(json.dumps([{"label": 1, "x": "0", "t": "0"}, {"label": 2, "x": "1", "t": "2"}]))
    code, out, _ = run(capsys, "spacetime", "graph", str(path))
    assert code == 0
    code, _, err = run(capsys, "spacetime", "graph", str(tmp_path / "missing.json"))
    assert code == 1


def test_certify_commands(capsys):
    code, out, _ = run(capsys, "certify", "classical", "--n", "2")
    assert code == 0
    code, out, _ = run(capsys, "certify", "classical", "--n", "6", "--samples", "50", "--seed", "1")
    assert code == 0
    code, out, _ = run(capsys, "certify", "quantum-attack", "--n", "2", "--demo-canonical", "--phi", "0.6,0.8j")
    assert code == 0
    code, _, err = run(capsys, "certify", "quantum-attack", "--n", "2", "--demo-canonical", "--phi", "0,0")
    assert code == 1


def test_out_and_timing(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "--timing", "bound", "chshn", "--n", "3", "--out", str(target))
    assert code == 0 and out == ""
    data = json.loads(target.read_text())
    assert "elapsed_s" in data
    _, out, _ = run(capsys, "bound", "chshn", "--n", "3")
    assert "elapsed_s" not in out


def test_validation_errors(capsys):
    for argv in (["bound", "multiround", "--n", "0", "--m", "5"],
                 ["bound", "qbc", "--n", "10", "--eta", "2"],
                 ["spacetime", "window", "--distance-km", "-1"]):
        code, _, err = run(capsys, *argv)
        assert code == 1 and err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "relcommit", "game", "value", "--q", "2", "--m", "1"],
                          capture_output=True, text=True, check=True)
    assert result_of(proc.stdout)["value"] == "1/2"
