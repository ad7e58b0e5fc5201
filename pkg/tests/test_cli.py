from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from stronggrade.cli import main, run

DATA = Path(__file__).parent / "data"


def d(name):
    return str(DATA / name)


def result(text, i=0):
    return json.loads(text)["reports"][i]["result"]


def test_graph_check_loop():
    code, text, _ = run(["graph", "check", "--group", "z", d("loop.graph.json")])
    assert code == 0
    assert result(text)["verdict"]["answer"] == "yes"


def test_graph_check_sink():
    code, text, _ = run(["graph", "check", "--group", "z", d("sink.graph.json")])
    assert code == 1
    w = result(text)["verdict"]["witness"]
    assert w == {"kind": "sink", "vertex": "v"}


def test_graph_check_zmod_and_rays():
    code, text, _ = run(["graph", "check", "--group", "zmod:2", d("sink.graph.json")])
    assert code == 0
    code, text, _ = run(["graph", "check", "--group", "z", d("ray_fail.graph.json")])
    assert code == 1
    assert result(text)["verdict"]["witness"]["k"] == 1


def test_certify():
    code, text, _ = run(["graph", "certify", "--vertex", "v", "--degree", "-1", d("loop.graph.json")])
    assert code == 0
    cert = result(text)["certificate"]
    assert cert["verified"] and len(cert["pairs"]) == 1
    code, text, _ = run(["graph", "certify", "--vertex", "u", "--degree", "-1", d("sink.graph.json")])
    assert code == 1


def test_groupoid_commands():
    code, text, _ = run(["gpd", "check", d("z2.groupoid.json"), d("discrete.groupoid.json")])
    assert code == 1
    reps = json.loads(text)["reports"]
    assert [r["result"]["report"]["answer"] for r in reps] == ["yes", "no"]
    code, text, _ = run(["gpd", "factor", "--gamma", "1", "--delta", "1", "--set", "e",
                         d("z2.groupoid.json")])
    assert code == 0
    assert result(text)["reevaluates_to_indicator"] is True


def test_algebra_commands():
    assert run(["alg", "check", d("z2.groupoid.json")])[0] == 0
    assert run(["alg", "check", "--ring", "GF(2)", d("discrete.groupoid.json")])[0] == 1
    code, text, _ = run(["dade", "probe", d("discrete.groupoid.json")])
    assert code == 1
    assert result(text)["natural_map_bijective"] == {"0": True, "1": False}


def test_paction_and_kgraph():
    assert run(["paction", "check", d("swap.paction.json")])[0] == 0
    assert run(["paction", "check", d("partial.paction.json")])[0] == 1
    assert run(["kp", "validate", d("two_graph.kgraph.json")])[0] == 0
    code, text, _ = run(["kp", "check", d("two_graph.kgraph.json")])
    assert code == 0 and result(text)["verdict"]["answer"] == "yes"


def test_eval():
    code, text, _ = run(["eval", d("loop.graph.json"), "e* e + 2 e"])
    assert code == 0
    r = result(text)
    assert r["value"] == "v + 2 e"
    assert r["degree"] is None
    assert r["components"] == {"0": "v", "1": "2 e"}


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": "stronggrade/graph@1", "vertices": ["v"], "edges": [{"id": "e"}]}')
    code = main(["graph", "check", "--group", "z", str(bad)])
    assert code == 2
    assert "error:" in capsys.readouterr().err
    assert run(["graph", "check", "--group", "q", d("loop.graph.json")])[0] == 2
    assert run(["graph", "check", "--group", "z", str(tmp_path / "missing.json")])[0] == 2
    with pytest.raises(SystemExit) as exc:
        run(["graph"])
    assert exc.value.code == 2


def test_reports_are_byte_stable(tmp_path):
    files = [d("loop.graph.json"), d("sink.graph.json"), d("ray_fail.graph.json")]
    a = run(["graph", "check", "--group", "z", *files])[1]
    b = run(["graph", "check", "--group", "z", "--jobs", "2", *files])[1]
    assert a == b
    out = tmp_path / "r.json"
    main(["graph", "check", "--group", "z", "--output", str(out), *files])
    assert out.read_text() == a
    timed = json.loads(run(["graph", "check", "--group", "z", "--timing", files[0]])[1])
    assert "elapsed_seconds" in timed["reports"][0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "stronggrade", "graph", "check", "--group", "z",
                           d("sink.graph.json")], capture_output=True, text=True)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["schema"] == "stronggrade/report@1"
