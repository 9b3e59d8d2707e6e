import io
import json
import subprocess
import sys

import pytest

from weylflow.cli import main, parse_number

jsonschema = pytest.importorskip("jsonschema")

REPORT_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["check_id", "status", "mode", "seed", "details"],
        "additionalProperties": False,
        "properties": {
            "check_id": {"type": "string"},
            "status": {"enum": ["pass", "fail", "skipped"]},
            "mode": {"type": "string"},
            "seed": {"type": ["integer", "null"]},
            "details": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["identity", "residual"],
                    "additionalProperties": False,
                    "properties": {"identity": {"type": "string"},
                                   "residual": {"type": "string"}},
                },
            },
        },
    },
}

SIXTH = "1/6,1/6,1/6,1/6,1/6"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def load(path):
    data = json.loads(path.read_text())
    jsonschema.validate(data, REPORT_SCHEMA)
    return data


@pytest.mark.parametrize("argv,code", [
    (["verify", "--suite", "integrals"], 0),
    (["verify", "--suite", "hamiltonian"], 0),
    (["verify", "--suite", "invariance", "--plain-mode"], 1),
    (["verify", "--suite", "bogus"], 2),
    (["integrate", "--system", "autonomous", "--alpha", SIXTH, "--init", "1,1,1,1,1,1,1",
      "--t0", "0", "--t1", "1"], 0),
    (["integrate", "--system", "piii", "--alpha", SIXTH, "--init", "1,1,1,1",
      "--t0", "-1", "--t1", "1"], 2),
    (["integrate", "--system", "piii", "--alpha", "1,0,0,0,0", "--init", "0.3,0.6,-0.4,0.2",
      "--t0", "1", "--t1", "2"], 0),
    (["integrate", "--system", "piii", "--alpha", "1,1,0,0,0", "--init", "0.3,0.6,-0.4,0.2",
      "--t0", "1", "--t1", "2"], 2),
    (["integrate", "--system", "piii", "--alpha", "1,1,0,0,0", "--init", "0.3,0.6,-0.4,0.2",
      "--t0", "1", "--t1", "2", "--allow-unnormalized"], 0),
    (["integrate", "--system", "autonomous", "--alpha", SIXTH, "--init", "1,1,1,1,1,1,1",
      "--t0", "0", "--t1", "1", "--blowup", "2"], 3),
    (["integrate", "--system", "autonomous", "--alpha", SIXTH, "--init", "1,1,1",
      "--t0", "0", "--t1", "1"], 2),
    (["integrate", "--system", "autonomous", "--alpha", "1/6,x", "--init", "1,1,1,1,1,1,1",
      "--t0", "0", "--t1", "1"], 2),
    (["orbit", "--word", "s1", "--alpha", SIXTH, "--point", "1,0,1,1", "--time", "1"], 1),
    (["orbit", "--word", "s7", "--alpha", SIXTH, "--point", "1,1,1,1"], 2),
    (["relations", "--word", "s0 s2 s0 s2 s0 s2", "--samples", "20", "--seed", "42"], 0),
    (["relations", "--word", "s0 s2"], 1),
    (["relations", "--word", "pi3 s0 pi3 s3", "--samples", "20"], 0),
    (["relations", "--word", "s0 q"], 2),
    (["map-trajectory", "--map", "s1", "--alpha", SIXTH, "--init", "0.3,0.6,-0.4,0.2"], 0),
    (["map-trajectory", "--map", "s9", "--alpha", SIXTH, "--init", "0.3,0.6,-0.4,0.2"], 2),
    ([], 2),
])
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_verify_all(tmp_path):
    path = tmp_path / "report.json"
    code, text = run("verify", "--suite", "all", "--json", str(path))
    assert code == 0
    data = load(path)
    assert len(data) >= 30 and all(r["status"] == "pass" for r in data)
    ids = [r["check_id"] for r in data]
    assert ids == sorted(ids) and len(set(ids)) == len(ids)


def test_verify_json_deterministic(tmp_path, monkeypatch):
    a, b, c = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "c.json"
    run("verify", "--suite", "relations", "--samples", "5", "--json", str(a))
    run("verify", "--suite", "relations", "--samples", "5", "--json", str(b))
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv("WEYLFLOW_SEED", "7")
    run("verify", "--suite", "relations", "--samples", "5", "--json", str(c))
    assert {r["seed"] for r in load(c) if r["mode"] == "sampled"} == {7}


def test_plain_mode_report(tmp_path):
    path = tmp_path / "plain.json"
    run("verify", "--suite", "invariance", "--plain-mode", "--json", str(path))
    failing = sorted(r["check_id"] for r in load(path) if r["status"] == "fail")
    assert failing == [f"invariance.autonomous.s{i}.plain" for i in range(5)] + [
        "invariance.piii.s2.plain"]


def test_orbit_exact_output():
    code, text = run("orbit", "--word", "s1", "--alpha", SIXTH, "--point", "1,1,1,1",
                     "--time", "1")
    assert code == 0
    assert "x' = 7/6" in text
    assert "alpha' = (1/6, -1/6, 1/3, 1/6, 1/6)" in text


def test_orbit_involution_echoes_input():
    code, text = run("orbit", "--word", "s1 s1", "--alpha", SIXTH, "--point", "2/3,5,-1,4",
                     "--time", "3/2")
    assert code == 0
    assert text.splitlines()[:4] == ["x' = 2/3", "y' = 5", "z' = -1", "w' = 4"]
    assert "T' = 3/2" in text


def test_orbit_names_divisor(tmp_path):
    path = tmp_path / "pole.json"
    code, text = run("orbit", "--word", "s2", "--alpha", SIXTH, "--point", "1,1,-1,1",
                     "--json", str(path))
    assert code == 1 and "x*z + T" in text
    assert load(path)[0]["details"][1]["residual"] == "x*z + T"


def test_orbit_float_path():
    code, text = run("orbit", "--word", "s1", "--alpha", SIXTH, "--point", "1.0,1,1,1")
    assert code == 0 and "x' = 1.1666666666666667" in text


def test_integrate_writes_csv_and_drift(tmp_path):
    csv_path, json_path = tmp_path / "a.csv", tmp_path / "a.json"
    code, text = run("integrate", "--system", "autonomous", "--alpha", SIXTH,
                     "--init", "1,1,1,1,1,1,1", "--t0", "0", "--t1", "1",
                     "--out", str(csv_path), "--json", str(json_path))
    assert code == 0 and "max drift f0-f1" in text
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "t,f0,f1,f2,f3,f4,g1,g2" and len(lines) == 258
    assert len(lines[-1].split(",")) == 8
    ids = [r["check_id"] for r in load(json_path)]
    assert ids == ["drift.autonomous", "integrate.autonomous"]


def test_map_trajectory_json(tmp_path):
    path = tmp_path / "eq.json"
    code, _ = run("map-trajectory", "--map", "pi1", "--alpha", SIXTH,
                  "--init", "0.3,0.6,-0.4,0.2", "--json", str(path))
    assert code == 0
    assert [r["check_id"] for r in load(path)] == ["equivariance.pi1", "integrate.piii"]


def test_parse_number():
    from fractions import Fraction
    assert parse_number("-3/4") == Fraction(-3, 4)
    assert isinstance(parse_number("0.25"), float)
    assert isinstance(parse_number("1e-3"), float)


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "weylflow.cli", "relations", "--word", "s1 s1",
                          "--samples", "3"], capture_output=True, text=True)
    assert out.returncode == 0 and "PASS" in out.stdout
    help_text = subprocess.run([sys.executable, "-m", "weylflow.cli", "orbit", "--help"],
                               capture_output=True, text=True).stdout
    assert "right to" in help_text
