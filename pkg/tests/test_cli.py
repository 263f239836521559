import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from hurwitz_frobenius.cli import main

ANCHOR = {"genus": 0, "kind": "polynomial", "N": 3, "params": [[-3, 0], [0, 0]]}
TORUS = {"genus": 1, "N": 2, "sigma": [0, 1], "c0": [0, 0], "c": [[1, 0]]}


def schema(name):
    return json.loads(resources.files("hurwitz_frobenius").joinpath(f"schemas/{name}.schema.json").read_text())


def write(tmp_path, obj, name="in.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_anchor(tmp_path, capsys):
    code, out, _ = run(["analyze", write(tmp_path, ANCHOR)], capsys)
    assert code == 0
    rec = json.loads(out)
    jsonschema.validate(rec, schema("frobenius"))
    assert rec["H"][0][0] == pytest.approx(1 / 288) and rec["H"][1][0] == pytest.approx(-1 / 288)
    assert abs(rec["H"][0][1]) < 1e-15


def test_analyze_quadratic(tmp_path, capsys):
    d = {"genus": 0, "kind": "polynomial", "N": 2, "params": [[5, 0]]}
    code, out, _ = run(["analyze", write(tmp_path, d)], capsys)
    rec = json.loads(out)
    assert code == 0 and rec["lambdas"] == [[5.0, 0.0]] and rec["H"] == [[0.0, 0.0]]


def test_analyze_torus_schema(tmp_path, capsys):
    code, out, _ = run(["analyze", write(tmp_path, TORUS)], capsys)
    assert code == 0
    rec = json.loads(out)
    jsonschema.validate(rec, schema("frobenius"))
    jsonschema.validate(rec["covering"], schema("descriptor"))
    assert rec["phi"] == "omega" and len(rec["flat_coords"]) == 3


@pytest.mark.parametrize("payload,phi,code,kind", [
    ("{not json", None, 2, "parse_error"),
    ({"genus": 0, "kind": "cubic", "N": 3, "params": []}, None, 2, "parse_error"),
    ({"genus": 0, "kind": "polynomial", "N": 3, "params": [[0, 0], [0, 0]]}, None, 3, "non_simple_stratum"),
    (ANCHOR, "omega", 4, "incompatible_phi"),
])
def test_analyze_errors(tmp_path, capsys, payload, phi, code, kind):
    argv = ["analyze", write(tmp_path, payload)] + (["--phi", phi] if phi else [])
    rc, out, err = run(argv, capsys)
    assert rc == code and out == ""
    e = json.loads(err)
    assert e["error"] == kind and e["exit_code"] == code


def test_analyze_deterministic(tmp_path, capsys):
    p = write(tmp_path, TORUS)
    assert run(["analyze", p], capsys)[1] == run(["analyze", p], capsys)[1]


def sweep_spec(**kw):
    spec = {"template": {"genus": 0, "kind": "laurent", "N": 2, "k": 1, "params": [[0.3, 0], [1, 0]]},
            "parameter": "b2", "start": [0.5, 0.2], "end": [1.5, -0.3], "steps": 10,
            "outputs": ["G", "flat_coords"]}
    spec.update(kw)
    return spec


def test_sweep_laurent_constancy(tmp_path, capsys):
    spec = sweep_spec()
    jsonschema.validate(spec, schema("sweep_spec"))
    code, out, _ = run(["sweep", write(tmp_path, spec), "--jobs", "4"], capsys)
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["index"] for r in recs] == list(range(10))
    vals = []
    for r in recs:
        jsonschema.validate(r, schema("sweep_record"))
        G = complex(*r["G"])
        tN = complex(*r["flat_coords"][-1])
        vals.append(G + tN / 24)
    assert max(abs(v.real - vals[0].real) for v in vals) < 1e-12


def test_sweep_jobs_do_not_change_output(tmp_path, capsys):
    p = write(tmp_path, sweep_spec(outputs=["G", "lambdas", "log_tau_B"]))
    assert run(["sweep", p, "--jobs", "1"], capsys)[1] == run(["sweep", p, "--jobs", "3"], capsys)[1]


def test_sweep_polynomial_g_constant_and_skip(tmp_path, capsys):
    spec = {"template": ANCHOR, "parameter": "a2", "start": [-1, 0], "end": [1, 0], "steps": 5}
    code, out, _ = run(["sweep", write(tmp_path, spec)], capsys)
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and recs[2]["skip"] is True and "reason" in recs[2]
    for r in recs:
        jsonschema.validate(r, schema("sweep_record"))
    re = [r["G"][0] for r in recs if "G" in r]
    assert max(re) - min(re) < 1e-12


@pytest.mark.parametrize("bad", [{"steps": 1}, {"parameter": "zz"}, {"outputs": ["nope"]}])
def test_sweep_spec_errors(tmp_path, capsys, bad):
    code, _, err = run(["sweep", write(tmp_path, sweep_spec(**bad))], capsys)
    assert code == 2 and json.loads(err)["exit_code"] == 2


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "genus7"])
    assert exc.value.code == 2
    assert json.loads(capsys.readouterr().err)["exit_code"] == 2


def test_verify_bad_step(capsys):
    code, _, err = run(["verify", "--fd-step", "1.0"], capsys)
    assert code == 2


def test_verify_genus0_subprocess():
    cmd = [sys.executable, "-m", "hurwitz_frobenius", "verify", "--suite", "genus0", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, text=True, timeout=300)
    b = subprocess.run(cmd, capture_output=True, text=True, timeout=300)
    assert a.returncode == 0
    assert a.stdout == b.stdout
    rep = json.loads(a.stdout)
    jsonschema.validate(rep, schema("report"))
    assert rep["pass"] and rep["seed"] == 7
