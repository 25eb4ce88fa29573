import json
import subprocess
import sys

import numpy as np
import pytest

from hyperstokes.cli import main
from hyperstokes.io import ResultBundle
from hyperstokes.stokes import example2_oracle

from test_io import TRIANGLE


@pytest.fixture
def arr_file(tmp_path):
    def write(doc, name="arr.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return write


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_analyze(capsys, arr_file):
    code, doc = run(capsys, ["analyze", arr_file(TRIANGLE)])
    assert code == 0
    assert [v["indices"] for v in doc["vertices"]] == [[1, 2], [1, 3], [2, 3]]
    assert len(doc["chambers"]) == 7
    assert sum(c["in_dplus"] for c in doc["chambers"]) == 3
    ResultBundle.from_dict(doc).validate()


def test_stokes_matches_closed_form(capsys, arr_file):
    code, doc = run(capsys, ["stokes", arr_file(TRIANGLE)])
    assert code == 0
    c0 = np.array([[complex(*z) for z in row] for row in doc["c0"]])
    assert np.abs(c0 - example2_oracle(2, 1, (0.3, 0.4, 0.5)).c0).max() < 1e-12
    assert doc["matB"][1][2] == pytest.approx(-0.4)


def test_integrate(capsys, arr_file):
    code, doc = run(capsys, ["integrate", arr_file(TRIANGLE), "--kind", "cone_plus",
                             "--target", "1,2", "--lambda", "1.5"])
    assert code == 0 and len(doc["integrals"]) == 3
    code, doc = run(capsys, ["integrate", arr_file(TRIANGLE), "--kind", "chamber",
                             "--target", "1,2", "--component", "2,3", "--lambda", "1+0.5i"])
    assert code == 0
    (item,) = doc["integrals"]
    assert item["component"] == [2, 3] and item["converged"]


@pytest.mark.parametrize("argv", [
    ["integrate", "--kind", "chamber", "--target", "1,2", "--lambda", "-1"],
    ["integrate", "--kind", "cone_plus", "--target", "1,2", "--lambda=-1j"],
    ["integrate", "--kind", "chamber", "--target", "7,8", "--lambda", "1"],
    ["verify", "--checks", "bogus"],
])
def test_invalid_requests(capsys, arr_file, argv):
    code, doc = run(capsys, [argv[0], arr_file(TRIANGLE)] + argv[1:])
    assert code == 2 and doc["error"]["type"] == "invalid-input"


def test_schema_violation(capsys, arr_file):
    code, doc = run(capsys, ["analyze", arr_file(dict(TRIANGLE, weights=[0.3, -1, 0.5]))])
    assert code == 2


def test_unreadable_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, doc = run(capsys, ["analyze", str(bad)])
    assert code == 2
    code, doc = run(capsys, ["analyze", str(tmp_path / "missing.json")])
    assert code == 2


def test_non_generic(capsys, arr_file):
    doc = dict(TRIANGLE, forms=[{"linear": [1, 0], "constant": 0}, {"linear": [0, 1], "constant": 0},
                                {"linear": [1, 1], "constant": 0}])
    code, out = run(capsys, ["analyze", arr_file(doc)])
    assert code == 3
    assert out["error"]["type"] == "non-generic"
    assert {"kind": "concurrent", "indices": [1, 2, 3]}.items() <= out["error"]["violations"][0].items()


def test_verify_pass_and_fail(capsys, arr_file):
    code, doc = run(capsys, ["verify", arr_file(TRIANGLE), "--checks", "stokes_c0", "--lambda", "1"])
    assert code == 0 and doc["checks"][0]["passed"]
    code, doc = run(capsys, ["verify", arr_file(TRIANGLE), "--checks", "ode", "--lambda", "1",
                             "--tol", "1e-15"])
    assert code == 1 and not doc["checks"][0]["passed"]


def test_demo_examples(capsys):
    code, doc = run(capsys, ["demo", "example1", "--n", "4"])
    assert code == 0 and doc["oracle_max_abs_difference"] <= 1e-12
    code, doc = run(capsys, ["demo", "example2", "--a", "5/2", "--b", "1/3"])
    assert code == 0 and doc["oracle_max_abs_difference"] <= 1e-12
    code, doc = run(capsys, ["demo", "example2", "--a", "1", "--b", "2"])
    assert code == 2
    code, doc = run(capsys, ["demo", "example1", "--n", "2", "--weights", "0.1"])
    assert code == 2


def test_demo_is_deterministic():
    cmd = [sys.executable, "-m", "hyperstokes", "--seed", "3", "demo", "example1", "--n", "5"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first


def test_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(TRIANGLE)))
    code, doc = run(capsys, ["analyze"])
    assert code == 0
