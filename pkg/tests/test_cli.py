import io
import json
import subprocess
import sys
from fractions import Fraction as F

import jsonschema
import pytest

from affsurf.catalog import _default_text, make
from affsurf.cli import REPORT_SCHEMA, VERIFY_SCHEMA, main
from affsurf.connfile import parse_text, serialize
from affsurf.gauge import GaugeLinear, apply_linear, apply_shear_A


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(text, name="c.conn"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def test_tensors_muv(write):
    code, out = run("tensors", write("kind: A\nGamma 1 1 1 = 1\nGamma 1 2 1 = 2\nGamma 2 2 1 = 1\n"))
    assert code == 0
    assert "rho = dx2⊗dx2" in out
    assert "T = (dx1∧dx2)⊗(∂x1)" in out


def test_tensors_zero(write):
    code, out = run("tensors", write("kind: A\n"))
    assert code == 0
    assert "T = 0" in out and "rho = 0" in out and "nabla rho = 0" in out


def test_tensors_type_b_tilde(write):
    code, out = run("catalog", "thm5", "1", "--params", "xi=2")
    code, out = run("tensors", write(out))
    assert code == 0
    assert "rho~ = 2 dx1⊗dx1 + dx1⊗dx2 + dx2⊗dx1" in out


def test_tensors_json_schema(write):
    _, text = run("catalog", "thm5", "9", "--params", "epsilon=1")
    code, out = run("tensors", "--json", write(text))
    data = json.loads(out)
    jsonschema.validate(data, REPORT_SCHEMA)
    assert data["tensors"]["tilde"]["T"] == ["alpha", "gamma"]
    _, text = run("catalog", "example1")
    code, out = run("tensors", "--json", write(text))
    data = json.loads(out)
    jsonschema.validate(data, REPORT_SCHEMA)
    assert len(data["tensors"]["points"]) == 10


def test_classify_thm2(write):
    code, out = run("classify", write("kind: A\nGamma 1 1 1 = 1\nGamma 1 2 1 = 4\nGamma 2 2 1 = 1\n"))
    assert code == 0
    assert out.splitlines()[0] == "Thm2 family 2, u = 2, v = +1"


def test_classify_gauged_thm4(write):
    conn = apply_linear(make("thm4-2", {"alpha": 3}), GaugeLinear(((1, 2), (-1, 1))))
    code, out = run("classify", "--witness", write(serialize(conn)))
    assert code == 0
    assert out.startswith("Thm4 family 2, alpha = 3")
    assert "witness:" in out
    code, out = run("classify", "--json", write(serialize(conn)))
    data = json.loads(out)
    jsonschema.validate(data, REPORT_SCHEMA)
    assert data["classification"]["params"] == {"alpha": "3"}


@pytest.mark.parametrize("text,code", [
    ("kind: A\nGamma 1 1 1 = 1\nGamma 2 2 1 = 1\n", 3),
    ("kind: A\nGamma 1 2 1 = 1\nGamma 2 2 2 = 1\nGamma 1 1 2 = 1\n", 4),
    ("Gamma 1 2 1 = x1\n", 5),
    ("Gamma 1 2 1 = (\n", 2),
])
def test_classify_exit_codes(write, text, code, capsys):
    assert run("classify", write(text))[0] == code
    if code == 3:
        assert "thm1-5" in capsys.readouterr().err


def test_gauge_identity_and_flip(write):
    src = "kind: A\nbackend: exact\nGamma 1 1 1 = 1\nGamma 1 2 1 = 2\nGamma 2 2 1 = 1\n"
    code, out = run("gauge", write(src), "--linear", "1,0,0,1")
    assert out == src
    code, out = run("gauge", write(src), "--flip")
    assert "Gamma 1 2 1 = -2" in out


def test_gauge_shear_matches_direct(write):
    conn = make("thm4-6", {"omega": 2, "epsilon": -1, "eta": 1})
    code, out = run("gauge", write(serialize(conn)), "--shear", "2,0")
    assert parse_text(out) == apply_shear_A(conn, 2, 0)


def test_gauge_singular(write):
    code, _ = run("gauge", write("kind: A\n"), "--linear", "1,2,2,4")
    assert code != 0


def test_catalog_command():
    code, out = run("catalog", "thm4", "6", "--params", "omega=1/2,epsilon=-1,eta=3")
    assert code == 0
    conn = parse_text(out)
    assert conn == make("thm4-6", {"omega": F(1, 2), "epsilon": -1, "eta": 3})
    assert run("catalog", "thm4", "5", "--params", "beta=2")[0] != 0


def test_killing_command(write):
    _, text = run("catalog", "example1")
    path = write(text)
    assert "is an affine Killing field" in run("killing", path, "--field", "0,x2")[1]
    assert "is not an affine Killing field" in run("killing", path, "--field", "1,0")[1]
    _, text = run("catalog", "thm5", "8", "--params", "gamma=1,alpha=2,epsilon=1")
    out = run("killing", write(text), "--field", "x1,x2")[1]
    assert "is an affine Killing field (exact)" in out


def test_verify_paper_default():
    code, out = run("verify-paper")
    assert "17/17 family tables verified" in out
    # the half-tanh example entry fails, so the overall status is nonzero
    assert code == 1
    assert "FAIL  example1" in out


def test_verify_paper_json():
    code, out = run("verify-paper", "--json")
    data = json.loads(out)
    jsonschema.validate(data, VERIFY_SCHEMA)
    assert {d["key"] for d in data if d["status"] == "fail"} == {"example1"}


def test_verify_paper_corrupted_golden(write):
    text = _default_text().replace("expect nablaT = 0, -gamma, 0, 0", "expect nablaT = 0, gamma, 0, 0", 1)
    code, out = run("verify-paper", "--golden", write(text, "golden.txt"))
    assert code == 1
    assert "FAIL  thm4-1" in out


def test_module_entry_point(tmp_path):
    p = tmp_path / "m.conn"
    p.write_text("kind: A\nGamma 1 1 1 = 1\nGamma 1 2 1 = 2\n")
    res = subprocess.run([sys.executable, "-m", "affsurf", "classify", str(p)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("Thm2 family 1")
