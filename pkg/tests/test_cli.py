import io
import json
import subprocess

from crjet.cli import run

from conftest import data


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip().startswith("{") else text)


def test_nondegen():
    code, rep = call("nondegen", "--order", "8", data("cubic.hyp"))
    assert code == 0 and rep["k0"] == 2 and rep["witness"] == [[2]]
    code, rep = call("nondegen", "--order", "8", "--base-point", "1, i", data("cubic.hyp"))
    assert code == 0 and rep["k0"] == 1


def test_nondegen_degenerate_exit_code(tmp_path):
    flat = tmp_path / "flat.hyp"
    flat.write_text("Im w = 0\n")
    code, rep = call("nondegen", "--order", "5", str(flat))
    assert code == 2 and rep["k0"] == "degenerate-to-order-4"


def test_normal_form():
    code, rep = call("normal-form", data("cubic.hyp"))
    assert code == 0 and rep["exact"] and all(rep["checks"].values())


def test_verify_exit_codes():
    code, rep = call("verify", "--map", "(2z, 8w)", "--source", data("m11.hyp"), "--target", data("m21.hyp"),
                     "--order", "8")
    assert code == 0 and rep["verified"] and rep["system"]["zero"]
    code, rep = call("verify", "--map", "(i z, w)", "--order", "8", data("cubic.hyp"))
    assert code == 1 and not rep["verified"]


def test_lie_dim_and_sweep():
    code, rep = call("lie-dim", "--order", "8", data("sphere.hyp"))
    assert code == 0 and rep["dim_hol0"] == 5
    code, rep = call("lie-dim", "--order", "4", "--mode", "symbolic", data("sphere.hyp"))
    assert rep["dim_hol0"] == 5
    code, rep = call("lie-dim-sweep", "--points", "0,0; 1,i", data("cubic.hyp"))
    assert code == 0 and [r["dim_hol0"] for r in rep["reports"]] == [1, 0]
    code, rep = call("lie-dim-sweep", "--points", "1,0", data("cubic.hyp"))
    assert code == 2 and "error" in rep["reports"][0]


def test_formal_check():
    code, rep = call("formal-check", "--map", "(2z, 8w)", "--order", "8", data("cubic.hyp"))
    assert code == 0 and rep["accepted"]
    code, rep = call("formal-check", "--map", "(2z + z^5, 8w)", "--order", "8", data("cubic.hyp"))
    assert code == 1 and not rep["accepted"] and "certificate" in rep


def test_usage_errors():
    assert call("bogus")[0] == 64
    assert call()[0] == 64
    assert call("verify", data("cubic.hyp"))[0] == 64
    assert call("nondegen", "no_such_file.hyp")[0] == 64
    assert call("reconstruct", "--system", "{not json", "--jet", "{}")[0] == 64


def test_precondition_errors():
    code, rep = call("nondegen", "--base-point", "1, 0", data("cubic.hyp"))
    assert code == 2 and rep["error"]["type"] == "HypersurfaceError"
    code, rep = call("lie-dim", "--order", "5", data("cubic.hyp"))
    assert code == 2 and "2 k0 + 2" in rep["error"]["message"]


def test_param_equations_deterministic_and_round_trip(tmp_path):
    args = ["param-equations", "--order", "4", data("sphere.hyp")]
    a, b = io.StringIO(), io.StringIO()
    run(args, a)
    run(args, b)
    assert a.getvalue() == b.getvalue()
    system = tmp_path / "sys.json"
    system.write_text(a.getvalue())
    jet = tmp_path / "jet.json"
    code, rep = call("verify", "--order", "4", "--map", "(z + z w + z w^2 + z w^3, w + w^2 + w^3 + w^4)",
                     data("sphere.hyp"))
    assert code == 0
    jet.write_text(json.dumps(rep["jet"]))
    code, rec = call("reconstruct", "--system", str(system), "--jet", str(jet))
    assert code == 0
    code2, direct = call("reconstruct", "--order", "4", "--jet", str(jet), data("sphere.hyp"))
    assert rec["map"]["text"] == direct["map"]["text"]
    assert rec["map"]["text"][1] == "(1)*w + (1)*w^2 + (1)*w^3 + (1)*w^4"


def test_text_format_and_out(tmp_path):
    out = tmp_path / "r.txt"
    code, text = call("nondegen", "--format", "text", "--out", str(out), data("sphere.hyp"))
    assert code == 0 and text == ""
    assert "k0: 1" in out.read_text()


def test_console_script():
    proc = subprocess.run(["crjet", "lie-dim", "--order", "6", data("sphere.hyp")], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["dim_hol0"] == 5
    proc = subprocess.run(["crjet", "nope"], capture_output=True, text=True)
    assert proc.returncode == 64
