import json
import subprocess
import sys

import pytest

from genericnp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hodge(capsys):
    code, out, _ = run(capsys, "hodge", "--d", "4")
    assert code == 0
    assert out.splitlines()[0] == "HP: (0,0),(1,1/4),(2,3/4),(3,3/2)"
    code, out, _ = run(capsys, "hodge", "--d", "3", "--format", "tsv")
    assert out == "0\t0/1\n1\t1/3\n2\t1/1\n"


def test_gnp(capsys):
    code, out, _ = run(capsys, "gnp", "--d", "4", "--p", "19")
    assert code == 0
    assert out.splitlines()[0] == "GNP: (0,0),(1,5/18),(2,7/9),(3,3/2)"


def test_hasse(capsys):
    assert run(capsys, "hasse", "--d", "3", "--p", "11", "--which", "H")[1] == "4*X1\n"
    assert run(capsys, "hasse", "--d", "3", "--p", "11", "--n", "1")[1] == "4*X1*X3^3+6*X2^2*X3^2\n"
    assert run(capsys, "hasse", "--d", "4", "--p", "19")[1] == "6*X2^2\n"


def test_lfunction(capsys):
    code, out, _ = run(capsys, "lfunction", "--d", "3", "--p", "11", "--coeffs", "0,0,0,1")
    doc = json.loads(out)
    assert code == 0
    assert doc["is_generic"] is False and doc["lies_above_gnp"] is True
    assert doc["pi_valuations"][1] is None
    code, out, _ = run(capsys, "lfunction", "--d", "3", "--p", "11", "--m", "2",
                       "--coeffs", "0,1:2,0,1")
    doc = json.loads(out)
    assert doc["m"] == 2 and len(doc["field"]["moduli"]) == 1


def test_np(capsys):
    code, out, _ = run(capsys, "np", "--d", "3", "--p", "11", "--coeffs", "0,1,0,1")
    assert code == 0
    assert out.splitlines()[0] == "NP: (0,0),(1,2/5),(2,1)"
    code, out, _ = run(capsys, "np", "--d", "3", "--p", "11", "--coeffs", "5,3,3,1", "--normalize")
    assert out.splitlines()[0] == "NP: (0,0),(2,1)"


def test_census_outputs(capsys, tmp_path):
    js, svg = tmp_path / "c.json", tmp_path / "c.svg"
    code, out, err = run(capsys, "census", "--d", "3", "--p", "11", "--json", str(js),
                         "--svg", str(svg), "--tsv")
    assert code == 0
    assert "11 polynomials, 10 generic, 1 non-generic" in err
    assert out.startswith("coefficients\t")
    first = js.read_bytes()
    assert json.loads(first)["summary"]["generic"] == 10
    assert svg.exists()
    run(capsys, "census", "--d", "3", "--p", "11", "--json", str(js))
    assert js.read_bytes() == first


def test_census_config_cap(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"census_cap": 10}))
    with pytest.raises(SystemExit) as exc:
        main(["census", "--d", "4", "--p", "13", "--config", str(cfg)])
    assert exc.value.code == 2


def test_congruence(capsys):
    code, out, _ = run(capsys, "congruence", "--d", "3", "--p", "11", "--coeffs", "0,3,0,1")
    assert code == 0 and json.loads(out)[0]["pass"] is True
    code, out, _ = run(capsys, "congruence", "--d", "4", "--p", "13", "--random", "3", "--seed", "1")
    assert code == 0 and len(json.loads(out)) == 3


@pytest.mark.parametrize("argv", [
    ["gnp", "--d", "4", "--p", "7"],
    ["gnp", "--d", "3", "--p", "12"],
    ["hasse", "--d", "3", "--p", "11", "--n", "5"],
    ["np", "--d", "4", "--p", "11", "--coeffs", "0,1,0,1"],
    ["congruence", "--d", "4", "--p", "5", "--coeffs", "0,1,0,0,1"],
    ["congruence", "--d", "3", "--p", "11"],
    ["census", "--d", "3"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "genericnp", "hasse", "--d", "3", "--p", "11"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "4*X1\n"
