from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from hexstable.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stream=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run("--json", *argv)
    return code, json.loads(text)


def test_verify_table2_g24():
    code, rep = run_json("verify", "--algebra", "g24", "--table2")
    assert code == 0
    assert rep["flags"]["mean_convex"] and rep["flags"]["half_flat"]
    assert rep["certificates"]["lambda"] == "-4"
    assert rep["certificates"]["nu0"] == "1/2"
    assert all(isinstance(x, str) for row in rep["certificates"]["beta"] for x in row)


def test_verify_tamed_g31():
    code, rep = run_json("verify", "--algebra", "g31", "--tamed")
    assert code == 0
    assert rep["taming"]["tames"] and rep["taming"]["d_Omega11_nonzero"]


def test_verify_g34_has_no_example():
    code, _ = run("verify", "--algebra", "g34", "--table2")
    assert code == 3


def test_unknown_algebra_is_input_error():
    assert run("verify", "--algebra", "g99", "--table2")[0] == 2


def test_parse_error_exit_code():
    assert run("verify", "--algebra", "g24", "--rho", "e12+")[0] == 2


def test_non_definite_is_precondition_error():
    assert run("verify", "--algebra", "g24", "--rho", "e123+e456")[0] == 3


def test_expectation_failure_exit_code():
    code, rep = run_json("verify", "--algebra", "g3", "--table2", "--expect", "half_flat")
    assert code == 1 and rep["expectations"]["half_flat"] is False


def test_float_mode():
    code, rep = run_json("verify", "--algebra", "g24", "--table2", "--mode", "float")
    assert code == 0
    assert isinstance(rep["certificates"]["lambda"], float)


def test_global_flags_after_subcommand():
    a = run("--json", "--seed", "3", "search", "-a", "g28", "-n", "30")
    b = run("search", "-a", "g28", "-n", "30", "--json", "--seed", "3")
    assert a == b and a[0] == 0


def test_search_is_deterministic_and_finds_g28_witnesses():
    a = run("--json", "search", "-a", "g28", "-n", "80", "--seed", "11")
    b = run("--json", "search", "-a", "g28", "-n", "80", "--seed", "11")
    assert a[1] == b[1]
    rep = json.loads(a[1])
    assert rep["witnesses"] and rep["label"] == "statistical evidence only"


def test_search_g1_has_no_mean_convex_witness():
    code, rep = run_json("search", "-a", "g1", "-n", "100")
    assert code == 0 and not rep["witnesses"]
    assert sum(rep["certificates"].values()) == 100


def test_search_g3_tamed_all_obstructed():
    code, rep = run_json("search", "-a", "g3", "--target", "tamed", "-n", "100")
    assert not rep["witnesses"]
    assert rep["certificates"].get("EFV obstructed", 0) == rep["definite_samples"] > 0


def test_search_records():
    _, rep = run_json("search", "-a", "g2", "-n", "5", "--records")
    assert len(rep["records"]) == 5 and all("certificate" in r for r in rep["records"])


def test_suite_betti():
    code, rep = run_json("suite", "betti")
    assert code == 0 and rep["summary"] == "36/36"


def test_suite_failure_exit_code():
    code, rep = run_json("suite", "table3")
    assert code == 1
    assert [c["name"] for c in rep["checks"] if not c["passed"]] == ["A5,17(0,0,-1)+R"]


def test_flow_csv(tmp_path):
    out = tmp_path / "t.csv"
    code, rep = run_json("flow", "--algebra", "g24", "--t-end", "0.05", "--dt", "1e-2", "--out", str(out))
    assert code == 0 and rep["steps"] == 5
    assert out.read_text().splitlines()[0] == "t,nu0,lambda,vol_ratio,res_drho,res_domega2,beta_min_eig"


def test_flow_from_file(tmp_path):
    doc = tmp_path / "in.txt"
    doc.write_text("algebra h = (0,0,0,e12,e13,e23)\nform omega : 2 = -e16+e25-e34\nform rho : 3 = -e123+e145+e246+e356\n")
    code, rep = run_json("flow", "--file", str(doc), "--init", "file", "--t-end", "0.02", "--dt", "1e-2")
    assert code == 0 and rep["final"]["nu0"] > 0.5


def test_verify_from_file(tmp_path):
    doc = tmp_path / "in.txt"
    doc.write_text("algebra h = (0,0,0,e12,e13,e23)\nform w : 2 = -e16+e25-e34\nform r : 3 = -e123+e145+e246+e356\n")
    code, rep = run_json("verify", "--file", str(doc), "--omega", "w", "--rho", "r", "--expect", "double")
    assert code == 0 and rep["flags"]["double"]


def test_bad_file_is_parse_error(tmp_path):
    doc = tmp_path / "bad.txt"
    doc.write_text("algebra h = (0,0,e12)\n")
    assert run("betti", "--file", str(doc))[0] == 2


def test_parameters():
    assert run("verify", "-a", "A5,7(-1,b,-b)+R", "--tamed")[0] == 0
    assert run("verify", "-a", "A5,7(-1,b,-b)+R", "--rho", "e123+e456")[0] == 2
    assert run("betti", "-a", "A5,7(-1,b,-b)+R", "--param", "b=1")[0] == 3
    code, rep = run_json("betti", "-a", "A5,7(-1,b,-b)+R", "--param", "b=-1/2")
    assert code == 0


def test_catalog_commands():
    code, rep = run_json("catalog", "list", "--family", "nilpotent")
    assert code == 0 and len(rep["entries"]) == 34
    code, rep = run_json("catalog", "show", "g24")
    assert rep["structure"] == "(0,0,0,e12,e13,e23)" and rep["b1"] == 3
    assert run("catalog", "show", "nope")[0] == 2


def test_betti_command():
    code, rep = run_json("betti", "--algebra", "g27")
    assert code == 0 and rep["b2"] == 7


def test_bad_arguments_exit_2():
    assert run("frobnicate")[0] == 2
    assert run("suite", "nonsense")[0] == 2


def test_text_output():
    code, text = run("verify", "--algebra", "g24", "--table2")
    assert code == 0 and "PASS" in text and "mean_convex" in text


@pytest.mark.parametrize("argv", [["-m", "hexstable", "betti", "-a", "g25"]])
def test_module_entry_point(argv):
    res = subprocess.run([sys.executable, *argv], capture_output=True, text=True)
    assert res.returncode == 0 and "b2 = 6" in res.stdout
