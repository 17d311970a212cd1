import io
import json

import pytest

from affvir.cli import CAPS_ENV, EXIT_FAIL, EXIT_OVERFLOW, EXIT_PASS, EXIT_SCHEMA, run

OMEGA = ["--flavor", "omega", "--lambda", "2", "--alpha", "3", "--beta", "1/2", "--gamma", "5"]


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, json.loads(out.getvalue()), err.getvalue(), out.getvalue()


def test_check_axioms_example():
    code, doc, err, _ = call("check-axioms", *OMEGA, "--window", "3")
    assert code == EXIT_PASS and doc["status"] == "PASS"
    (check,) = doc["checks"]
    assert check["violations"] == 0 and check["anchor"] == "rank-one-module-representation"
    assert "[PASS] module-axioms" in err


def test_verma_reducible_example():
    code, doc, _, _ = call("verma-reducible", "--eta", "1", "--epsilon", "0", "--theta", "7")
    assert code == EXIT_PASS
    assert doc["result"]["verdict"] == "reducible"
    assert (doc["result"]["condition"], doc["result"]["m"], doc["result"]["n"]) == ("i", 0, 0)


def test_omega_tensor_example():
    code, doc, _, _ = call("omega-test", "--r", "3", "--l", "4", "--m", "-5", "--mode", "tensor")
    assert code == EXIT_PASS
    assert doc["checks"][0]["anchor"] == "omega-operator-nonzero-on-tensor"


def test_omega_tensor_overflow_status():
    code, doc, _, _ = call("omega-test", "--r", "3", "--l", "4", "--m", "-5", "--mode", "tensor", "--depth", "3")
    assert code == EXIT_OVERFLOW and doc["status"] == "TRUNCATION_OVERFLOW"


def test_keep_theta_gamma_fails():
    code, doc, _, _ = call("check-axioms", "--target", "b-module", "--flavor", "theta", "--beta", "1/3",
                           "--gamma", "2", "--keep-theta-gamma", "--window", "2", "--degree", "2")
    assert code == EXIT_FAIL and doc["status"] == "FAIL"


@pytest.mark.parametrize("argv, path", [
    (["check-axioms", "--lambda", "1/0"], "params.lambda"),
    (["check-axioms", "--window", "0"], "caps.window"),
    (["check-axioms", "--alpha", "0"], "params"),
    (["tensor-probe", "--flavor", "theta", "--beta", "1"], "params.beta"),
    (["bracket", "--x", "q1", "--y", "e0"], "x"),
])
def test_schema_errors_report_paths(argv, path):
    code, doc, _, _ = call(*argv)
    assert code == EXIT_SCHEMA and doc["status"] == "SCHEMA_ERROR"
    assert doc["errors"][0]["path"] == path


def test_reports_are_deterministic():
    argv = ("tensor-probe", "--flavor", "delta", "--beta", "1/3", "--gamma", "2", "--count", "3", "--seed", "9")
    first, second = call(*argv)[3], call(*argv)[3]
    assert first == second


def test_config_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"params": {"eta": "1", "epsilon": "0", "theta": "7"}, "caps": {"bound": 4}}))
    monkeypatch.setenv(CAPS_ENV, json.dumps({"bound": 9}))
    _, doc, _, _ = call("verma-reducible", "--config", str(cfg))
    assert doc["result"]["search_bound"] == 4 and doc["result"]["verdict"] == "reducible"
    _, doc, _, _ = call("verma-reducible", "--config", str(cfg), "--bound", "6", "--epsilon", "1/2")
    assert doc["result"]["search_bound"] == 6
    assert all(w["condition"] != "i" for w in doc["result"]["witnesses"])
    _, doc, _, _ = call("verma-reducible")
    assert doc["result"]["search_bound"] == 9


def test_env_caps_only_affect_caps(monkeypatch):
    monkeypatch.setenv(CAPS_ENV, json.dumps({"eta": "5", "bound": 3}))
    _, doc, _, _ = call("verma-reducible")
    assert doc["result"]["search_bound"] == 3
    monkeypatch.setenv(CAPS_ENV, "{not json")
    code, doc, _, _ = call("verma-reducible")
    assert code == EXIT_SCHEMA and doc["errors"][0]["path"] == CAPS_ENV


def test_certificate_round_trip_through_files(tmp_path):
    out = tmp_path / "cert.json"
    code, _, _, _ = call("tensor-probe", "--flavor", "theta", "--beta", "1/3",
                         "--element", '[{"monomial": [], "poly": [[1,0,"1"],[0,1,"1"]]}]', "--out", str(out))
    assert code == EXIT_PASS and out.exists()
    code, doc, _, _ = call("verify-certificate", str(out))
    assert code == EXIT_PASS and doc["checks"][0]["passed"]
    data = json.loads(out.read_text())
    data["steps"][0]["terms"][0]["coeff"] = "99"
    out.write_text(json.dumps(data))
    code, _, _, _ = call("verify-certificate", str(out))
    assert code == EXIT_FAIL


def test_classify_iso_from_files(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    hw = {"eta": "1", "epsilon": "1", "theta": "1"}
    a.write_text(json.dumps({"module": {"flavor": "omega", "lambda": "1", "alpha": "2", "beta": "3", "gamma": "4"},
                             "highest_weight": hw}))
    b.write_text(json.dumps({"flavor": "omega", "lambda": "1", "alpha": "2", "beta": "-4", "gamma": "4", **hw}))
    code, doc, _, _ = call("classify-iso", str(a), str(b))
    assert code == EXIT_PASS and doc["result"]["isomorphic"] is True


@pytest.mark.parametrize("argv", [
    ["bracket", "--x", "e1", "--y", "f-1"],
    ["act", "--target", "module", "--x", "e1", *OMEGA, "--element", '[[1,0,"1"]]'],
    ["act", "--target", "verma", "--x", "e0", "--element", '[[[["f",0,1]], "1"]]'],
    ["act", "--target", "tensor", "--x", "h0"],
    ["singular-vectors", "--epsilon", "0", "--depth", "1"],
    ["induced-verify", "--flavor", "theta", "--beta", "1/3", "--depth", "1", "--degree", "1", "--d0", "1"],
    ["induced-reducible", "--flavor", "theta", "--beta", "1"],
    ["check-axioms", "--target", "lie", "--window", "1"],
])
def test_every_subcommand_runs(argv):
    code, doc, _, _ = call(*argv)
    assert code == EXIT_PASS, doc
    assert all(c["anchor"] for c in doc.get("checks", []))


def test_bracket_output():
    _, doc, _, _ = call("bracket", "--x", "d2", "--y", "d-2")
    assert doc["result"]["text"] == "(-4)*d0 + (1/2)*C"
