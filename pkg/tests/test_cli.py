import json

import pytest

from siegeleis.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classical_constant_term(capsys):
    code, out, _ = run(capsys, "classical", "--genus", "2", "--weight", "4", "--trace-bound", "3")
    assert code == 0
    data = json.loads(out)
    assert data["entries"]["2:0,0,0"] == "-1/60480"
    assert data["params"]["kind"] == "classical"


def test_output_is_deterministic(capsys, tmp_path):
    args = ["stabilize", "--genus", "2", "--weight", "5", "--prime", "2", "--char", "7:3^1", "--trace-bound", "2"]
    run(capsys, *args, "--out", str(tmp_path / "a.json"))
    run(capsys, *args, "--out", str(tmp_path / "b.json"), "--jobs", "2")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


@pytest.mark.parametrize("argv", [
    ["verify", "genus1", "--weight", "4", "--prime", "5", "--trace-bound", "50"],
    ["verify", "--suite", "operator", "--genus", "2", "--weight", "4", "--prime", "3"],
    ["verify", "--suite", "siegel-series", "--seed", "3"],
    ["verify", "--suite", "kummer"],
    ["verify", "--suite", "lambda-specialize", "--genus", "1"],
    ["verify", "--suite", "polynomials"],
])
def test_verify_suites_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0, out
    assert json.loads(out)["passed"] is True


def test_siegel_series_verb(capsys):
    code, out, _ = run(capsys, "siegel-series", "--index", "3:2,0,0,2,0,2", "--prime", "2")
    assert code == 0
    assert json.loads(out)["F"] == [1, 0, -16]


def test_lambda_verb(capsys):
    code, out, _ = run(capsys, "lambda", "--genus", "1", "--weight", "6", "--prime", "5", "--trace-bound", "1",
                       "--xprec", "3", "--pprec", "4")
    assert code == 0
    data = json.loads(out)
    assert [e["T"] for e in data["entries"]] == ["1:0", "1:2"]
    assert data["entries"][1]["coeffs mod (p^M, X^N)"] == ["1", "0", "0"]
    assert all(e["pole_order"] == 0 for e in data["entries"])


@pytest.mark.parametrize("argv", [
    ["classical", "--genus", "2", "--weight", "3", "--trace-bound", "1"],
    ["stabilize", "--genus", "1", "--weight", "4", "--prime", "4", "--trace-bound", "1"],
    ["classical", "--genus", "1", "--weight", "3", "--char", "7:2^1", "--trace-bound", "1"],
    ["classical", "--genus", "1", "--trace-bound", "1"],
    ["siegel-series", "--index", "2:1,0,2", "--prime", "3"],
])
def test_invalid_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_verification_failure_exits_1(capsys, monkeypatch):
    from siegeleis import verify

    def broken(*a, **k):
        rep = verify.SuiteReport("polynomials")
        rep.record("always fails", False, reason="injected")
        return rep

    monkeypatch.setattr(verify, "polynomial_suite", broken)
    code, out, _ = run(capsys, "verify", "--suite", "polynomials")
    assert code == 1
    assert json.loads(out)["checks"][0]["counterexample"] == {"reason": "injected"}
