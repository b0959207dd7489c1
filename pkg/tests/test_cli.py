from __future__ import annotations

import io
import json

import pytest

from app.cli import EXIT_ERROR, EXIT_OK, EXIT_REFUTED, EXIT_USAGE, gate_params, main
from app.core.errors import UsageError
from app.models import GateReport
from app.services.gates import run_gate
from tests.conftest import write_cusp_file


def run(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_eval_human_output():
    code, out, _ = run("eval", "h", "0.5")
    assert code == EXIT_OK
    assert out.startswith("value = [")
    assert "citation:" in out


def test_eval_json_output():
    code, out, _ = run("--json", "eval", "ellipse_axes", "1", "0.5")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["function"] == "ellipse_axes"
    assert set(payload["values"]) == {"a", "b"}
    lo, hi = payload["values"]["a"]
    assert 0 < lo <= hi


def test_digits_flag_controls_formatting():
    _, short, _ = run("eval", "h", "0.5", "--digits", "4")
    _, long, _ = run("eval", "h", "0.5", "--digits", "15")
    assert len(short) < len(long)


def test_unknown_function_is_a_numeric_error():
    code, _, err = run("eval", "nope")
    assert code == EXIT_ERROR
    assert err.startswith("error:")


def test_gate_certified_and_refuted():
    code, out, _ = run("gate", "bilip", "--delta", "0.5", "--ell", "0.01")
    assert code == EXIT_OK
    assert out.startswith("gate bilip: Certified")

    code, out, _ = run("gate", "bilip", "--delta=0.5", "--ell=0.02", "--json")
    assert code == EXIT_REFUTED
    report = json.loads(out)
    assert report["status"] == "Refuted"
    assert report["quantities"] == {}


def test_gate_json_parses_as_report():
    code, out, _ = run("gate", "bilip", "--delta", "0.5", "--ell", "0.01", "--json")
    assert code == EXIT_OK
    report = GateReport.model_validate_json(out)
    assert report.certified
    assert report == run_gate("bilip", {"delta": "0.5", "ell": "0.01"})


def test_gate_missing_parameter_is_usage_error():
    code, _, err = run("gate", "bilip", "--ell", "0.01")
    assert code == EXIT_USAGE
    assert "--delta" in err


def test_gate_domain_error():
    code, _, err = run("gate", "bilip", "--delta", "1.0", "--ell", "0.01")
    assert code == EXIT_ERROR
    assert err.startswith("error:")


def test_gate_params_normalization():
    assert gate_params(["--Z-min", "0.6", "--ell=0.1"]) == {"Z_min": "0.6", "ell": "0.1"}
    with pytest.raises(UsageError):
        gate_params(["0.6"])
    with pytest.raises(UsageError):
        gate_params(["--delta"])


def test_cosmetic_from_cusp_file(square_cusp_file):
    code, out, _ = run("cosmetic", str(square_cusp_file), "--knot")
    assert code == EXIT_OK
    assert out.startswith("S1 cutoff (normalized):")
    assert "knot pairs" in out

    code, out, _ = run("--json", "cosmetic", str(square_cusp_file))
    payload = json.loads(out)
    assert "knot_pairs" not in payload
    assert len(payload["s1"]) > 0


def test_cosmetic_needs_sys(tmp_path):
    path = write_cusp_file(tmp_path, {"cusps": [{"meridian": [1, 0], "longitude": [0, 1]}]})
    code, _, err = run("cosmetic", str(path), "--vol", "2", "--V", "1")
    assert code == EXIT_USAGE
    assert "--sys is required" in err


def test_cosmetic_bad_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{", encoding="utf-8")
    code, _, err = run("cosmetic", str(path))
    assert code == EXIT_USAGE
    assert str(path) in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["launch"],
        ["eval"],
        ["verify"],
        ["eval", "h", "0.5", "--digits", "40"],
        ["eval", "h", "0.5", "--bogus"],
    ],
)
def test_bad_usage(argv):
    code, _, err = run(*argv)
    assert code == EXIT_USAGE
    assert err.startswith("error:")


def test_verify_task(ledger_path):
    code, out, _ = run("verify", "--task", "delta_cut_bracket", "--json")
    assert code == EXIT_OK
    (entry,) = json.loads(out)["tasks"]
    assert entry["status"] == "Verified"
    assert ledger_path.exists()


def test_verify_tightened_fails(ledger_path):
    code, out, _ = run("verify", "--task", "delta_cut_bracket", "--tighten")
    assert code != EXIT_OK
    assert "delta_cut_bracket" in out
