"""Test the command-line front end."""

import json
from unittest.mock import patch

from twisted_zeta.cli import build_parser, main
from twisted_zeta.const import EXIT_FAILURE, EXIT_OK, EXIT_USAGE
from twisted_zeta.elimination import PlanError, VerificationFailure
from twisted_zeta.rational_function import PoleError

ANCHOR = ["decompose", "--D", "1", "--s", "3", "--n", "1"]
ELIMINATE = ["eliminate", "--m", "1", "--s", "13", "--exclude", "5", "--target", "3"]


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parser_has_every_command():
    """Test the six subcommands are registered."""
    parser = build_parser()
    for command in ("decompose", "verify", "evaluate", "asymptotics", "eliminate"):
        assert parser.parse_args([command]).command == command
    assert parser.parse_args(["certify", "--n", "2,4"]).n == "2,4"


def test_decompose(capsys):
    """Test the anchor decomposition is printed as JSON."""
    code, out, err = _run(capsys, ANCHOR)
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["coeffs"][2][0] == ["-2", "1"]
    assert "max coefficient size 4 bits" in err


def test_decompose_with_checks(capsys):
    """Test --check runs the exact predicates, reflection included."""
    code, out, _ = _run(capsys, [*ANCHOR, "--check"])
    assert code == EXIT_OK
    checks = json.loads(out)["checks"]
    assert checks["reflection"] is True
    assert checks["lemma4"] is True
    assert all(checks.values())
    assert "form_integrality" not in checks


def test_decompose_is_deterministic(capsys):
    """Test two runs print identical bytes."""
    _, first, _ = _run(capsys, [*ANCHOR, "--check"])
    _, second, _ = _run(capsys, [*ANCHOR, "--check"])
    assert first == second


def test_missing_value_is_usage_error(capsys):
    """Test a missing --s exits with the usage code."""
    code, out, err = _run(capsys, ["decompose", "--D", "1", "--n", "1"])
    assert code == EXIT_USAGE
    assert out == ""
    assert "usage error: s: required" in err


def test_argparse_error_is_usage_error(capsys):
    """Test malformed arguments exit with the usage code."""
    code, _, _ = _run(capsys, ["decompose", "--D", "one"])
    assert code == EXIT_USAGE


def test_help_exits_ok(capsys):
    """Test --help is not an error."""
    code, out, _ = _run(capsys, ["--help"])
    assert code == EXIT_OK
    assert "twisted-zeta" in out


def test_verify(capsys):
    """Test a capped lemma2 grid passes."""
    code, out, _ = _run(capsys, ["verify", "--only", "lemma2", "--max", "2"])
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["total"] == 4
    assert payload["failed"] == 0
    assert payload["summary"] == {"lemma2": {"passed": 4, "failed": 0}}


def test_verify_mutation_fails(capsys):
    """Test the hidden --mutate switch turns the exact checks red."""
    argv = ["verify", "--only", "symmetry", "--max", "1", "--mutate"]
    code, out, _ = _run(capsys, argv)
    assert code == EXIT_FAILURE
    payload = json.loads(out)
    assert payload["failed"] == payload["total"] == 3


def test_evaluate(capsys):
    """Test the dual evaluation of the anchor form."""
    argv = ["evaluate", "--D", "1", "--s", "3", "--n", "1", "--z", "1/2"]
    code, out, _ = _run(capsys, argv)
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["form"]["a0"] == ["-23", "1"]
    assert payload["form"]["value"]["value"].startswith("0.02907693587")
    assert payload["dual"]["consistent"] is True
    assert payload["lerch"]["z"] == ["1", "2"]


def test_evaluate_hat_form(capsys):
    """Test the divisor-aggregated form for D=2."""
    argv = ["evaluate", "--D", "2", "--s", "7", "--n", "1", "--d", "1"]
    code, out, _ = _run(capsys, argv)
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["hat"]["consistent"] is True
    assert "form" not in payload


def test_asymptotics_profile(capsys):
    """Test the profile for D=2, s=25 meets the decay criterion."""
    code, out, _ = _run(capsys, ["asymptotics", "--D", "2", "--s", "25"])
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["profile"]["criterion_met"] is True
    assert payload["x0_window"]["inside"] is True


def test_asymptotics_csv(capsys):
    """Test the trend table as CSV."""
    argv = ["asymptotics", "--D", "1", "--s", "3", "--n", "5,10", "--format", "csv"]
    code, out, _ = _run(capsys, argv)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "n,value,reference,gap"
    assert [line.split(",")[0] for line in lines[1:]] == ["5", "10"]


def test_eliminate(capsys):
    """Test one integer form with zeta(5) removed."""
    code, out, _ = _run(capsys, [*ELIMINATE, "--n", "1"])
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["plan"]["det"] == "5208"
    assert list(payload["form"]["A"]) == ["3", "7", "9", "11", "13"]


def test_eliminate_failure_exit_code(capsys):
    """Test verification failures exit with the failure code."""
    with patch(
        "twisted_zeta.cli.combined_form",
        side_effect=VerificationFailure("zeta(5) survives"),
    ):
        code, out, err = _run(capsys, [*ELIMINATE, "--n", "1"])
    assert code == EXIT_FAILURE
    assert out == ""
    assert "error: zeta(5) survives" in err


def test_out_file(capsys, tmp_path):
    """Test --out writes the report instead of printing it."""
    target = tmp_path / "reports" / "anchor.json"
    code, out, _ = _run(capsys, [*ANCHOR, "--out", str(target)])
    assert code == EXIT_OK
    assert out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["n"] == 1


def test_pole_error_exit_code(capsys):
    """Test a pole hit during a computation is a failure, not a usage error."""
    with patch(
        "twisted_zeta.cli.partial_fraction",
        side_effect=PoleError("t = 0 is a pole"),
    ):
        code, out, err = _run(capsys, ANCHOR)
    assert code == EXIT_FAILURE
    assert out == ""
    assert "error: t = 0 is a pole" in err
    assert "usage error" not in err


def test_plan_error_is_usage_error(capsys):
    """Test a rejected elimination plan exits with the usage code."""
    with patch(
        "twisted_zeta.cli.plan_elimination",
        side_effect=PlanError("j = 3 is not in J"),
    ):
        code, _, err = _run(capsys, [*ELIMINATE, "--n", "1"])
    assert code == EXIT_USAGE
    assert "usage error: j = 3 is not in J" in err
