"""Test the environment verification script."""

from unittest.mock import patch

from scripts import verify_environment


def test_python_version():
    """Test the interpreter floor."""
    assert verify_environment.check_python_version((3, 13, 0))
    assert not verify_environment.check_python_version((3, 12, 9))


def test_check_package(capsys):
    """Test installed and missing packages are reported."""
    assert verify_environment.check_package("mpmath", "mpmath")
    assert not verify_environment.check_package("nothing", "no_such_module_xyz")
    out = capsys.readouterr().out
    assert "mpmath installed" in out
    assert "nothing - not installed" in out


def test_main_reports_failures(tmp_path, capsys):
    """Test a missing project layout fails the run."""
    with patch.object(verify_environment, "check_tool", return_value=True):
        code = verify_environment.main(tmp_path)
    assert code == 1
    assert "pyproject.toml" in capsys.readouterr().out
