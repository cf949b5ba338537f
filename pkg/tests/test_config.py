"""Test run configuration validation."""

from fractions import Fraction

import pytest
import voluptuous as vol

from twisted_zeta.config import RunConfig, UsageError, int_list, validate_config
from twisted_zeta.const import DEFAULT_WORKING_BITS


def _eliminate(**overrides):
    raw = {"command": "eliminate", "m": 1, "s": 13, "zeta_target": 3, "n": 1}
    raw.update(overrides)
    return raw


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        ("2,4", (2, 4)),
        ("20-23", (20, 21, 22, 23)),
        ("1, 5-6", (1, 5, 6)),
        (5, (5,)),
        ([1, 2], (1, 2)),
    ],
)
def test_int_list(value, expected):
    """Test comma lists, ranges, ints and lists are accepted."""
    assert int_list(value) == expected


@pytest.mark.parametrize("value", [True, "", "a,b", "1-x", 2.5])
def test_int_list_invalid(value):
    """Test malformed integer lists are rejected."""
    with pytest.raises(vol.Invalid):
        int_list(value)


def test_decompose_defaults():
    """Test defaults are filled in for a minimal decompose run."""
    config = validate_config({"command": "decompose", "D": 1, "s": 3, "n": 1})
    assert isinstance(config, RunConfig)
    assert (config.D, config.s, config.n) == (1, 3, 1)
    assert config.bits == DEFAULT_WORKING_BITS
    assert config.format == "json"
    assert config.out is None
    assert not config.check


def test_none_values_fall_back_to_defaults():
    """Test options argparse left unset do not override defaults."""
    config = validate_config(
        {"command": "decompose", "D": 1, "s": 3, "n": 1, "bits": None, "out": None}
    )
    assert config.bits == DEFAULT_WORKING_BITS


def test_unknown_command():
    """Test an unknown command is a usage error."""
    with pytest.raises(UsageError, match="unknown command"):
        validate_config({"command": "plot"})


def test_missing_required_value():
    """Test the missing key is named."""
    with pytest.raises(UsageError, match="s: required"):
        validate_config({"command": "decompose", "D": 1, "n": 1})


@pytest.mark.parametrize(
    ("raw", "match"),
    [
        ({"command": "decompose", "D": 2, "s": 5, "n": 1}, "3D"),
        ({"command": "decompose", "D": 0, "s": 3, "n": 1}, "D must be >= 1"),
        ({"command": "decompose", "D": 1, "s": 3, "n": 1, "bits": 32}, "bits"),
        (
            {"command": "decompose", "D": 1, "s": 3, "n": 1, "target_error": 0},
            "target_error",
        ),
    ],
)
def test_decompose_rejects(raw, match):
    """Test range and consistency errors."""
    with pytest.raises(UsageError, match=match):
        validate_config(raw)


def test_evaluate_defaults_twist_to_D():
    """Test the untwisted shift j = D is used when neither j nor d is given."""
    config = validate_config({"command": "evaluate", "D": 2, "s": 7, "n": 1})
    assert config.j == 2
    assert config.d is None


def test_evaluate_divisor_only():
    """Test giving d alone leaves j unset."""
    config = validate_config({"command": "evaluate", "D": 2, "s": 7, "n": 1, "d": 1})
    assert config.j is None
    assert config.d == 1


def test_evaluate_parses_z():
    """Test z is read as an exact rational."""
    config = validate_config(
        {"command": "evaluate", "D": 1, "s": 3, "n": 1, "z": "1/2"}
    )
    assert config.z == Fraction(1, 2)


@pytest.mark.parametrize(
    ("extra", "D", "s", "n", "match"),
    [
        ({"j": 3}, 2, 7, 1, "--j must"),
        ({"d": 3}, 4, 12, 2, "does not divide"),
        ({"d": 1}, 1, 3, 1, "hat forms"),
        ({"d": 1}, 2, 6, 2, "hat forms"),
        ({"z": "3/2"}, 1, 3, 1, "--z must"),
        ({"z": "abc"}, 1, 3, 1, "z: "),
    ],
)
def test_evaluate_rejects(extra, D, s, n, match):
    """Test twist, divisor and z validation."""
    raw = {"command": "evaluate", "D": D, "s": s, "n": n, **extra}
    with pytest.raises(UsageError, match=match):
        validate_config(raw)


def test_asymptotics_n_list():
    """Test the n values become an increasing n_list."""
    config = validate_config(
        {"command": "asymptotics", "D": 2, "s": 25, "n": "10,20,40"}
    )
    assert config.n_list == (10, 20, 40)
    assert config.n is None
    assert config.j == 1


@pytest.mark.parametrize(
    ("extra", "match"),
    [
        ({"n": "4,2"}, "strictly increasing"),
        ({"n": "0,2"}, "positive"),
        ({"j": 3}, "twist 3 exceeds"),
        ({"j_other": 3}, "twist 3 exceeds"),
    ],
)
def test_asymptotics_rejects(extra, match):
    """Test trend options are validated."""
    with pytest.raises(UsageError, match=match):
        validate_config({"command": "asymptotics", "D": 2, "s": 25, **extra})


def test_csv_needs_an_asymptotics_trend():
    """Test CSV output is limited to asymptotics runs with n values."""
    config = validate_config(
        {"command": "asymptotics", "D": 1, "s": 3, "n": "5,10", "format": "csv"}
    )
    assert config.format == "csv"
    with pytest.raises(UsageError, match="CSV"):
        validate_config({"command": "asymptotics", "D": 1, "s": 3, "format": "csv"})
    with pytest.raises(UsageError, match="CSV"):
        validate_config(
            {"command": "decompose", "D": 1, "s": 3, "n": 1, "format": "csv"}
        )


def test_eliminate_exclude():
    """Test --exclude is turned into the kept set J."""
    config = validate_config(_eliminate(exclude="5"))
    assert config.J == (3, 7, 9, 11, 13)


def test_eliminate_explicit_J():
    """Test an explicit J is sorted and deduplicated."""
    config = validate_config(_eliminate(J="13,11,9,7,3"))
    assert config.J == (3, 7, 9, 11, 13)


@pytest.mark.parametrize(
    ("overrides", "match"),
    [
        ({}, "exactly one"),
        ({"J": "3,7,9,11,13", "exclude": "5"}, "exactly one"),
        ({"J": "3,7,9"}, "5 elements"),
        ({"exclude": "4"}, "not odd values"),
        ({"exclude": "5,7"}, "distinct values"),
        ({"exclude": "3"}, "not in J"),
        ({"s": 14, "exclude": "5"}, "s must be odd"),
    ],
)
def test_eliminate_rejects(overrides, match):
    """Test the kept set must be consistent with m, s and the target."""
    with pytest.raises(UsageError, match=match):
        validate_config(_eliminate(**overrides))


def test_certify_n_range():
    """Test certify reads n as a list or range."""
    raw = _eliminate(command="certify", exclude="5", n="1-3")
    config = validate_config(raw)
    assert config.n_list == (1, 2, 3)
    assert config.n is None


def test_verify_only():
    """Test check selection."""
    config = validate_config({"command": "verify", "only": ["lemma2", "symmetry"]})
    assert config.only == ("lemma2", "symmetry")
    assert config.max is None
    assert not config.mutate


def test_verify_rejects_unknown_check():
    """Test unknown check keys are listed."""
    with pytest.raises(UsageError, match="unknown checks \\['bogus'\\]"):
        validate_config({"command": "verify", "only": ["bogus"]})


@pytest.mark.parametrize("key", ["max", "workers"])
def test_verify_rejects_non_positive(key):
    """Test grid bound and worker count must be positive."""
    with pytest.raises(UsageError, match=key):
        validate_config({"command": "verify", key: 0})
