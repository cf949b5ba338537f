"""Run configuration for the command-line front end."""

from __future__ import annotations

import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import pairwise
from pathlib import Path
from typing import Any

import voluptuous as vol

from .const import (
    DEFAULT_MAX_TERMS,
    DEFAULT_TARGET_ERROR,
    DEFAULT_WORKERS,
    DEFAULT_WORKING_BITS,
    DEFAULT_X0_TOL,
    MIN_WORKING_BITS,
)
from .coordinator import CHECK_KEYS

_LOGGER = logging.getLogger(__name__)

COMMANDS = ("decompose", "verify", "evaluate", "asymptotics", "eliminate", "certify")
FORMATS = ("json", "csv")


class UsageError(ValueError):
    """Error to indicate the run configuration is invalid."""


def int_list(value: Any) -> tuple[int, ...]:
    """Parse ``"2,4"``, ``"20-30"``, an int or a list of ints."""
    if isinstance(value, bool):
        raise vol.Invalid("expected integers")
    if isinstance(value, int):
        return (value,)
    if isinstance(value, (list, tuple)):
        return tuple(int(v) for v in value)
    if not isinstance(value, str) or not value.strip():
        raise vol.Invalid("expected a comma-separated list of integers")
    out: list[int] = []
    try:
        for part in value.split(","):
            lo, sep, hi = part.strip().partition("-")
            if sep and lo:
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError as err:
        raise vol.Invalid(f"cannot parse integer list {value!r}") from err
    return tuple(out)


def _positive(name: str) -> Callable[[Any], int]:
    def validator(value: Any) -> int:
        check = vol.All(vol.Coerce(int), vol.Range(min=1, msg=f"{name} must be >= 1"))
        return int(check(value))

    return validator


def _rational(value: Any) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as err:
        raise vol.Invalid(f"not a rational number: {value!r}") from err


_COMMON = {
    vol.Required("command"): vol.In(COMMANDS),
    vol.Optional("bits", default=DEFAULT_WORKING_BITS): vol.All(
        vol.Coerce(int), vol.Range(min=MIN_WORKING_BITS)
    ),
    vol.Optional("target_error", default=DEFAULT_TARGET_ERROR): vol.All(
        vol.Coerce(float), vol.Range(min=0, min_included=False)
    ),
    vol.Optional("tol", default=DEFAULT_X0_TOL): vol.All(
        vol.Coerce(float), vol.Range(min=0, min_included=False)
    ),
    vol.Optional("out", default=None): vol.Any(None, vol.Coerce(Path)),
    vol.Optional("format", default="json"): vol.In(FORMATS),
    vol.Optional("max_terms", default=DEFAULT_MAX_TERMS): _positive("max_terms"),
}

_FORM = {
    vol.Required("D"): _positive("D"),
    vol.Required("s"): _positive("s"),
}

_ELIMINATION = {
    vol.Required("m"): vol.All(vol.Coerce(int), vol.Range(min=0)),
    vol.Required("s"): _positive("s"),
    vol.Optional("J", default=None): vol.Any(None, int_list),
    vol.Optional("exclude", default=None): vol.Any(None, int_list),
    vol.Required("zeta_target"): _positive("zeta_target"),
}

SCHEMAS: dict[str, vol.Schema] = {
    "decompose": vol.Schema(
        {
            **_COMMON,
            **_FORM,
            vol.Required("n"): _positive("n"),
            vol.Optional("check", default=False): bool,
        },
        extra=vol.REMOVE_EXTRA,
    ),
    "verify": vol.Schema(
        {
            **_COMMON,
            vol.Optional("only", default=None): vol.Any(None, [str]),
            vol.Optional("max", default=None): vol.Any(None, _positive("max")),
            vol.Optional("workers", default=DEFAULT_WORKERS): _positive("workers"),
            vol.Optional("mutate", default=False): bool,
        },
        extra=vol.REMOVE_EXTRA,
    ),
    "evaluate": vol.Schema(
        {
            **_COMMON,
            **_FORM,
            vol.Required("n"): _positive("n"),
            vol.Optional("j", default=None): vol.Any(None, _positive("j")),
            vol.Optional("d", default=None): vol.Any(None, _positive("d")),
            vol.Optional("z", default=None): vol.Any(None, _rational),
        },
        extra=vol.REMOVE_EXTRA,
    ),
    "asymptotics": vol.Schema(
        {
            **_COMMON,
            **_FORM,
            vol.Optional("n", default=None): vol.Any(None, int_list),
            vol.Optional("j", default=1): _positive("j"),
            vol.Optional("j_other", default=None): vol.Any(None, _positive("j_other")),
            vol.Optional("search", default=None): vol.Any(None, _positive("search")),
        },
        extra=vol.REMOVE_EXTRA,
    ),
    "eliminate": vol.Schema(
        {**_COMMON, **_ELIMINATION, vol.Required("n"): _positive("n")},
        extra=vol.REMOVE_EXTRA,
    ),
    "certify": vol.Schema(
        {**_COMMON, **_ELIMINATION, vol.Required("n"): int_list},
        extra=vol.REMOVE_EXTRA,
    ),
}


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Validated options for one subcommand run."""

    command: str
    D: int | None = None
    s: int | None = None
    n: int | None = None
    n_list: tuple[int, ...] = ()
    j: int | None = None
    j_other: int | None = None
    d: int | None = None
    z: Fraction | None = None
    m: int | None = None
    J: tuple[int, ...] = ()
    zeta_target: int | None = None
    bits: int = DEFAULT_WORKING_BITS
    target_error: float = DEFAULT_TARGET_ERROR
    tol: float = DEFAULT_X0_TOL
    out: Path | None = None
    format: str = "json"
    only: tuple[str, ...] = ()
    max: int | None = None
    check: bool = False
    search: int | None = None
    workers: int = DEFAULT_WORKERS
    mutate: bool = False
    max_terms: int = DEFAULT_MAX_TERMS


def _odd_range(s: int) -> tuple[int, ...]:
    return tuple(range(3, s + 1, 2))


def _resolve_J(data: dict[str, Any]) -> tuple[int, ...]:
    m, s = data["m"], data["s"]
    if s % 2 == 0:
        raise UsageError(f"s must be odd for elimination, got {s}")
    given, excluded = data.get("J"), data.get("exclude")
    if (given is None) == (excluded is None):
        raise UsageError("give exactly one of --J and --exclude")
    odd = _odd_range(s)
    if excluded is not None:
        bad = [i for i in excluded if i not in odd]
        if bad:
            raise UsageError(f"--exclude entries {bad} are not odd values in 3..{s}")
        if len(set(excluded)) != m:
            raise UsageError(f"--exclude must name m = {m} distinct values")
        J = tuple(i for i in odd if i not in excluded)
    else:
        J = tuple(sorted(set(given)))
        if len(J) != len(odd) - m:
            raise UsageError(f"--J must have {len(odd) - m} elements for m = {m}")
    if data["zeta_target"] not in J:
        raise UsageError(f"--target {data['zeta_target']} is not in J = {J}")
    return J


def _cross_checks(data: dict[str, Any]) -> dict[str, Any]:
    command = data["command"]
    if "D" in data and data["s"] < 3 * data["D"]:
        raise UsageError(f"s must be >= 3D, got D={data['D']}, s={data['s']}")
    if command == "evaluate":
        D = data["D"]
        if data["j"] is None and data["d"] is None:
            data["j"] = D
        if data["j"] is not None and not 1 <= data["j"] <= D:
            raise UsageError(f"--j must lie in 1..{D}")
        if data["d"] is not None:
            if D % data["d"]:
                raise UsageError(f"--d {data['d']} does not divide D = {D}")
            if data["n"] * D % 2 or (data["s"] % 2 == 0 and data["n"] % 2 == 0):
                raise UsageError("hat forms need nD even and s or n odd")
        if data["z"] is not None and not 0 < data["z"] < 1:
            raise UsageError("--z must lie in (0, 1)")
    if command == "asymptotics":
        if data["s"] + 1 <= 3 * data["D"]:
            raise UsageError("asymptotics needs s + 1 > 3D")
        for j in (data["j"], data["j_other"]):
            if j is not None and j > data["D"]:
                raise UsageError(f"twist {j} exceeds D = {data['D']}")
        if data["n"] is not None:
            data["n_list"] = _increasing(data.pop("n"))
    if command in ("eliminate", "certify"):
        data["J"] = _resolve_J(data)
        data.pop("exclude", None)
        if command == "certify":
            data["n_list"] = _increasing(data.pop("n"))
    if command == "verify":
        only = tuple(data["only"] or ())
        unknown = sorted(set(only) - set(CHECK_KEYS))
        if unknown:
            raise UsageError(f"unknown checks {unknown}; choose from {CHECK_KEYS}")
        data["only"] = only
    if data["format"] == "csv" and (command != "asymptotics" or not data.get("n_list")):
        raise UsageError("CSV output needs an asymptotics run with --n")
    return data


def _increasing(values: tuple[int, ...]) -> tuple[int, ...]:
    if not values or any(v < 1 for v in values):
        raise UsageError("n values must be positive")
    if any(b <= a for a, b in pairwise(values)):
        raise UsageError(f"n values must be strictly increasing, got {values}")
    return values


def _describe(err: vol.Invalid) -> str:
    where = ".".join(str(p) for p in err.path) or "config"
    return f"{where}: {err.msg}"


def validate_config(raw: Mapping[str, Any]) -> RunConfig:
    """Validate raw CLI values into a RunConfig.

    Raises:
        UsageError: If a value is missing, malformed or inconsistent.
    """
    command = raw.get("command")
    if command not in SCHEMAS:
        raise UsageError(f"unknown command {command!r}")
    cleaned = {k: v for k, v in raw.items() if v is not None}
    try:
        data = SCHEMAS[command](cleaned)
    except vol.MultipleInvalid as err:
        raise UsageError("; ".join(_describe(e) for e in err.errors)) from err
    except vol.Invalid as err:
        raise UsageError(str(err)) from err
    data = _cross_checks(dict(data))
    _LOGGER.debug("Validated %s configuration: %s", command, sorted(data))
    return RunConfig(**data)
