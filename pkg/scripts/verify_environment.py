#!/usr/bin/env python3
"""Verify that the twisted zeta development environment is usable.

Checks the interpreter, the runtime and test packages, the developer tools
and the mpmath arithmetic backend.
"""

from __future__ import annotations

import importlib
import importlib.util
import shutil
import sys
from pathlib import Path

REQUIRED_PYTHON = (3, 13)

RUNTIME_PACKAGES = (("mpmath", "mpmath"), ("voluptuous", "voluptuous"))
TEST_PACKAGES = (
    ("pytest", "pytest"),
    ("pytest-asyncio", "pytest_asyncio"),
    ("pytest-cov", "pytest_cov"),
)
TOOLS = ("ruff", "mypy", "pre-commit")


class Colors:
    """ANSI color codes for terminal output."""

    GREEN = "\033[92m"
    RED = "\033[91m"
    YELLOW = "\033[93m"
    BLUE = "\033[94m"
    RESET = "\033[0m"
    BOLD = "\033[1m"


def print_header(text: str) -> None:
    print(f"\n{Colors.BOLD}{Colors.BLUE}{text}{Colors.RESET}")


def report(ok: bool, text: str) -> bool:
    mark = f"{Colors.GREEN}✓" if ok else f"{Colors.RED}✗"
    print(f"{mark}{Colors.RESET} {text}")
    return ok


def check_python_version(version: tuple[int, ...] | None = None) -> bool:
    current = tuple(version or sys.version_info[:3])
    wanted = ".".join(map(str, REQUIRED_PYTHON))
    found = ".".join(map(str, current))
    return report(current[:2] >= REQUIRED_PYTHON, f"Python {found} (>= {wanted})")


def check_package(name: str, import_name: str) -> bool:
    """Report whether ``import_name`` imports, with its version if known."""
    if importlib.util.find_spec(import_name) is None:
        return report(False, f"{name} - not installed")
    try:
        module = importlib.import_module(import_name)
    except ImportError as err:
        return report(False, f"{name} - import failed: {err}")
    version = getattr(module, "__version__", "unknown")
    return report(True, f"{name} installed (version: {version})")


def check_mpmath_backend() -> bool:
    """Report the mpmath integer backend; the pure Python one is slow."""
    try:
        from mpmath.libmp import BACKEND
    except ImportError:
        return report(False, "mpmath backend - mpmath missing")
    if BACKEND != "gmpy":
        print(
            f"{Colors.YELLOW}!{Colors.RESET} mpmath backend: {BACKEND} "
            "(install gmpy2 for faster large-precision runs)"
        )
        return True
    return report(True, f"mpmath backend: {BACKEND}")


def check_tool(command: str) -> bool:
    found = shutil.which(command)
    return report(found is not None, f"{command}: {found or 'not on PATH'}")


def main(project_root: Path | None = None) -> int:
    """Run all checks and return a process exit code."""
    root = project_root or Path(__file__).resolve().parent.parent
    results: dict[str, bool] = {}

    print_header("Python")
    results["python"] = check_python_version()

    print_header("Runtime packages")
    for name, import_name in RUNTIME_PACKAGES:
        results[name] = check_package(name, import_name)
    results["backend"] = check_mpmath_backend()

    print_header("Test packages")
    for name, import_name in TEST_PACKAGES:
        results[name] = check_package(name, import_name)

    print_header("Tools")
    for tool in TOOLS:
        results[tool] = check_tool(tool)

    print_header("Project layout")
    for relative in ("twisted_zeta/__init__.py", "tests/conftest.py", "pyproject.toml"):
        results[relative] = report((root / relative).is_file(), relative)

    failed = sorted(name for name, ok in results.items() if not ok)
    if failed:
        print(f"\n{Colors.RED}{len(failed)} check(s) failed: {', '.join(failed)}")
        print(f"Install with: pip install -e '.[dev]'{Colors.RESET}")
        return 1
    print(f"\n{Colors.GREEN}✓ All checks passed!{Colors.RESET}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
