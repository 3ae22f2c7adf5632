"""Run reports: schema validation, build stamp, deterministic serialization."""

from __future__ import annotations

import json
import subprocess
from functools import lru_cache
from importlib import resources

import jsonschema

__all__ = ["SCHEMA_VERSION", "report_schema", "validate_report",
           "dump_report", "build_stamp"]

SCHEMA_VERSION = 1


@lru_cache(maxsize=1)
def report_schema() -> dict:
    path = resources.files("qwpdn.data").joinpath("report_schema.json")
    with path.open("r", encoding="utf-8") as fh:
        return json.load(fh)


def validate_report(report: dict) -> None:
    """Raise jsonschema.ValidationError when the report is malformed."""
    jsonschema.validate(report, report_schema())


def build_stamp() -> str:
    """git describe of the working tree, falling back to the package version."""
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True, text=True, timeout=5, check=True)
        return out.stdout.strip()
    except Exception:
        from importlib.metadata import PackageNotFoundError, version

        try:
            return "qwpdn-" + version("qwpdn")
        except PackageNotFoundError:
            return "qwpdn-unreleased"


def dump_report(report: dict, path) -> None:
    """Write a report with sorted keys so identical runs are byte-identical."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
