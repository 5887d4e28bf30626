"""Deterministic machine-readable reports.

A report is a plain JSON document with sorted keys; scalars are rendered as
decimal strings ("n/d" for non-integer rationals), so identical
configurations produce byte-identical files.  Wall-clock timing is never
written into the report body; the CLI prints it to stderr instead.
"""

from __future__ import annotations

import json
from fractions import Fraction

SCHEMA = "hbv-report/1"


def canonical(value):
    """Recursively convert a result tree into JSON-stable primitives."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [canonical(v) for v in value]
    if isinstance(value, dict):
        return {str(k): canonical(v) for k, v in value.items()}
    return str(value)


def build_report(command: str, config: dict, results: dict, checks: list,
                 version: str) -> dict:
    ok = all(c.get("ok", False) for c in checks) if checks else True
    return {
        "schema": SCHEMA,
        "tool": {"name": "hbv", "version": version},
        "command": command,
        "config": canonical(config),
        "results": canonical(results),
        "checks": canonical(checks),
        "ok": ok,
    }


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def emit(report: dict, path=None) -> str:
    """Serialize canonically; optionally write to a file.  Returns the text."""
    text = render(report)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def checks_from(report_obj) -> list:
    """Flatten a BVReport/ConnesSequenceReport-style object into check dicts."""
    out = []
    for name, ok, witness in report_obj.checks:
        entry = {"name": name, "ok": bool(ok)}
        if witness is not None and not ok:
            entry["witness"] = canonical(witness)
        out.append(entry)
    return out
