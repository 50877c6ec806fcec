"""Report assembly: run manifests, pass/fail checks, JSON and text rendering.

Every report embeds a manifest with the tool version, the subcommand
and its fully resolved configuration, so the run can be reproduced from
the report alone.  Machine-readable output is canonical JSON (sorted
keys, fixed indentation); rendering the same report twice yields
byte-identical text.  Timestamps live only in the manifest and can be
omitted entirely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any

from . import __version__

TOOL_NAME = "bellsim"


@dataclass(frozen=True, slots=True)
class Check:
    """One pass/fail criterion embedded in a report."""

    name: str
    passed: bool
    value: float | None = None
    target: float | None = None
    tolerance: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "target": self.target,
            "tolerance": self.tolerance,
        }


def build_report(
    subcommand: str,
    config: dict,
    results: dict,
    checks: list[Check],
    seed: int | None = None,
    outputs: dict | None = None,
    timestamp: bool = True,
) -> dict:
    manifest: dict[str, Any] = {
        "tool": TOOL_NAME,
        "version": __version__,
        "subcommand": subcommand,
        "seed": seed,
        "config": config,
        "outputs": outputs or {},
    }
    if timestamp:
        manifest["timestamp"] = datetime.now(timezone.utc).isoformat()
    return {
        "manifest": manifest,
        "results": results,
        "checks": [c.to_json_dict() for c in checks],
        "passed": all(c.passed for c in checks),
    }


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _scalar(value: Any) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _lines(value: Any, indent: int) -> list[str]:
    pad = "  " * indent
    out: list[str] = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                out.append(f"{pad}{key}:")
                out.extend(_lines(item, indent + 1))
            else:
                item_text = "[]" if isinstance(item, list) else _scalar(item)
                item_text = "{}" if isinstance(item, dict) else item_text
                out.append(f"{pad}{key}: {item_text}")
    elif isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            out.append(f"{pad}[{', '.join(_scalar(v) for v in value)}]")
        else:
            for v in value:
                out.append(f"{pad}-")
                out.extend(_lines(v, indent + 1))
    else:
        out.append(f"{pad}{_scalar(value)}")
    return out


def render_text(report: dict) -> str:
    lines: list[str] = []
    manifest = report.get("manifest", {})
    lines.append(f"{manifest.get('tool', TOOL_NAME)} {manifest.get('version', '')} "
                 f"-- {manifest.get('subcommand', '')}")
    lines.append("")
    lines.append("manifest:")
    lines.extend(_lines(manifest, 1))
    lines.append("")
    lines.append("results:")
    lines.extend(_lines(report.get("results", {}), 1))
    checks = report.get("checks", [])
    if checks:
        lines.append("")
        lines.append("checks:")
        for check in checks:
            status = "PASS" if check["passed"] else "FAIL"
            detail = []
            for field in ("value", "target", "tolerance"):
                if check.get(field) is not None:
                    detail.append(f"{field}={_scalar(check[field])}")
            suffix = f"  ({', '.join(detail)})" if detail else ""
            lines.append(f"  [{status}] {check['name']}{suffix}")
    lines.append("")
    n_pass = sum(1 for c in checks if c["passed"])
    verdict = "PASS" if report.get("passed", True) else "FAIL"
    lines.append(f"RESULT: {verdict} ({n_pass}/{len(checks)} checks)")
    return "\n".join(lines) + "\n"
