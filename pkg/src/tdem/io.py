"""Deterministic tabular output and run manifests.

CSV is the canonical format: '\n' line endings, '.' decimal separator,
floats at 17 significant digits, fixed column order per subcommand.  JSON
mirrors use sorted keys and a fixed separator style.  Re-running any
subcommand with the same config must reproduce identical bytes; manifests
record a checksum for every output file so that claim is testable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "format_value",
    "write_table",
    "write_json",
    "sha256_file",
    "RunManifest",
]


def format_value(x):
    """Stable text form: floats at 17 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if x == 0.0:
            return "0"                      # fold -0.0 for byte determinism
        return f"{x:.17g}"
    if x is None:
        return ""
    return str(x)


def _needs_quoting(s):
    return any(c in s for c in (",", '"', "\n"))


def _csv_field(s):
    if _needs_quoting(s):
        return '"' + s.replace('"', '""') + '"'
    return s


def write_table(path, header, rows, fmt="csv"):
    """Write rows as CSV (default) or a JSON record array.  Returns sha256."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        lines = [",".join(_csv_field(h) for h in header)]
        for row in rows:
            lines.append(",".join(_csv_field(format_value(x)) for x in row))
        data = ("\n".join(lines) + "\n").encode()
    elif fmt == "json":
        records = [dict(zip(header, [None if x is None else
                                     (x if isinstance(x, (int, bool, str)) else float(x))
                                     for x in row]))
                   for row in rows]
        data = (json.dumps(records, sort_keys=True, indent=1) + "\n").encode()
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    path.write_bytes(data)
    return hashlib.sha256(data).hexdigest()


def write_json(path, obj):
    """Canonical JSON dump (sorted keys).  Returns sha256 of the bytes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = (json.dumps(obj, sort_keys=True, indent=1) + "\n").encode()
    path.write_bytes(data)
    return hashlib.sha256(data).hexdigest()


def sha256_file(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    """Provenance record written alongside every subcommand's outputs.

    Output checksums are deterministic for a fixed config and version; the
    wall time is informational and excluded from any determinism claim.
    """

    tool: str
    version: str
    subcommand: str
    config: dict | None
    outputs: list = field(default_factory=list)
    wall_time_s: float = 0.0
    argv: list = field(default_factory=list)

    def add_output(self, path, checksum):
        self.outputs.append({"path": str(path), "sha256": checksum})

    def write(self, directory):
        doc = {
            "tool": self.tool,
            "version": self.version,
            "subcommand": self.subcommand,
            "config": self.config,
            "outputs": sorted(self.outputs, key=lambda o: o["path"]),
            "wall_time_s": self.wall_time_s,
            "argv": list(self.argv),
        }
        path = Path(directory) / "manifest.json"
        write_json(path, doc)
        return path
