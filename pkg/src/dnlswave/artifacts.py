"""Machine-readable output artifacts: deterministic CSV and JSON writers.

Filenames embed the command name and a content hash of the effective config,
so identical runs land on identical paths with byte-identical contents.
CSV files use a '.' decimal separator, UTF-8, one header row and 17
significant digits; JSON uses sorted keys.  Every JSON artifact embeds the
effective config under "config" for exact reruns.
"""
from __future__ import annotations

import hashlib
import json
import os


def config_hash(effective: dict) -> str:
    """Short content hash of the effective config document."""
    canon = json.dumps(effective, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def write_csv(path: str, header: list, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_json(path: str, payload: dict) -> str:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return path


def artifact_path(directory: str, command: str, effective: dict, suffix: str,
                  stem: str | None = None) -> str:
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, f"{stem or command}_{config_hash(effective)}.{suffix}")


def emit_json(command: str, payload: dict, effective: dict, directory: str,
              stem: str | None = None) -> str:
    body = {"command": command, "config": effective}
    body.update(payload)
    return write_json(artifact_path(directory, command, effective, "json", stem), body)


def emit_csv(command: str, header: list, rows, effective: dict, directory: str,
             stem: str | None = None) -> str:
    return write_csv(artifact_path(directory, command, effective, "csv", stem),
                     header, rows)
