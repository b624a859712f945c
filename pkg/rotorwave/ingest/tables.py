"""
Plain-text physics tables: one record per line, whitespace-separated
columns, `#` starts a comment. Header comments of the form `# key: value`
are collected as metadata.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Tuple

from rotorwave.core.errors import ArtifactIOError, DataFileError

_META_RE = re.compile(r"^#\s*(\w+)\s*:\s*(.*?)\s*$")


@dataclass
class TextTable:
    path: Path
    records: List[Tuple[int, List[str]]] = field(default_factory=list)
    meta: Dict[str, str] = field(default_factory=dict)


def read_table(path: Path | str) -> TextTable:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ArtifactIOError(path, str(exc)) from exc

    table = TextTable(path)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _META_RE.match(line)
            if m and not table.records:
                table.meta.setdefault(m.group(1).lower(), m.group(2))
            continue
        body = line.split("#", 1)[0].split()
        table.records.append((lineno, body))
    if not table.records:
        raise DataFileError(path, "no data records")
    return table


def parse_int(path: Path, lineno: int, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise DataFileError(path, f"{what} must be an integer, got {token!r}", lineno) from None


def parse_float(path: Path, lineno: int, token: str, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise DataFileError(path, f"{what} must be a number, got {token!r}", lineno) from None


def write_table(path: Path | str, header: Dict[str, str], rows: List[str]) -> Path:
    path = Path(path)
    lines = [f"# {k}: {v}" for k, v in header.items() if v]
    lines.extend(rows)
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ArtifactIOError(path, str(exc)) from exc
    return path
