# rotorwave/core/report.py
import json
import math
from pathlib import Path
from typing import Any, Optional

import numpy as np

from rotorwave.core.errors import ArtifactIOError
from rotorwave.settings import settings

# significant digits kept for floats in every JSON artifact
_SIG_DIGITS = 12


def canonical(obj: Any) -> Any:
    """Round floats to fixed significant digits so reruns are byte-identical."""
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(format(obj, f".{_SIG_DIGITS}g"))
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    return obj


# --- Report creation functions ---
def make_manifest(
    command: str,
    config: dict,
    *,
    timescales: Optional[dict] = None,
    norm_defects: Optional[dict] = None,
    artifacts: Optional[list] = None,
    extra: Optional[dict] = None,
) -> dict:
    from rotorwave import __version__

    manifest = {
        "type": "manifest",
        "command": command,
        "version": __version__,
        "config": config,
        "settings": settings.snapshot(),
        "timescales": timescales,
        "norm_defects": norm_defects or {},
        "artifacts": sorted(artifacts or []),
    }
    if extra:
        manifest.update(extra)
    return manifest


def make_revival_report(document: dict, timescales: dict) -> dict:
    report = {"type": "revivals", "timescales": timescales}
    report.update(document)
    return report


# --- Report output functions ---
def dumps(obj: dict) -> str:
    return json.dumps(canonical(obj), indent=2, sort_keys=True) + "\n"


def write_report_obj(obj: dict, out: Optional[Path]) -> None:
    text = dumps(obj)
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise ArtifactIOError(out, str(exc)) from exc
    else:
        import typer

        typer.echo(text, nl=False)
