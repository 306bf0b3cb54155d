"""JSON report document shared by every CLI command."""

from __future__ import annotations

import datetime as _dt
import json
import math
from typing import Any

import numpy as np

from . import __version__
from ._backend import NAME as BACKEND_NAME

SCHEMA_VERSION = 1
HEADER_KEY = "header"


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def build_report(command: str, config_echo: dict, results: dict, checks: list) -> dict:
    """``checks`` is a list of :class:`~qcorr.verify.CheckResult`-like objects."""
    summary = {
        "passed": all(c.passed for c in checks),
        "checks": [
            {"id": c.id, "name": c.name, "passed": bool(c.passed), "message": c.message} for c in checks
        ],
    }
    return _clean(
        {
            "artifact": "qcorr",
            "version": __version__,
            "schema_version": SCHEMA_VERSION,
            HEADER_KEY: {
                "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
                "backend": BACKEND_NAME,
            },
            "command": command,
            "config": config_echo,
            "results": results,
            "summary": summary,
        }
    )


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def body(report: dict) -> str:
    """Serialized report without the volatile header, for byte comparisons."""
    return dumps({k: v for k, v in report.items() if k != HEADER_KEY})
