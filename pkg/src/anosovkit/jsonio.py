"""Deterministic JSON emission and report envelopes for the CLI."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

SCHEMA_VERSION = "1"


def jsonable(obj):
    """Recursively convert report values to JSON-stable primitives.

    Fractions render as "p/q" strings (exact); floats pass through (repr
    round-trip is deterministic); tuples become lists.
    """
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}" if obj.denominator != 1 \
            else str(obj.numerator)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        if obj != obj or obj in (float("inf"), float("-inf")):
            return str(obj)
        return obj
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    try:
        import numpy as np

        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return [jsonable(v) for v in obj.tolist()]
    except ImportError:
        pass
    return str(obj)


def stable_dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def envelope(command: str, input_hash: str, result, verdict: str,
             seed=None, config=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input_sha256": input_hash,
        "seed": seed,
        "config": config or {},
        "verdict": verdict,
        "result": result,
    }
