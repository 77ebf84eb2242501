"""Deterministic serialization of run results.

Every run produces {params, results, errors, seed, version}.  JSON is
dumped with sorted keys; CSV carries a versioned comment header with
the echoed parameters, then either a name,value listing of scalars or
the result table.  Floats are written with 15 significant digits and
no run ever embeds a timestamp, so reruns with the same seed are
byte-identical.
"""

from __future__ import annotations

import json

from . import __version__


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".15g")
    return str(v)


def run_payload(command: str, params: dict, results: dict,
                errors=None, seed=None) -> dict:
    return {
        "command": command,
        "params": {k: v for k, v in params.items() if v is not None},
        "results": results,
        "errors": list(errors or []),
        "seed": seed,
        "version": __version__,
    }


def to_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_fmt) + "\n"


def to_csv(payload: dict) -> str:
    lines = [f"# feynpath {payload['version']} {payload['command']}"]
    for k in sorted(payload["params"]):
        lines.append(f"# {k}={_fmt(payload['params'][k])}")
    lines.append(f"# seed={_fmt(payload['seed']) if payload['seed'] is not None else 'none'}")
    for e in payload["errors"]:
        lines.append(f"# note: {e}")
    results = payload["results"]
    table = results.get("table")
    scalars = {k: v for k, v in results.items() if k != "table"}
    if scalars:
        lines.append("name,value")
        for k in sorted(scalars):
            lines.append(f"{k},{_fmt(scalars[k])}")
    if table:
        lines.append(",".join(table["columns"]))
        for row in table["rows"]:
            lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"
