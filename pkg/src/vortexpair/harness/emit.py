"""CSV and JSON serialisation of sweep results.

Floats are written with 17 significant digits so that parsing returns the
identical binary value. Non-finite values become ``nan`` in CSV and
``null`` in JSON.
"""

import csv
import io
import json
import math
import os
import sys
from importlib import resources

from .sweep import SweepResult

SCHEMA_VERSION = 1


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".17g") if math.isfinite(x) else "nan"
    return str(x)


def _json_text(obj):
    """JSON text with floats at 17 significant digits, keys in given order."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format(obj, ".17g")
        # keep floats distinguishable from ints after a round trip
        return text if any(c in text for c in ".e") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{_json_text(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_json_text(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_document(result):
    return {
        "schema_version": SCHEMA_VERSION,
        "artifact_version": result.version,
        "config_hash": result.config_hash,
        "preset": result.preset,
        "config": result.config,
        "input_columns": result.input_columns,
        "output_columns": result.output_columns,
        "records": result.records,
    }


def to_json(result):
    return _json_text(to_document(result)) + "\n"


def from_json(text):
    doc = json.loads(text)

    def fix(v):
        return math.nan if v is None else v

    records = []
    for r in doc["records"]:
        r = dict(r)
        r["outputs"] = {k: fix(v) for k, v in r["outputs"].items()}
        r["errors"] = {k: fix(v) for k, v in r["errors"].items()}
        records.append(r)
    return SweepResult(
        config_hash=doc["config_hash"],
        preset=doc["preset"],
        version=doc["artifact_version"],
        config=doc["config"],
        input_columns=doc["input_columns"],
        output_columns=doc["output_columns"],
        records=records,
    )


def _error_columns(result):
    cols = []
    for r in result.records:
        for k in r["errors"]:
            if k not in cols:
                cols.append(k)
    return cols


def to_csv(result):
    """CSV text: '#' provenance lines, a header row, one row per grid point."""
    buf = io.StringIO()
    buf.write("# vortexpair sweep\n")
    buf.write(f"# artifact_version: {result.version}\n")
    buf.write(f"# config_hash: {result.config_hash}\n")
    buf.write(f"# preset: {result.preset}\n")
    buf.write(f"# config: {json.dumps(result.config, sort_keys=True, separators=(',', ':'))}\n")
    err_cols = _error_columns(result)
    header = ["index"] + result.input_columns + result.output_columns + err_cols + ["status", "warnings"]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in result.records:
        row = [r["index"]]
        row += [_fmt(r["inputs"][c]) for c in result.input_columns]
        row += [_fmt(r["outputs"][c]) for c in result.output_columns]
        row += [_fmt(r["errors"].get(c, math.nan)) for c in err_cols]
        row += [r["status"], " | ".join(r["warnings"])]
        w.writerow(row)
    return buf.getvalue()


def from_csv(text):
    """Inverse of :func:`to_csv`."""
    meta, body = {}, []
    for line in text.splitlines(keepends=True):
        if line.startswith("#"):
            if ":" in line:
                k, v = line[1:].split(":", 1)
                meta[k.strip()] = v.strip()
        else:
            body.append(line)
    rows = list(csv.reader(io.StringIO("".join(body))))
    header, rows = rows[0], rows[1:]
    config = json.loads(meta["config"])
    n_in = 1 if config.get("series_axis") is None else 2
    inputs = header[1 : 1 + n_in]
    status_at = header.index("status")
    err_cols = [c for c in header[1 + n_in : status_at] if c.startswith("fidelity_")]
    outputs = [c for c in header[1 + n_in : status_at] if c not in err_cols]
    records = []
    for row in rows:
        d = dict(zip(header, row))
        records.append({
            "index": int(d["index"]),
            "inputs": {c: float(d[c]) for c in inputs},
            "outputs": {c: float(d[c]) for c in outputs},
            "errors": {c: float(d[c]) for c in err_cols},
            "status": d["status"],
            "warnings": [s for s in d["warnings"].split(" | ") if s],
        })
    return SweepResult(
        config_hash=meta["config_hash"],
        preset=meta["preset"],
        version=meta["artifact_version"],
        config=config,
        input_columns=inputs,
        output_columns=outputs,
        records=records,
    )


def schema():
    """The published JSON schema for sweep documents."""
    text = resources.files("vortexpair.harness").joinpath("sweep_result.schema.json").read_text()
    return json.loads(text)


def render(result, fmt):
    if fmt == "csv":
        return to_csv(result)
    if fmt == "json":
        return to_json(result)
    raise ValueError(f"unknown format {fmt!r}")


def emit(result, fmt, path=None, stream=None):
    """Write ``result`` to ``path`` (atomically) or to ``stream``."""
    text = render(result, fmt)
    if path is None:
        (stream or sys.stdout).write(text)
        return text
    tmp = f"{path}.tmp{os.getpid()}"
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise OSError(f"cannot write {path}: {exc}") from exc
    return text
