"""JSON and CSV interchange formats.

Matrices are encoded row-major as a flat list of ``[re, im]`` pairs::

    state   {"dims": [2, 2], "matrix": [[re, im], ...]}
    channel {"d_in": 2, "d_out": 2, "kraus": [matrix, ...]}

All writers are deterministic: identical inputs give identical bytes.
"""
from __future__ import annotations

import csv
import io
import json
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from .channels import KrausChannel
from .errors import SpecFormatError
from .states import DensityMatrix

SCHEMA_VERSION = 1


def encode_matrix(m) -> list[list[float]]:
    m = np.asarray(m, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in m.reshape(-1)]


def decode_matrix(data, rows: int, cols: int) -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SpecFormatError(f"matrix entries must be [re, im] pairs: {exc}") from None
    if arr.shape != (rows * cols, 2):
        raise SpecFormatError(f"expected {rows * cols} [re, im] pairs, got array of shape {arr.shape}")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(rows, cols)


def state_to_json(rho: DensityMatrix) -> dict:
    return {"dims": list(rho.dims), "matrix": encode_matrix(rho.mat)}


def state_from_json(obj) -> DensityMatrix:
    if not isinstance(obj, dict) or "dims" not in obj or "matrix" not in obj:
        raise SpecFormatError("state JSON needs 'dims' and 'matrix'")
    try:
        dims = tuple(int(d) for d in obj["dims"])
    except (TypeError, ValueError):
        raise SpecFormatError("'dims' must be a list of integers") from None
    n = int(np.prod(dims)) if dims else 0
    return DensityMatrix(decode_matrix(obj["matrix"], n, n), dims)


def channel_to_json(ch: KrausChannel) -> dict:
    return {
        "d_in": ch.d_in,
        "d_out": ch.d_out,
        "kraus": [encode_matrix(k) for k in ch.kraus],
    }


def channel_from_json(obj, check: bool = True) -> KrausChannel:
    if not isinstance(obj, dict) or not {"d_in", "d_out", "kraus"} <= obj.keys():
        raise SpecFormatError("channel JSON needs 'd_in', 'd_out' and 'kraus'")
    try:
        d_in, d_out = int(obj["d_in"]), int(obj["d_out"])
    except (TypeError, ValueError):
        raise SpecFormatError("'d_in' and 'd_out' must be integers") from None
    if d_in < 1 or d_out < 1 or not isinstance(obj["kraus"], list):
        raise SpecFormatError("bad channel dimensions or Kraus list")
    kraus = tuple(decode_matrix(k, d_out, d_in) for k in obj["kraus"])
    return KrausChannel(kraus, d_in, d_out, name=str(obj.get("name", "custom")), check=check)


def load_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"{path}: invalid JSON ({exc})") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def envelope(kind: str, payload: dict) -> dict:
    """Tag a command payload with its schema name and version."""
    out = {"schema": f"entlab/{kind}", "schema_version": SCHEMA_VERSION}
    out.update(payload)
    return out


def load_schema(kind: str) -> dict:
    text = resources.files("entlab").joinpath(f"schemas/{kind}.v{SCHEMA_VERSION}.json").read_text()
    return json.loads(text)


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def diagram_csv(points: Iterable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "param", "measure", "e_in", "e_out"])
    for p in points:
        w.writerow([p.family, _fmt(p.param), p.measure.value, _fmt(p.e_in), _fmt(p.e_out)])
    return buf.getvalue()


def read_diagram_csv(text: str) -> list[dict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    for r in rows:
        for k in ("param", "e_in", "e_out"):
            r[k] = float(r[k])
    return rows


def trajectory_csv(traj, include_state: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["t", "measure_kind", "value"] + (["state"] if include_state else [])
    w.writerow(header)
    for s in traj.samples:
        row = [_fmt(s.t), traj.measure.value, _fmt(s.value)]
        if include_state:
            row.append(json.dumps(state_to_json(s.state), sort_keys=True, separators=(",", ":")))
        w.writerow(row)
    return buf.getvalue()
