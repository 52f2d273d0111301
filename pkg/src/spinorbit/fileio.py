"""Output serialization: 16-bit PGM images, round-trip CSV, ordered JSON.

All writes are atomic (temp file then rename), so a failed run never
leaves a truncated output behind.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np


def _atomic_write_bytes(path: Path, data: bytes) -> Path:
    path = Path(path)
    tmp = path.parent / (path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
    return path


def format_value(value) -> str:
    """CSV cell: shortest float representation that reparses exactly."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, header, rows) -> Path:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return _atomic_write_bytes(Path(path), ("\n".join(lines) + "\n").encode())


def write_json(path, payload) -> Path:
    """JSON with keys kept in insertion order."""
    return _atomic_write_bytes(Path(path), (json.dumps(payload, indent=2) + "\n").encode())


def write_pgm16(path, image) -> list:
    """Binary 16-bit PGM, big-endian samples, linear map from [min, max].

    The mapping bounds are recorded in a sidecar JSON next to the image
    so the original intensities can be recovered.  Rows are written in
    order of increasing y.  Returns [image_path, sidecar_path].
    """
    path = Path(path)
    arr = np.asarray(image, dtype=float)
    if arr.ndim != 2:
        raise ValueError("PGM output needs a 2-D array")
    lo, hi = float(arr.min()), float(arr.max())
    if hi > lo:
        scaled = np.round((arr - lo) / (hi - lo) * 65535.0)
    else:
        scaled = np.zeros_like(arr)
    data = scaled.astype(">u2")
    header = f"P5\n{arr.shape[1]} {arr.shape[0]}\n65535\n".encode()
    _atomic_write_bytes(path, header + data.tobytes())
    sidecar = path.parent / (path.name + ".json")
    write_json(
        sidecar,
        {
            "min": lo,
            "max": hi,
            "width": arr.shape[1],
            "height": arr.shape[0],
            "samples": "16-bit big-endian, linear map from [min, max]",
            "row_order": "increasing y",
        },
    )
    return [path, sidecar]
