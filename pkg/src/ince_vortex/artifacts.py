"""Deterministic writers for CSV, JSON and PGM outputs."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FLOAT_FMT = "%.17g"


def write_csv(path: Path, columns: dict[str, np.ndarray], fmt=FLOAT_FMT) -> Path:
    """Columns are flattened and written with a header and 17 significant digits."""
    names = list(columns)
    data = np.column_stack([np.ravel(np.asarray(columns[k])) for k in names])
    if isinstance(fmt, dict):
        fmt = [fmt.get(k, FLOAT_FMT) for k in names]
    np.savetxt(path, data, delimiter=",", header=",".join(names), comments="", fmt=fmt)
    return path


def write_rows(path: Path, header: list[str], rows: list[list]) -> Path:
    """CSV from mixed-type rows; floats use ``%.17g``."""
    def cell(v):
        if isinstance(v, float):
            return FLOAT_FMT % v
        return str(v)

    lines = [",".join(header)] + [",".join(cell(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def _default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_default, allow_nan=True) + "\n"


def write_json(path: Path, obj) -> Path:
    path.write_text(dumps(obj))
    return path


def write_pgm(path: Path, values: np.ndarray) -> Path:
    """8-bit binary PGM, linear scale normalized to the maximum.

    Row 0 of ``values`` is drawn at the bottom so that +y points up.
    """
    v = np.asarray(values, dtype=float)
    top = float(v.max())
    scaled = np.zeros(v.shape) if top <= 0 else np.clip(v / top, 0.0, 1.0)
    img = np.rint(255 * scaled).astype(np.uint8)[::-1]
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
    return path


def read_pgm(path: Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    parts = raw.split(maxsplit=4)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = int(parts[1]), int(parts[2])
    return np.frombuffer(parts[4], dtype=np.uint8, count=w * h).reshape(h, w)
