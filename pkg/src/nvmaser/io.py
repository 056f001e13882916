"""CSV ingestion and deterministic JSON/CSV emission."""
from __future__ import annotations

import csv
import json
import math
import os
from typing import Iterable

import numpy as np

from .errors import InvalidInputError
from .resonator import FieldMap, S11Trace
from .threshold import PumpSweep, SweepPoint

S11_HEADER = ("freq_hz", "re", "im")
FIELDMAP_HEADER = ("r_mm", "z_mm", "h2")
SWEEP_HEADER = ("pump_mw", "peak_dbm", "detected")
FIELD_SWEEP_HEADER = ("theta_deg", "field_mt")


def _read_rows(path, header):
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                first = next(reader)
            except StopIteration:
                raise InvalidInputError(f"{path}: empty file") from None
            got = tuple(c.strip() for c in first)
            if got != header:
                raise InvalidInputError(f"{path}: expected header {','.join(header)}, got {','.join(got)}")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != len(header):
                    raise InvalidInputError(f"{path}:{lineno}: expected {len(header)} columns")
                rows.append([c.strip() for c in row])
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InvalidInputError(f"{path}: no data rows")
    return rows


def _num(text, where):
    try:
        v = float(text)
    except ValueError:
        raise InvalidInputError(f"{where}: not a number: {text!r}") from None
    return v


def read_s11(path) -> S11Trace:
    rows = _read_rows(path, S11_HEADER)
    data = np.array([[_num(c, path) for c in r] for r in rows])
    return S11Trace(data[:, 0], data[:, 1] + 1j * data[:, 2])


def read_field_map(path) -> FieldMap:
    rows = _read_rows(path, FIELDMAP_HEADER)
    data = np.array([[_num(c, path) for c in r] for r in rows])
    return FieldMap.from_samples(data[:, 0], data[:, 1], data[:, 2])


def read_pump_sweep(path) -> PumpSweep:
    points = []
    for r in _read_rows(path, SWEEP_HEADER):
        if r[2] not in ("0", "1"):
            raise InvalidInputError(f"{path}: detected must be 0 or 1, got {r[2]!r}")
        points.append(SweepPoint(_num(r[0], path), _num(r[1], path), r[2] == "1"))
    return PumpSweep(points)


def write_field_sweep(rows: Iterable[tuple[float, float]], fh) -> None:
    fh.write(",".join(FIELD_SWEEP_HEADER) + "\n")
    for theta, b in rows:
        fh.write(f"{theta:.2f},{b:.2f}\n")


def read_field_sweep(path) -> list[tuple[float, float]]:
    return [(_num(a, path), _num(b, path)) for a, b in _read_rows(path, FIELD_SWEEP_HEADER)]


# --- JSON -------------------------------------------------------------------
# Decimal places by key suffix; anything else gets 4 significant figures.
_DECIMALS = {"_mt": 2, "_mhz": 1, "_deg": 2, "_hz": 0}


def sig_figs(v: float, n: int = 4) -> str:
    if v == 0:
        return "0"
    digits = n - 1 - math.floor(math.log10(abs(v)))
    if digits > 0:
        return f"{v:.{digits}f}"
    return str(int(round(v, digits)))


def format_number(key: str, v: float) -> str:
    if not math.isfinite(v):
        raise InvalidInputError(f"cannot emit non-finite value for {key}")
    for suffix, places in _DECIMALS.items():
        if key.endswith(suffix):
            return f"{v:.{places}f}" if places else str(int(round(v)))
    return sig_figs(v)


def dumps(obj, key: str = "", indent: int = 0) -> str:
    """JSON text with insertion-ordered keys and unit-aware number formatting."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}"{k}": {dumps(v, k, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if any(isinstance(v, (dict, list, tuple)) for v in obj):
            items = [pad + dumps(v, key, indent + 1) for v in obj]
            return "[\n" + ",\n".join(items) + "\n" + end + "]"
        return "[" + ", ".join(dumps(v, key, indent + 1) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    return format_number(key, float(obj))


def write_text(path: str | os.PathLike | None, text: str, stream) -> None:
    if path is None:
        stream.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)
