"""Teslameter probe-offset calibration and field bookkeeping.

The probe sits below the resonator, so readings there (``b_low``) are mapped
to the field at the sample (``b_samp``) by an affine law in Gauss.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError

GAUSS_PER_MT = 10.0
#: Reporting grid for field uncertainties, mT.
UNCERTAINTY_STEP = 0.01
SCAN_WIDTH = 1.0


@dataclass(frozen=True)
class CalibrationModel:
    offset_in: float = 24.468  # G
    scale: float = 1.01886
    offset_out: float = 26.83  # G

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.offset_in, self.scale, self.offset_out)):
            raise InvalidInputError("calibration constants must be finite")
        if self.scale <= 0:
            raise InvalidInputError("calibration scale must be positive")


DEFAULT_CALIBRATION = CalibrationModel()


def _finite(x):
    if not math.isfinite(x):
        raise InvalidInputError(f"non-finite field value: {x!r}")


def calibrate_field(b_low, model: CalibrationModel = DEFAULT_CALIBRATION) -> float:
    """Field at the sample (G) from the offset probe reading (G)."""
    _finite(b_low)
    return (b_low - model.offset_in) * model.scale + model.offset_out


def invert_calibration(b_samp, model: CalibrationModel = DEFAULT_CALIBRATION) -> float:
    """Probe reading (G) that corresponds to a field at the sample (G)."""
    _finite(b_samp)
    return (b_samp - model.offset_out) / model.scale + model.offset_in


def gauss_to_mt(b):
    return b / GAUSS_PER_MT


def mt_to_gauss(b):
    return b * GAUSS_PER_MT


def field_uncertainty(groups: Iterable[Sequence[float]]) -> float:
    """Largest per-hyperfine sample standard deviation, rounded up to 0.01 mT.

    Single-measurement groups contribute zero spread.
    """
    worst = 0.0
    n = 0
    for g in groups:
        vals = np.asarray(g, dtype=float)
        if vals.size == 0:
            raise InvalidInputError("each measurement group must be non-empty")
        if not np.all(np.isfinite(vals)):
            raise InvalidInputError("measurements must be finite")
        n += 1
        if vals.size > 1:
            worst = max(worst, float(np.std(vals, ddof=1)))
    if n == 0:
        raise InvalidInputError("no measurement groups given")
    # round before ceil so 0.02000000000000001 stays on 0.02
    steps = math.ceil(round(worst / UNCERTAINTY_STEP, 9))
    return steps * UNCERTAINTY_STEP


def scan_window(b_estimate, width: float = SCAN_WIDTH) -> tuple[float, float]:
    """Field interval (mT) centred on an EPR estimate to search for masing."""
    _finite(b_estimate)
    if b_estimate <= 0:
        raise InvalidInputError("field estimate must be positive")
    return (b_estimate - width / 2.0, b_estimate + width / 2.0)
