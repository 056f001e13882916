"""Masing threshold from pump sweeps and the empirical operating envelope."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidInputError, NegativeInterceptError, NoInversionError
from .geometry import fold_theta


@dataclass(frozen=True)
class SweepPoint:
    pump_mw: float
    output_dbm: float
    detected: bool


@dataclass(frozen=True)
class PumpSweep:
    points: tuple[SweepPoint, ...]

    def __init__(self, points: Iterable[SweepPoint | tuple]):
        pts = tuple(p if isinstance(p, SweepPoint) else SweepPoint(*p) for p in points)
        if not pts:
            raise InvalidInputError("pump sweep is empty")
        for p in pts:
            if not (math.isfinite(p.pump_mw) and p.pump_mw > 0):
                raise InvalidInputError(f"pump power must be positive, got {p.pump_mw!r}")
            if p.detected and not math.isfinite(p.output_dbm):
                raise InvalidInputError("detected points need a finite output power")
        object.__setattr__(self, "points", pts)

    def detected(self) -> tuple[SweepPoint, ...]:
        return tuple(p for p in self.points if p.detected)


@dataclass(frozen=True)
class ThresholdFit:
    threshold: float  # mW pump
    slope: float  # mW out per mW pump
    residual: float  # rms, mW out
    n_points: int


def dbm_to_mw(dbm):
    return 10.0 ** (np.asarray(dbm, dtype=float) / 10.0)


def mw_to_dbm(mw):
    return 10.0 * np.log10(np.asarray(mw, dtype=float))


def fit_threshold(sweep: PumpSweep) -> ThresholdFit:
    """Straight line through detected output (linear mW) vs pump; x-intercept."""
    pts = sweep.detected()
    if len(pts) < 2:
        raise NoInversionError(f"need >= 2 points with masing, got {len(pts)}")
    pump = np.array([p.pump_mw for p in pts])
    out = dbm_to_mw([p.output_dbm for p in pts])
    if np.ptp(pump) == 0:
        raise NoInversionError("detected points share a single pump power")
    slope, intercept = np.polyfit(pump, out, 1)
    if not slope > 0:
        raise NegativeInterceptError(f"output does not grow with pump (slope {slope:.3g})")
    threshold = -intercept / slope
    if not threshold > 0:
        raise NegativeInterceptError(
            f"fit extrapolates to a threshold of {threshold:.4g} mW"
        )
    resid = out - (slope * pump + intercept)
    return ThresholdFit(
        threshold=float(threshold),
        slope=float(slope),
        residual=float(np.sqrt(np.mean(resid**2))),
        n_points=len(pts),
    )


@dataclass(frozen=True)
class FeasibilityEnvelope:
    """Operating window of the 4.5 ppm sample; all bounds configurable."""

    threshold_mw: float = 475.0
    quench_mw: float = 3700.0
    max_theta_deg: float = 18.0
    q_recommended: float = 25000.0
    q_demonstrated: float = 21800.0
    pump_demonstrated_mw: float = 2200.0

    def __post_init__(self):
        vals = (
            self.threshold_mw,
            self.quench_mw,
            self.max_theta_deg,
            self.q_recommended,
            self.q_demonstrated,
            self.pump_demonstrated_mw,
        )
        if not all(math.isfinite(v) and v > 0 for v in vals):
            raise InvalidInputError("envelope bounds must be positive and finite")
        if self.quench_mw <= self.threshold_mw:
            raise InvalidInputError("quench power must exceed the threshold")


@dataclass(frozen=True)
class Check:
    name: str
    bound: float
    actual: float
    passed: bool
    hard: bool


@dataclass(frozen=True)
class FeasibilityReport:
    verdict: bool
    checks: tuple[Check, ...]

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if c.hard and not c.passed]


def check_feasibility(
    pump, theta, q_loaded, envelope: FeasibilityEnvelope = FeasibilityEnvelope()
) -> FeasibilityReport:
    """Compare an operating point with the empirical masing window.

    Only the pump window and the angle are gating; the Q_L and demonstrated
    pump checks are advisory.
    """
    for v in (pump, theta, q_loaded):
        if not math.isfinite(v):
            raise InvalidInputError(f"non-finite input: {v!r}")
    if pump <= 0 or q_loaded <= 0:
        raise InvalidInputError("pump and q_loaded must be positive")
    env = envelope
    folded = fold_theta(theta)
    checks = (
        Check("pump_above_threshold", env.threshold_mw, pump, pump >= env.threshold_mw, True),
        Check("pump_below_quench", env.quench_mw, pump, pump < env.quench_mw, True),
        Check("misalignment", env.max_theta_deg, folded, folded <= env.max_theta_deg, True),
        Check("q_recommended", env.q_recommended, q_loaded, q_loaded >= env.q_recommended, False),
        Check("q_demonstrated", env.q_demonstrated, q_loaded, q_loaded >= env.q_demonstrated, False),
        Check(
            "pump_demonstrated",
            env.pump_demonstrated_mw,
            pump,
            pump <= env.pump_demonstrated_mw,
            False,
        ),
    )
    return FeasibilityReport(all(c.passed for c in checks if c.hard), checks)


def scale_threshold(p_th_ref, fom_ref, fom_new) -> float:
    """Threshold for a resonator with a different Q_L/V_mode, taking P_th ~ 1/FOM."""
    if not (p_th_ref > 0 and fom_ref > 0 and fom_new > 0):
        raise InvalidInputError("threshold scaling needs positive inputs")
    return p_th_ref * fom_ref / fom_new
