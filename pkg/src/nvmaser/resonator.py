"""One-port resonator characterisation and axisymmetric mode volume."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import least_squares

from .errors import (
    DegenerateCircleError,
    InvalidInputError,
    OffResonanceError,
    ZeroFieldError,
)

MIN_TRACE_POINTS = 8
#: |beta - 1| below which the coupling is reported as critical.
CRITICAL_TOL = 1e-3


@dataclass(frozen=True)
class S11Trace:
    freq: np.ndarray  # Hz, strictly increasing
    reflection: np.ndarray  # complex, dimensionless

    def __post_init__(self):
        f = np.asarray(self.freq, dtype=float)
        g = np.asarray(self.reflection, dtype=complex)
        if f.ndim != 1 or f.shape != g.shape:
            raise InvalidInputError("freq and reflection must be 1-D and equal length")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(g))):
            raise InvalidInputError("trace contains non-finite samples")
        if np.any(np.diff(f) <= 0):
            raise InvalidInputError("frequencies must be strictly increasing")
        if np.any(np.abs(g) > 1 + 1e-6):
            raise InvalidInputError("|S11| exceeds 1 for a passive one-port")
        object.__setattr__(self, "freq", f)
        object.__setattr__(self, "reflection", g)

    def __len__(self):
        return len(self.freq)


@dataclass(frozen=True)
class QCircleFit:
    f0: float
    q_loaded: float
    coupling_beta: float
    f1: float
    f2: float
    regime: str

    @property
    def bandwidth(self) -> float:
        return self.f2 - self.f1


def classify_coupling(beta: float, tol: float = CRITICAL_TOL) -> str:
    if abs(beta - 1.0) <= tol:
        return "critical"
    return "undercoupled" if beta < 1.0 else "overcoupled"


def _fit_circle(z: np.ndarray):
    """Algebraic least-squares circle through complex points -> (centre, radius)."""
    x, y = z.real, z.imag
    # scale-aware rank check: a circle needs two independent directions
    spread = np.linalg.svd(np.column_stack([x - x.mean(), y - y.mean()]), compute_uv=False)
    scale = max(float(np.max(np.abs(z))), 1e-300)
    if spread[0] <= 1e-12 * scale * math.sqrt(len(z)):
        raise DegenerateCircleError("reflection is constant; no circle to fit")
    if spread[1] <= 1e-9 * spread[0]:
        raise DegenerateCircleError("reflection samples are collinear")
    # x^2 + y^2 + a x + b y + c = 0
    a_mat = np.column_stack([x, y, np.ones_like(x)])
    rhs = -(x**2 + y**2)
    (a, b, c), *_ = np.linalg.lstsq(a_mat, rhs, rcond=None)
    xc, yc = -a / 2.0, -b / 2.0
    r2 = xc**2 + yc**2 - c
    if not r2 > 0:
        raise DegenerateCircleError("circle fit produced an imaginary radius")
    return complex(xc, yc), math.sqrt(r2)


def _phase_model(p, x):
    theta0, q, x0 = p
    return theta0 - 2.0 * np.arctan(2.0 * q * (x - x0) / (1.0 + x0))


def fit_q_circle(trace: S11Trace, critical_tol: float = CRITICAL_TOL) -> QCircleFit:
    """Resonance parameters from the circular locus of S11.

    A circle is fitted to the complex samples; the angle of each sample seen
    from the centre then follows theta0 - 2 arctan(2 Q_L (f - f0)/f0), which is
    fitted for f0 and Q_L. The point opposite the resonance point is the
    detuned reflection Gamma_d; the diameter relative to |Gamma_d| equals
    2 beta/(1 + beta), giving the coupling coefficient. The half-power
    frequencies are f0 (1 -+ 1/(2 Q_L)).
    """
    if len(trace) < MIN_TRACE_POINTS:
        raise InvalidInputError(f"need at least {MIN_TRACE_POINTS} trace points")
    f, z = trace.freq, trace.reflection
    centre, radius = _fit_circle(z)

    f_ref = float(f[len(f) // 2])
    x = f / f_ref - 1.0
    phase = np.unwrap(np.angle(z - centre))
    if abs(phase[-1] - phase[0]) < math.pi / 2:
        raise OffResonanceError("trace covers too little of the resonance circle")

    # start at the steepest phase slope
    slope = np.gradient(phase, x)
    k = int(np.argmax(np.abs(slope)))
    q0 = max(abs(slope[k]) / 4.0, 1.0)
    guess = [phase[k], q0, x[k]]
    span = x[-1] - x[0]
    fit = least_squares(
        lambda p: _phase_model(p, x) - phase,
        guess,
        x_scale=[1.0, q0, 1.0 / q0],
        bounds=([-np.inf, 0.0, x[0] - span], [np.inf, np.inf, x[-1] + span]),
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
    )
    theta0, q_loaded, x0 = fit.x
    f0 = f_ref * (1.0 + x0)
    if not f[0] < f0 < f[-1]:
        raise OffResonanceError(
            f"fitted resonance {f0:.6g} Hz lies outside the trace "
            f"[{f[0]:.6g}, {f[-1]:.6g}] Hz"
        )

    detuned = centre - radius * np.exp(1j * theta0)
    diameter = 2.0 * radius / abs(detuned)
    if diameter >= 2.0:
        raise DegenerateCircleError("circle diameter exceeds the detuned reflection")
    beta = diameter / (2.0 - diameter)

    half_bw = f0 / (2.0 * q_loaded)
    return QCircleFit(
        f0=f0,
        q_loaded=float(q_loaded),
        coupling_beta=float(beta),
        f1=f0 - half_bw,
        f2=f0 + half_bw,
        regime=classify_coupling(beta, critical_tol),
    )


def one_port_reflection(freq, f0, q_loaded, beta, detuned=1.0 + 0j):
    """Reflection of a single-mode resonator seen through a coupling port."""
    x = 2.0 * q_loaded * (np.asarray(freq, dtype=float) - f0) / f0
    return detuned * (1.0 - (2.0 * beta / (1.0 + beta)) / (1.0 + 1j * x))


def bandwidth(f0, q_loaded) -> float:
    """Half-power bandwidth f0/Q_L, same unit as f0."""
    if not q_loaded > 0:
        raise InvalidInputError("q_loaded must be positive")
    return f0 / q_loaded


@dataclass(frozen=True)
class FieldMap:
    """|H|^2 on a rectangular (r, z) grid; ``h2[i, j]`` is at (r[j], z[i])."""

    r: np.ndarray  # mm, ascending
    z: np.ndarray  # mm, ascending
    h2: np.ndarray  # shape (len(z), len(r))

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        z = np.array(self.z, dtype=float)
        h2 = np.array(self.h2, dtype=float)
        if r.ndim != 1 or z.ndim != 1 or h2.shape != (z.size, r.size):
            raise InvalidInputError("h2 must have shape (len(z), len(r))")
        if r.size < 2 or z.size < 2:
            raise InvalidInputError("field map needs at least a 2x2 grid")
        if not (np.all(np.isfinite(h2)) and np.all(np.isfinite(r)) and np.all(np.isfinite(z))):
            raise InvalidInputError("field map contains non-finite values")
        if np.any(r < 0):
            raise InvalidInputError("radial coordinates must be >= 0")
        if np.any(np.diff(r) <= 0) or np.any(np.diff(z) <= 0):
            raise InvalidInputError("grid axes must be strictly increasing")
        if np.any(h2 < 0):
            raise InvalidInputError("|H|^2 must be >= 0")
        for name, arr in (("r", r), ("z", z), ("h2", h2)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_samples(cls, r, z, h2) -> "FieldMap":
        """Assemble a grid from flat (r, z, h2) samples in any order."""
        r = np.asarray(r, dtype=float)
        z = np.asarray(z, dtype=float)
        h2 = np.asarray(h2, dtype=float)
        if not (r.shape == z.shape == h2.shape) or r.ndim != 1:
            raise InvalidInputError("samples must be equal-length 1-D arrays")
        r_axis, ri = np.unique(r, return_inverse=True)
        z_axis, zi = np.unique(z, return_inverse=True)
        if r.size != r_axis.size * z_axis.size:
            raise InvalidInputError("samples do not form a complete rectangular grid")
        grid = np.full((z_axis.size, r_axis.size), np.nan)
        grid[zi, ri] = h2
        if np.any(np.isnan(grid)):
            raise InvalidInputError("duplicate or missing grid nodes in field map")
        return cls(r_axis, z_axis, grid)

    @property
    def domain_volume(self) -> float:
        """Volume of the revolved grid domain, cm^3."""
        return math.pi * (self.r[-1] ** 2 - self.r[0] ** 2) * (self.z[-1] - self.z[0]) / 1e3


@dataclass(frozen=True)
class ModeVolumeResult:
    v_mode: float  # cm^3
    hotspot: tuple[float, float]  # (r, z) mm


def hotspot(fmap: FieldMap) -> tuple[float, float]:
    """Grid node of largest |H|^2; ties go to smallest z, then smallest r."""
    if not fmap.h2.max() > 0:
        raise ZeroFieldError("field map is identically zero")
    # C-order argmax returns the first hit scanning z rows, then r
    i, j = np.unravel_index(int(np.argmax(fmap.h2)), fmap.h2.shape)
    return float(fmap.r[j]), float(fmap.z[i])


def mode_volume(fmap: FieldMap) -> ModeVolumeResult:
    """Integral of |H|^2 dV over the revolved grid divided by max |H|^2."""
    peak = float(fmap.h2.max())
    if not peak > 0:
        raise ZeroFieldError("field map is identically zero")
    radial = trapezoid(fmap.h2 * (2.0 * math.pi * fmap.r), fmap.r, axis=1)
    energy = trapezoid(radial, fmap.z)
    return ModeVolumeResult(energy / peak / 1e3, hotspot(fmap))


def purcell_fom(q_loaded, v_mode) -> float:
    """Relative Purcell figure of merit Q_L / V_mode, cm^-3."""
    if not (q_loaded > 0 and v_mode > 0):
        raise InvalidInputError("q_loaded and v_mode must be positive")
    return q_loaded / v_mode
