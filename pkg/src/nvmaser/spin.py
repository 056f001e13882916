"""Ground-state triplet of the NV- centre in a tilted dc field.

Energies come from the 3x3 real-symmetric matrix

    H = D Sz^2 + gamma B (cos(theta) Sz + sin(theta) Sx)

in MHz, with the field in the plane containing the NV axis. Levels carry the
zero-field label they have at theta = 0 and the same field; since the
spectrum does not cross for theta != 0, labelling by rank is equivalent to
following each level adiabatically in theta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .errors import InconsistentDataError, InvalidInputError, NoRootError
from .geometry import FOLD_MAX, fold_theta

#: mu_B / h in MHz per mT.
BOHR_MHZ_PER_MT = 13.9962
FREE_ELECTRON_G = 2.0023

#: EPR maximum-splitting pair at 9570.5 MHz used to pin D.
REFERENCE_EPR_FREQ = 9570.5
REFERENCE_EPR_FIELDS = (239.0, 444.0)
#: Left-centre and centre-right 14N hyperfine separations, mT.
HYPERFINE_SPACINGS = (0.06, 0.07)
#: Largest inconsistency between the EPR midpoint and f_ref, MHz.
MAX_REFERENCE_RESIDUAL = 5.0

Branch = Literal["upper", "lower"]
BRANCHES = ("upper", "lower")

_SZ = np.diag([1.0, 0.0, -1.0])
_SX = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]]) / math.sqrt(2.0)
_SZ2 = _SZ @ _SZ


def _finite(*values):
    for v in values:
        if not math.isfinite(v):
            raise InvalidInputError(f"non-finite input: {v!r}")


def gyromagnetic_ratio(g_factor: float) -> float:
    """Electron gyromagnetic ratio in MHz/mT."""
    return g_factor * BOHR_MHZ_PER_MT


class ZeroFieldSplitting(NamedTuple):
    d_zfs: float
    residual: float


def derive_zero_field_splitting(f_ref, b_low, b_high, g_factor=FREE_ELECTRON_G):
    """D from the aligned low/high-field EPR pair at frequency ``f_ref``.

    At alignment the two lines sit at (f - D)/gamma and (f + D)/gamma, so half
    their separation gives D and their midpoint should reproduce f_ref. The
    mismatch of the latter is returned as ``residual`` (MHz).
    """
    _finite(f_ref, b_low, b_high, g_factor)
    if not (b_low > 0 and b_high >= b_low):
        raise InvalidInputError("need b_high >= b_low > 0")
    if f_ref <= 0 or g_factor <= 0:
        raise InvalidInputError("f_ref and g_factor must be positive")
    gamma = gyromagnetic_ratio(g_factor)
    d = gamma * (b_high - b_low) / 2.0
    residual = abs(gamma * (b_high + b_low) / 2.0 - f_ref)
    if residual > MAX_REFERENCE_RESIDUAL:
        raise InconsistentDataError(
            f"EPR midpoint misses f_ref by {residual:.3f} MHz "
            f"(limit {MAX_REFERENCE_RESIDUAL} MHz)"
        )
    return ZeroFieldSplitting(d, residual)


DEFAULT_D_ZFS = derive_zero_field_splitting(
    REFERENCE_EPR_FREQ, *REFERENCE_EPR_FIELDS, FREE_ELECTRON_G
).d_zfs


@dataclass(frozen=True)
class SpinParams:
    d_zfs: float = DEFAULT_D_ZFS
    g_factor: float = FREE_ELECTRON_G
    hyperfine_spacings: tuple[float, float] = HYPERFINE_SPACINGS

    def __post_init__(self):
        _finite(self.d_zfs, self.g_factor, *self.hyperfine_spacings)
        if self.d_zfs <= 0:
            raise InvalidInputError("d_zfs must be positive")
        if not 1.9 <= self.g_factor <= 2.1:
            raise InvalidInputError("g_factor must lie in [1.9, 2.1]")
        spacings = tuple(float(s) for s in self.hyperfine_spacings)
        if len(spacings) != 2 or min(spacings) < 0:
            raise InvalidInputError("hyperfine_spacings must be two offsets >= 0")
        object.__setattr__(self, "hyperfine_spacings", spacings)

    @property
    def gamma(self) -> float:
        return gyromagnetic_ratio(self.g_factor)


DEFAULT_PARAMS = SpinParams()


@dataclass(frozen=True)
class TripletLevels:
    energies: tuple[float, float, float]  # ascending, MHz
    labels: tuple[int, int, int]  # m_s character of each energy

    def energy(self, ms: int) -> float:
        return self.energies[self.labels.index(ms)]


@dataclass(frozen=True)
class Transition:
    branch: str
    frequency: float
    field: float
    theta: float


def hamiltonian(b_field, theta, params: SpinParams = DEFAULT_PARAMS) -> np.ndarray:
    """Triplet energy matrix (MHz); broadcasts over array-valued field/angle."""
    b = np.asarray(b_field, dtype=float)[..., None, None]
    t = np.radians(np.asarray(theta, dtype=float))[..., None, None]
    zeeman = params.gamma * b * (np.cos(t) * _SZ + np.sin(t) * _SX)
    return params.d_zfs * _SZ2 + zeeman


def _labels(b_field, params):
    # theta = 0 ordering: |0> = 0, |-1> = D - gamma B, |+1> = D + gamma B
    if params.gamma * b_field < params.d_zfs:
        return (0, -1, 1)
    return (-1, 0, 1)


def triplet_levels(b_field, theta, params: SpinParams = DEFAULT_PARAMS) -> TripletLevels:
    _finite(b_field, theta)
    if b_field < 0:
        raise InvalidInputError("b_field must be >= 0")
    energies = np.linalg.eigvalsh(hamiltonian(b_field, theta, params))
    return TripletLevels(tuple(float(e) for e in energies), _labels(b_field, params))


def _branch_frequency(energies, b_field, branch, params):
    """Vectorised branch frequency from sorted eigenvalues (..., 3)."""
    e = np.asarray(energies)
    if branch == "upper":
        # |-1> and |0> are always the two lowest levels
        return e[..., 1] - e[..., 0]
    high_field = params.gamma * np.asarray(b_field) >= params.d_zfs
    return np.where(high_field, e[..., 2] - e[..., 1], e[..., 2] - e[..., 0])


def transition_frequencies(
    b_field, theta, params: SpinParams = DEFAULT_PARAMS
) -> tuple[Transition, Transition]:
    """(upper, lower): |0> <-> |-1> and |0> <-> |+1> frequencies in MHz."""
    levels = triplet_levels(b_field, theta, params)
    upper = abs(levels.energy(-1) - levels.energy(0))
    lower = levels.energy(1) - levels.energy(0)
    return (
        Transition("upper", upper, float(b_field), float(theta)),
        Transition("lower", lower, float(b_field), float(theta)),
    )


def branch_frequency(b_field, theta, branch: Branch, params=DEFAULT_PARAMS) -> float:
    t = transition_frequencies(b_field, theta, params)
    return t[BRANCHES.index(branch)].frequency


def _check_branch(branch):
    if branch not in BRANCHES:
        raise InvalidInputError(f"branch must be one of {BRANCHES}, got {branch!r}")


def resonance_field(
    f_target,
    theta,
    branch: Branch = "upper",
    params: SpinParams = DEFAULT_PARAMS,
    *,
    fold: bool = True,
    tol: float = 1e-4,
    scan_points: int = 400,
) -> float:
    """Field (mT) at which ``branch`` is resonant with ``f_target`` (MHz).

    By default theta is measured from one in-plane NV axis of the plate and
    folded onto the nearest axis, which is the one giving the highest-field
    line. ``fold=False`` treats theta as the angle to a single NV axis.

    The branch is scanned on [0, 1.2 (f + D)/gamma]; the highest-field sign
    change is refined by bisection to well below ``tol``. Brackets that hide
    a label jump rather than a root are discarded.
    """
    _finite(f_target, theta)
    _check_branch(branch)
    if f_target <= 0:
        raise InvalidInputError("f_target must be positive")
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    t = fold_theta(theta) if fold else float(theta)

    b_max = 1.2 * (f_target + params.d_zfs) / params.gamma
    grid = np.linspace(0.0, b_max, scan_points + 1)
    energies = np.linalg.eigvalsh(hamiltonian(grid, t, params))
    resid = _branch_frequency(energies, grid, branch, params) - f_target
    sign_change = np.flatnonzero(resid[:-1] * resid[1:] <= 0.0)

    def g(b):
        e = np.linalg.eigvalsh(hamiltonian(b, t, params))
        return float(_branch_frequency(e, b, branch, params)) - f_target

    # a label jump also flips the sign; only true roots get this close
    accept = 1e-4
    for i in sign_change[::-1]:
        lo, hi = grid[i], grid[i + 1]
        g_lo = resid[i]
        if g_lo == 0.0:
            return float(lo)
        if resid[i + 1] == 0.0:
            return float(hi)
        while hi - lo > min(tol, 1.0) * 1e-6:
            mid = 0.5 * (lo + hi)
            g_mid = g(mid)
            if g_mid == 0.0:
                lo = hi = mid
                break
            if (g_mid < 0) == (g_lo < 0):
                lo, g_lo = mid, g_mid
            else:
                hi = mid
        root = 0.5 * (lo + hi)
        if abs(g(root)) <= accept:
            return float(root)
    raise NoRootError(
        f"{branch} branch never reaches {f_target} MHz at theta={t:.3f} deg "
        f"for B in [0, {b_max:.1f}] mT"
    )


def theta_from_field(
    b_field,
    f_target,
    branch: Branch = "upper",
    params: SpinParams = DEFAULT_PARAMS,
    *,
    tol: float = 1e-6,
) -> float:
    """Folded misalignment (deg, 0..35.25) putting the resonance at ``b_field``.

    Inverts :func:`resonance_field` by bisection on the folded range, where
    the upper-branch field falls monotonically with angle.
    """
    _finite(b_field, f_target)

    def g(t):
        return resonance_field(f_target, t, branch, params) - b_field

    lo, hi = 0.0, FOLD_MAX
    g_lo, g_hi = g(lo), g(hi)
    if g_lo * g_hi > 0:
        raise NoRootError(
            f"field {b_field} mT lies outside the attainable range "
            f"[{min(g_lo, g_hi) + b_field:.2f}, {max(g_lo, g_hi) + b_field:.2f}] mT"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if (g_mid < 0) == (g_lo < 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def zeeman_center_field(f, g_factor=FREE_ELECTRON_G) -> float:
    """Free-spin resonance field hf/(g mu_B), mT."""
    _finite(f, g_factor)
    if f <= 0 or g_factor <= 0:
        raise InvalidInputError("frequency and g_factor must be positive")
    return f / gyromagnetic_ratio(g_factor)


def hyperfine_fields(b_center, params: SpinParams = DEFAULT_PARAMS):
    """Left, centre and right 14N hyperfine line positions, mT."""
    _finite(b_center)
    if b_center <= 0:
        raise InvalidInputError("b_center must be positive")
    left, right = params.hyperfine_spacings
    return (b_center - left, float(b_center), b_center + right)
