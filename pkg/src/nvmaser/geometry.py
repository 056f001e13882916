"""Diamond plate, wedge mount and tetrahedral NV axis geometry.

Lab frame: the dc field points along +z, the wedge cylinder (W-axis) along +y
and the laser enters along x. With ``w_axis_rotation = 0`` the slanted face
looks at the laser, i.e. its normal lies in the x-y plane tilted
``wedge_slant`` away from the W-axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

#: Angle between any two NV axes, arccos(-1/3).
TETRAHEDRAL_ANGLE = math.degrees(math.acos(-1.0 / 3.0))
#: W-axis rotation that brings one in-plane axis onto the field, arctan(sqrt 2).
ALIGNMENT_ROTATION = math.degrees(math.atan(math.sqrt(2.0)))
#: Offset between the photographed plate edge angle and the NV misalignment.
PHI_OFFSET = 54.0
#: Angular distance between one in-plane axis and the other's reverse,
#: using the rounded 109.5 deg bond angle so that fold(-35.25) is the midpoint.
FOLD_PERIOD = 180.0 - 109.5
FOLD_MAX = FOLD_PERIOD / 2.0


@dataclass(frozen=True)
class NvAxisSet:
    axes: np.ndarray  # (4, 3) unit vectors, crystal frame

    def pairwise_angles(self) -> np.ndarray:
        cos = np.clip(self.axes @ self.axes.T, -1.0, 1.0)
        return np.degrees(np.arccos(cos))


def nv_axes() -> NvAxisSet:
    """The four <111> NV directions, normalised."""
    raw = np.array(
        [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
    )
    axes = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    axes.setflags(write=False)
    return NvAxisSet(axes)


def acute_angle(u, v) -> float:
    """Angle between two directions ignoring their sign, in degrees (0..90)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    c = abs(float(u @ v)) / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.degrees(math.acos(min(c, 1.0)))


def theta_from_phi(phi: float) -> float:
    """Misalignment theta from the photographed edge angle phi (degrees)."""
    return phi - PHI_OFFSET


def fold_theta(theta: float) -> float:
    """Misalignment from the nearest in-plane NV axis, in [0, 35.25] degrees.

    The two in-plane axes (and their reverses) repeat every FOLD_PERIOD
    degrees of rotation, so theta is folded onto half of that period.
    """
    if not math.isfinite(theta):
        raise InvalidInputError(f"theta must be finite, got {theta!r}")
    r = math.fmod(abs(theta), FOLD_PERIOD)
    return min(r, FOLD_PERIOD - r)


@dataclass(frozen=True)
class MountState:
    """Plate glued flat on the wedge slant, wedge turned about its axis.

    ``plate_azimuth`` turns the crystal about the plate normal before
    mounting. At 0 the plate edges run along <100>, so the <111> axes project
    onto the plate corners.
    """

    wedge_slant: float = 45.0
    w_axis_rotation: float = 0.0
    field_direction: tuple[float, float, float] = (0.0, 0.0, 1.0)
    plate_azimuth: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.wedge_slant < 90.0:
            raise InvalidInputError("wedge_slant must lie in (0, 90) degrees")
        vals = (self.w_axis_rotation, self.plate_azimuth, *self.field_direction)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidInputError("mount angles and field direction must be finite")
        b = np.asarray(self.field_direction, dtype=float)
        norm = float(np.linalg.norm(b))
        if b.shape != (3,) or norm == 0.0:
            raise InvalidInputError("field_direction must be a non-zero 3-vector")
        object.__setattr__(self, "field_direction", tuple(float(x) for x in b / norm))


@dataclass(frozen=True)
class MisalignmentResult:
    per_axis_angles: tuple[float, float, float, float]
    theta_min: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "theta_min", min(self.per_axis_angles))


def _rotation_y(deg: float) -> np.ndarray:
    a = math.radians(deg)
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def crystal_to_lab(mount: MountState) -> np.ndarray:
    """Rotation matrix taking crystal-frame vectors to the lab frame."""
    alpha = math.radians(mount.wedge_slant)
    psi = math.radians(mount.plate_azimuth)
    normal = np.array([0.0, 0.0, 1.0])  # <100> face normal
    edge = np.array([math.cos(psi), math.sin(psi), 0.0])
    # lab axes written in crystal coordinates, slant facing the laser
    w_axis = math.cos(alpha) * normal + math.sin(alpha) * edge
    x_axis = normal - (normal @ w_axis) * w_axis
    x_axis /= np.linalg.norm(x_axis)
    z_axis = np.cross(x_axis, w_axis)
    mount_matrix = np.vstack([x_axis, w_axis, z_axis])
    return _rotation_y(mount.w_axis_rotation) @ mount_matrix


def misalignment(mount: MountState) -> MisalignmentResult:
    """Acute angle of each NV axis to the dc field for a given mount."""
    lab_axes = nv_axes().axes @ crystal_to_lab(mount).T
    b = np.asarray(mount.field_direction)
    angles = tuple(acute_angle(a, b) for a in lab_axes)
    return MisalignmentResult(angles)
