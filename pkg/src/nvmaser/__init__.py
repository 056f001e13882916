"""Modelling toolkit for the optically pumped NV- diamond maser."""
from .calibration import (
    CalibrationModel,
    calibrate_field,
    field_uncertainty,
    gauss_to_mt,
    invert_calibration,
    mt_to_gauss,
    scan_window,
)
from .errors import (
    ComputationError,
    DegenerateCircleError,
    InconsistentDataError,
    InvalidInputError,
    NegativeInterceptError,
    NoInversionError,
    NoRootError,
    OffResonanceError,
    ZeroFieldError,
)
from .geometry import (
    MisalignmentResult,
    MountState,
    NvAxisSet,
    fold_theta,
    misalignment,
    nv_axes,
    theta_from_phi,
)
from .resonator import (
    FieldMap,
    ModeVolumeResult,
    QCircleFit,
    S11Trace,
    bandwidth,
    fit_q_circle,
    hotspot,
    mode_volume,
    purcell_fom,
)
from .spin import (
    SpinParams,
    Transition,
    TripletLevels,
    derive_zero_field_splitting,
    hyperfine_fields,
    resonance_field,
    theta_from_field,
    transition_frequencies,
    triplet_levels,
    zeeman_center_field,
)
from .threshold import (
    FeasibilityEnvelope,
    FeasibilityReport,
    PumpSweep,
    ThresholdFit,
    check_feasibility,
    fit_threshold,
    scale_threshold,
)

__version__ = "0.1.0"
