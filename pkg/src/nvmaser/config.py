"""Run configuration: JSON document overriding model constants.

Layout (every section and key optional)::

    {
      "spin": {"d_zfs_mhz": 2872.5, "g_factor": 2.0023,
               "hyperfine_spacings_mt": [0.06, 0.07]},
      "feasibility": {"threshold_mw": 475, "quench_mw": 3700,
                      "max_theta_deg": 18, "q_recommended": 25000,
                      "q_demonstrated": 21800, "pump_demonstrated_mw": 2200},
      "calibration": {"offset_in_gauss": 24.468, "scale": 1.01886,
                      "offset_out_gauss": 26.83},
      "solver": {"field_tol_mt": 1e-4}
    }
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from .calibration import CalibrationModel
from .errors import InvalidInputError
from .spin import SpinParams
from .threshold import FeasibilityEnvelope

CONFIG_FILENAME = "nvmaser.json"
CONFIG_ENV = "NVMASER_CONFIG"

# section -> {json key: constructor keyword}
_SCHEMA = {
    "spin": {
        "d_zfs_mhz": "d_zfs",
        "g_factor": "g_factor",
        "hyperfine_spacings_mt": "hyperfine_spacings",
    },
    "feasibility": {
        "threshold_mw": "threshold_mw",
        "quench_mw": "quench_mw",
        "max_theta_deg": "max_theta_deg",
        "q_recommended": "q_recommended",
        "q_demonstrated": "q_demonstrated",
        "pump_demonstrated_mw": "pump_demonstrated_mw",
    },
    "calibration": {
        "offset_in_gauss": "offset_in",
        "scale": "scale",
        "offset_out_gauss": "offset_out",
    },
    "solver": {"field_tol_mt": "field_tol"},
}


@dataclass(frozen=True)
class RunConfig:
    spin: SpinParams = field(default_factory=SpinParams)
    feasibility: FeasibilityEnvelope = field(default_factory=FeasibilityEnvelope)
    calibration: CalibrationModel = field(default_factory=CalibrationModel)
    field_tol: float = 1e-4

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise InvalidInputError("configuration must be a JSON object")
        unknown = set(doc) - set(_SCHEMA)
        if unknown:
            raise InvalidInputError(f"unknown config section(s): {sorted(unknown)}")
        kwargs = {}
        for section, keys in _SCHEMA.items():
            body = doc.get(section, {})
            if not isinstance(body, dict):
                raise InvalidInputError(f"config section {section!r} must be an object")
            bad = set(body) - set(keys)
            if bad:
                raise InvalidInputError(f"unknown key(s) in {section!r}: {sorted(bad)}")
            for k, v in body.items():
                _check_value(f"{section}.{k}", v)
            kwargs[section] = {keys[k]: v for k, v in body.items()}

        spin_kw = kwargs["spin"]
        if "hyperfine_spacings" in spin_kw:
            spin_kw["hyperfine_spacings"] = tuple(spin_kw["hyperfine_spacings"])
        tol = kwargs["solver"].get("field_tol", 1e-4)
        if isinstance(tol, list) or not tol > 0:
            raise InvalidInputError("solver.field_tol_mt must be positive")
        return cls(
            spin=SpinParams(**spin_kw),
            feasibility=FeasibilityEnvelope(**kwargs["feasibility"]),
            calibration=CalibrationModel(**kwargs["calibration"]),
            field_tol=float(tol),
        )


def _check_value(name, v):
    items = v if isinstance(v, list) else [v]
    for x in items:
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
            raise InvalidInputError(f"config value {name} must be numeric, got {x!r}")


def load_config(path: str | os.PathLike | None = None, cwd: str | os.PathLike | None = None) -> RunConfig:
    """Explicit path, else ./nvmaser.json, else $NVMASER_CONFIG, else defaults."""
    if path is None:
        local = Path(cwd or Path.cwd()) / CONFIG_FILENAME
        if local.is_file():
            path = local
        elif os.environ.get(CONFIG_ENV):
            path = os.environ[CONFIG_ENV]
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInputError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"config {path} is not valid JSON: {exc}") from exc
    return RunConfig.from_dict(doc)
