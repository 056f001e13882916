"""Command-line entry point: ``nvmaser <command> ...``.

Exit status is 0 on success, 1 for invalid input (bad flags, unreadable or
malformed files, bad configuration) and 2 when a computation fails (no
resonance root, degenerate Q-circle, no population inversion, ...).
"""
from __future__ import annotations

import argparse
import io as _stdio
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import calibration as cal
from . import geometry, io, resonator, spin, threshold
from .config import load_config
from .errors import ComputationError, InvalidInputError

EXIT_OK, EXIT_INPUT, EXIT_COMPUTE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _resonance(args, cfg):
    b = spin.resonance_field(
        args.freq_mhz, args.theta_deg, args.branch, cfg.spin, tol=cfg.field_tol
    )
    return {
        "freq_mhz": args.freq_mhz,
        "theta_deg": args.theta_deg,
        "theta_fold_deg": geometry.fold_theta(args.theta_deg),
        "branch": args.branch,
        "field_mt": b,
    }


def _sweep(args, cfg):
    if args.steps < 2:
        raise InvalidInputError("--steps must be at least 2")
    thetas = np.linspace(args.theta_from, args.theta_to, args.steps)

    def solve(t):
        return spin.resonance_field(args.freq_mhz, t, args.branch, cfg.spin, tol=cfg.field_tol)

    # pool.map keeps input order
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        fields = list(pool.map(solve, thetas))
    buf = _stdio.StringIO()
    io.write_field_sweep(zip(thetas, fields), buf)
    return buf.getvalue()


def _orient(args, cfg):
    theta = geometry.theta_from_phi(args.phi_deg)
    return {
        "phi_deg": args.phi_deg,
        "theta_deg": theta,
        "theta_fold_deg": geometry.fold_theta(theta),
    }


def _mount(args, cfg):
    mount = geometry.MountState(
        wedge_slant=args.slant_deg,
        w_axis_rotation=args.rotation_deg,
        plate_azimuth=args.azimuth_deg,
    )
    res = geometry.misalignment(mount)
    return {
        "rotation_deg": mount.w_axis_rotation,
        "wedge_slant_deg": mount.wedge_slant,
        "per_axis_deg": list(res.per_axis_angles),
        "theta_min_deg": res.theta_min,
    }


def _fit_q(args, cfg):
    fit = resonator.fit_q_circle(io.read_s11(args.input))
    return {
        "f0_hz": fit.f0,
        "f1_hz": fit.f1,
        "f2_hz": fit.f2,
        "bandwidth_khz": fit.bandwidth / 1e3,
        "q_loaded": fit.q_loaded,
        "coupling_beta": fit.coupling_beta,
        "regime": fit.regime,
    }


def _modevol(args, cfg):
    res = resonator.mode_volume(io.read_field_map(args.input))
    r, z = res.hotspot
    return {"v_mode_cm3": res.v_mode, "hotspot_r_mm": r, "hotspot_z_mm": z}


def _threshold(args, cfg):
    fit = threshold.fit_threshold(io.read_pump_sweep(args.input))
    return {
        "threshold_mw": fit.threshold,
        "slope_mw_per_mw": fit.slope,
        "residual_rms_mw": fit.residual,
        "n_detected": fit.n_points,
    }


def _feasible(args, cfg):
    rep = threshold.check_feasibility(args.pump_mw, args.theta_deg, args.q, cfg.feasibility)
    return {
        "verdict": rep.verdict,
        "checks": [
            {
                "name": c.name,
                "bound": c.bound,
                "actual": c.actual,
                "passed": c.passed,
                "hard": c.hard,
            }
            for c in rep.checks
        ],
    }


def _calibrate(args, cfg):
    x = args.b_low_gauss
    if args.invert:
        b_low = cal.invert_calibration(x, cfg.calibration)
        return {"b_samp_gauss": x, "b_low_gauss": b_low, "b_low_mt": cal.gauss_to_mt(b_low)}
    b_samp = cal.calibrate_field(x, cfg.calibration)
    return {"b_low_gauss": x, "b_samp_gauss": b_samp, "b_samp_mt": cal.gauss_to_mt(b_samp)}


def _hyperfine(args, cfg):
    fields = spin.hyperfine_fields(args.center_mt, cfg.spin)
    return {
        "center_mt": args.center_mt,
        "fields_mt": list(fields),
        "scan_window_mt": list(cal.scan_window(args.center_mt)),
    }


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nvmaser", description="NV- diamond maser modelling toolkit")
    p.add_argument("--config", help="JSON configuration file")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = cmd("resonance", _resonance, "resonance field for a frequency and misalignment")
    sp.add_argument("--freq-mhz", type=float, required=True)
    sp.add_argument("--theta-deg", type=float, required=True)
    sp.add_argument("--branch", choices=spin.BRANCHES, default="upper")

    sp = cmd("sweep", _sweep, "resonance field vs theta as CSV")
    sp.add_argument("--freq-mhz", type=float, required=True)
    sp.add_argument("--theta-from", type=float, required=True)
    sp.add_argument("--theta-to", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--branch", choices=spin.BRANCHES, default="upper")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--output", help="write CSV here instead of stdout")

    sp = cmd("orient", _orient, "misalignment theta from the photographed angle phi")
    sp.add_argument("--phi-deg", type=float, required=True)

    sp = cmd("mount", _mount, "NV axis angles to the field for a wedge rotation")
    sp.add_argument("--rotation-deg", type=float, required=True)
    sp.add_argument("--slant-deg", type=float, default=45.0)
    sp.add_argument("--azimuth-deg", type=float, default=0.0)

    sp = cmd("fit-q", _fit_q, "Q-circle fit of an S11 CSV (freq_hz,re,im)")
    sp.add_argument("--input", required=True)

    sp = cmd("modevol", _modevol, "mode volume of a field map CSV (r_mm,z_mm,h2)")
    sp.add_argument("--input", required=True)

    sp = cmd("threshold", _threshold, "threshold fit of a pump sweep CSV (pump_mw,peak_dbm,detected)")
    sp.add_argument("--input", required=True)

    sp = cmd("feasible", _feasible, "check an operating point against the masing envelope")
    sp.add_argument("--pump-mw", type=float, required=True)
    sp.add_argument("--theta-deg", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)

    sp = cmd("calibrate", _calibrate, "probe reading -> field at the sample (Gauss)")
    sp.add_argument("--b-low-gauss", type=float, required=True)
    sp.add_argument("--invert", action="store_true", help="treat the value as B_samp and invert")

    sp = cmd("hyperfine", _hyperfine, "three 14N hyperfine line positions")
    sp.add_argument("--center-mt", type=float, required=True)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        result = args.func(args, cfg)
        text = result if isinstance(result, str) else io.dumps(result) + "\n"
        io.write_text(getattr(args, "output", None), text, stdout)
    except ComputationError as exc:
        print(f"nvmaser: {exc}", file=stderr)
        return EXIT_COMPUTE
    except (InvalidInputError, ValueError, OSError) as exc:
        print(f"nvmaser: {exc}", file=stderr)
        return EXIT_INPUT
    return EXIT_OK


def main():
    sys.exit(run())
