import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nvmaser.errors import InvalidInputError, NegativeInterceptError, NoInversionError
from nvmaser.resonator import purcell_fom
from nvmaser.threshold import (
    FeasibilityEnvelope,
    PumpSweep,
    check_feasibility,
    fit_threshold,
    mw_to_dbm,
    scale_threshold,
)


def line_sweep(pumps, p_th=400.0, slope=0.005, undetected=()):
    pts = [(p, float(mw_to_dbm(slope * (p - p_th))), True) for p in pumps]
    pts += [(p, -120.0, False) for p in undetected]
    return PumpSweep(pts)


class TestFitThreshold:
    def test_exact_line(self):
        fit = fit_threshold(line_sweep([600, 1000, 1400]))
        assert fit.threshold == pytest.approx(400.0, abs=1e-9)
        assert fit.slope == pytest.approx(0.005, rel=1e-9)
        assert fit.residual < 1e-12
        assert fit.n_points == 3

    def test_undetected_points_ignored(self):
        fit = fit_threshold(line_sweep([600, 1000, 1400], undetected=[100, 300]))
        assert fit.threshold == pytest.approx(400.0, abs=1e-9)

    def test_no_inversion(self):
        sweep = PumpSweep([(500, -120, False), (800, -120, False)])
        with pytest.raises(NoInversionError):
            fit_threshold(sweep)

    def test_single_point(self):
        with pytest.raises(NoInversionError):
            fit_threshold(line_sweep([600]))

    def test_negative_intercept(self):
        # output already present at zero pump
        sweep = PumpSweep([(p, float(mw_to_dbm(1 + 0.01 * p)), True) for p in (100, 200, 300)])
        with pytest.raises(NegativeInterceptError):
            fit_threshold(sweep)

    def test_falling_output(self):
        sweep = PumpSweep([(p, float(mw_to_dbm(10 - 0.001 * p)), True) for p in (100, 200, 300)])
        with pytest.raises(NegativeInterceptError):
            fit_threshold(sweep)

    @settings(max_examples=50)
    @given(st.permutations([600.0, 800.0, 1000.0, 1400.0, 2000.0]), st.floats(1e-4, 1e4))
    def test_reorder_and_gain_invariant(self, pumps, gain):
        base = fit_threshold(line_sweep(pumps))
        scaled = PumpSweep(
            [(p, float(mw_to_dbm(gain * 0.005 * (p - 400))), True) for p in pumps]
        )
        assert fit_threshold(scaled).threshold == pytest.approx(base.threshold, rel=1e-9)

    def test_sweep_validation(self):
        with pytest.raises(InvalidInputError):
            PumpSweep([])
        with pytest.raises(InvalidInputError):
            PumpSweep([(0.0, -80, True)])


class TestFeasibility:
    def test_operating_point(self):
        rep = check_feasibility(1570, -18, 21800)
        assert rep.verdict
        assert rep.failed() == []

    def test_angle_too_large(self):
        rep = check_feasibility(1570, -24, 21800)
        assert not rep.verdict
        assert rep.failed() == ["misalignment"]

    def test_quench(self):
        rep = check_feasibility(3700, 0, 30000)
        assert not rep.verdict
        assert rep.failed() == ["pump_below_quench"]

    def test_below_threshold(self):
        assert check_feasibility(400, 0, 30000).failed() == ["pump_above_threshold"]

    def test_q_advisory_only(self):
        rep = check_feasibility(1570, 0, 10000)
        assert rep.verdict
        advisory = {c.name: c.passed for c in rep.checks if not c.hard}
        assert advisory == {"q_recommended": False, "q_demonstrated": False, "pump_demonstrated": True}

    def test_folded_angle(self):
        # 60 deg from one in-plane axis is 10.5 deg from the other
        assert check_feasibility(1570, 60, 21800).verdict

    def test_custom_envelope(self):
        env = FeasibilityEnvelope(max_theta_deg=25.0)
        assert check_feasibility(1570, -24, 21800, env).verdict

    @settings(max_examples=50)
    @given(st.floats(1.0, 474.9), st.floats(475.0, 3699.9), st.floats(-18, 18))
    def test_monotone_in_pump(self, low, high, theta):
        a = check_feasibility(low, theta, 21800)
        assert a.failed() == ["pump_above_threshold"]
        assert check_feasibility(high, theta, 21800).verdict

    def test_verdict_is_conjunction(self):
        for args in [(1570, -18, 21800), (100, -30, 1000), (5000, 0, 1e5)]:
            rep = check_feasibility(*args)
            assert rep.verdict == all(c.passed for c in rep.checks if c.hard)

    @pytest.mark.parametrize("args", [(0, 0, 21800), (1570, math.nan, 21800), (1570, 0, -1)])
    def test_invalid(self, args):
        with pytest.raises(InvalidInputError):
            check_feasibility(*args)

    def test_envelope_validation(self):
        with pytest.raises(InvalidInputError):
            FeasibilityEnvelope(quench_mw=400.0)


class TestScaleThreshold:
    def test_identity(self):
        assert scale_threshold(475, 1234.0, 1234.0) == 475

    def test_higher_q(self):
        got = scale_threshold(475, purcell_fom(21800, 0.18), purcell_fom(25000, 0.18))
        assert got == pytest.approx(414.2, abs=0.05)

    def test_no_wedge(self):
        got = scale_threshold(475, purcell_fom(21800, 0.18), purcell_fom(21800, 1.6))
        assert got == pytest.approx(4222.2, abs=0.1)

    @given(st.floats(1e-3, 1e4), st.floats(1e-3, 1e6), st.floats(1e-3, 1e6))
    def test_reciprocity(self, p, a, b):
        assert scale_threshold(p, a, b) * scale_threshold(1, b, a) == pytest.approx(p, rel=1e-12)

    def test_invalid(self):
        with pytest.raises(InvalidInputError):
            scale_threshold(475, 0, 1)
