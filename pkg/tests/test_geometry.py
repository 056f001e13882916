import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nvmaser.errors import InvalidInputError
from nvmaser.geometry import (
    ALIGNMENT_ROTATION,
    FOLD_MAX,
    MountState,
    acute_angle,
    fold_theta,
    misalignment,
    nv_axes,
    theta_from_phi,
)
from nvmaser.spin import resonance_field

from oracles import mount_angles


def test_axes_unit_and_tetrahedral():
    axes = nv_axes()
    assert np.allclose(np.linalg.norm(axes.axes, axis=1), 1.0, atol=1e-12)
    ang = axes.pairwise_angles()
    for i, j in itertools.combinations(range(4), 2):
        assert ang[i, j] == pytest.approx(109.4712206, abs=1e-6)
        assert round(ang[i, j], 1) == 109.5


def test_antiparallel_folds_to_zero():
    a = nv_axes().axes[0]
    assert acute_angle(a, -a) == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize("phi, theta", [(44, -10), (39, -15), (36, -18), (30, -24), (54, 0)])
def test_theta_from_phi(phi, theta):
    assert theta_from_phi(phi) == theta


@pytest.mark.parametrize("theta, folded", [(-35.25, 35.25), (0.0, 0.0), (-40.0, 30.5), (70.5, 0.0)])
def test_fold_examples(theta, folded):
    assert fold_theta(theta) == pytest.approx(folded, abs=1e-12)


@given(st.floats(-1e4, 1e4))
def test_fold_range_even_periodic(t):
    f = fold_theta(t)
    assert 0.0 <= f <= FOLD_MAX
    assert fold_theta(-t) == f
    assert fold_theta(t + 70.5) == pytest.approx(f, abs=1e-9)


def test_fold_rejects_nan():
    with pytest.raises(InvalidInputError):
        fold_theta(math.nan)


@pytest.mark.parametrize("a, b", [(10.0, 60.5), (-20.0, 50.5), (5.0, -75.5), (18.0, 88.5)])
def test_resonance_depends_only_on_fold(a, b):
    assert fold_theta(a) == pytest.approx(fold_theta(b))
    assert resonance_field(9648.0, a) == pytest.approx(resonance_field(9648.0, b), abs=1e-6)


class TestMount:
    def test_ideal_rotation_aligns(self):
        res = misalignment(MountState(w_axis_rotation=ALIGNMENT_ROTATION))
        assert res.theta_min == pytest.approx(0.0, abs=1e-3)
        assert ALIGNMENT_ROTATION == pytest.approx(109.4712206 / 2, abs=1e-6)

    def test_slant_facing_laser_matches_rotation_oracle(self):
        res = misalignment(MountState(w_axis_rotation=0.0))
        ref = mount_angles(45.0, 0.0)
        assert sorted(res.per_axis_angles) == pytest.approx(sorted(ref), abs=1e-9)
        # every <111> makes arccos(1/sqrt 3) with the <100> that ends up on the field
        assert res.theta_min == pytest.approx(math.degrees(math.acos(1 / math.sqrt(3))), abs=1e-9)

    @pytest.mark.parametrize("rot", [-30.0, 12.5, 45.0, 54.0, 170.0])
    @pytest.mark.parametrize("slant", [30.0, 45.0, 60.0])
    def test_against_oracle(self, slant, rot):
        res = misalignment(MountState(wedge_slant=slant, w_axis_rotation=rot))
        assert list(res.per_axis_angles) == pytest.approx(mount_angles(slant, rot), abs=1e-9)

    def test_45_degree_procedure_residual(self):
        assert misalignment(MountState(w_axis_rotation=45.0)).theta_min == pytest.approx(
            ALIGNMENT_ROTATION - 45.0, abs=1e-9
        )

    @settings(max_examples=50)
    @given(st.floats(-360, 360), st.floats(1, 89))
    def test_field_reversal_invariant(self, rot, slant):
        a = misalignment(MountState(wedge_slant=slant, w_axis_rotation=rot))
        b = misalignment(MountState(wedge_slant=slant, w_axis_rotation=rot, field_direction=(0, 0, -1)))
        assert a.per_axis_angles == pytest.approx(b.per_axis_angles, abs=1e-9)

    @settings(max_examples=50)
    @given(st.floats(-360, 360))
    def test_half_turn_about_w_axis(self, rot):
        a = misalignment(MountState(w_axis_rotation=rot))
        b = misalignment(MountState(w_axis_rotation=rot + 180.0))
        assert sorted(a.per_axis_angles) == pytest.approx(sorted(b.per_axis_angles), abs=1e-9)

    @settings(max_examples=50)
    @given(st.floats(-360, 360), st.floats(-180, 180))
    def test_angles_acute(self, rot, az):
        res = misalignment(MountState(w_axis_rotation=rot, plate_azimuth=az))
        assert all(0.0 <= a <= 90.0 for a in res.per_axis_angles)
        assert res.theta_min == min(res.per_axis_angles)

    def test_field_direction_normalised(self):
        m = MountState(field_direction=(0, 0, 5))
        assert m.field_direction == (0.0, 0.0, 1.0)

    @pytest.mark.parametrize(
        "kw", [{"wedge_slant": 0.0}, {"wedge_slant": 90.0}, {"field_direction": (0, 0, 0)},
               {"w_axis_rotation": math.inf}]
    )
    def test_invalid(self, kw):
        with pytest.raises(InvalidInputError):
            MountState(**kw)
