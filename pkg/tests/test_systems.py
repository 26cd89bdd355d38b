import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaoscope.errors import DomainError, UnknownPreset
from chaoscope.integrate import IntegratorConfig, integrate
from chaoscope.systems import (
    ChuaParams,
    HenonParams,
    Linear1DParams,
    LogisticParams,
    LorenzParams,
    PRESETS,
    chua_field,
    chua_g,
    chua_paper_code_field,
    henon_inverse,
    henon_step,
    linear_solution,
    logistic_step,
    lorenz_field,
    preset,
)


def test_logistic_step_values():
    assert logistic_step(LogisticParams(1.7), 0.0) == 0.0
    assert logistic_step(LogisticParams(2.0), 0.5) == 0.5
    assert logistic_step(LogisticParams(3.8282), 0.2) == 3.8282 * 0.2 * 0.8
    assert abs(logistic_step(LogisticParams(3.8282), 0.2) - 0.612512) < 1e-6


@given(mu=st.floats(0.0, 4.0), x=st.floats(0.0, 1.0))
def test_logistic_preserves_unit_interval(mu, x):
    assert 0.0 <= logistic_step(LogisticParams(mu), x) <= 1.0


def test_logistic_params_domain():
    with pytest.raises(DomainError):
        LogisticParams(4.5)
    with pytest.raises(DomainError):
        LogisticParams(-0.1)


def test_henon_step_values():
    p = HenonParams(1.2, 0.4)
    assert henon_step(p, (0.0, 0.0)) == (1.0, 0.0)
    x1, y1 = henon_step(p, (0.1, 0.0))
    assert x1 == 0.988
    assert y1 == 0.4 * 0.1
    degenerate = HenonParams(0.0, 0.0)
    assert henon_step(degenerate, (123.4, 0.5)) == (1.5, 0.0)


@settings(max_examples=100)
@given(
    a=st.floats(-2.0, 2.0),
    b=st.floats(0.1, 1.0),
    x=st.floats(-2.0, 2.0),
    y=st.floats(-2.0, 2.0),
)
def test_henon_inverse_roundtrip(a, b, x, y):
    p = HenonParams(a, b)
    fx, fy = henon_step(p, (x, y))
    rx, ry = henon_inverse(p, (fx, fy))
    assert abs(rx - x) <= 1e-12
    assert abs(ry - y) <= 1e-12


def test_henon_inverse_needs_nonzero_b():
    with pytest.raises(DomainError):
        henon_inverse(HenonParams(1.2, 0.0), (1.0, 1.0))


def test_lorenz_field_values():
    p = LorenzParams(10.0, 28.0, 8.0 / 3.0)
    assert np.all(lorenz_field(p, np.zeros(3)) == 0.0)
    f = lorenz_field(p, np.array([1.0, 1.0, 1.0]))
    # third component is x*y - b*z = 1 - 8/3
    assert f[0] == 0.0
    assert f[1] == 26.0
    assert f[2] == 1.0 - 8.0 / 3.0
    w = math.sqrt(p.b * (p.r - 1.0))
    assert abs(w - 8.485281) < 1e-6
    residual = lorenz_field(p, np.array([w, w, p.r - 1.0]))
    assert np.max(np.abs(residual)) < 1e-12


def test_lorenz_params_positive():
    with pytest.raises(DomainError):
        LorenzParams(0.0, 28.0, 1.0)
    with pytest.raises(DomainError):
        LorenzParams(10.0, -1.0, 1.0)


def test_chua_g_values():
    p = ChuaParams(15.0, 1.0, 25.58, m0=-8.0 / 7.0, m1=-5.0 / 7.0)
    assert chua_g(p, 0.0) == 0.0
    assert chua_g(p, 1.0) == p.m0
    assert abs(chua_g(p, 1.0) - (-1.142857)) < 1e-6
    assert abs(chua_g(p, 10.0) - (-53.0 / 7.0)) < 1e-14
    assert abs(chua_g(p, 10.0) - (-7.571429)) < 1e-6


@given(x=st.floats(-100.0, 100.0))
def test_chua_g_is_odd(x):
    p = ChuaParams(15.0, 1.0, 25.58, m0=-8.0 / 7.0, m1=-5.0 / 7.0)
    assert chua_g(p, -x) == -chua_g(p, x)


@pytest.mark.parametrize("corner", [1.0, -1.0])
@pytest.mark.parametrize("eps", [1e-9, 1e-12])
def test_chua_g_continuous_at_corners(corner, eps):
    # the one-sided slopes are m0 inside and m1 outside, so the two-sided
    # difference is |m0 + m1| * eps; bound it by twice the larger slope
    p = ChuaParams(15.0, 1.0, 25.58, m0=-8.0 / 7.0, m1=-5.0 / 7.0)
    left = chua_g(p, corner - eps)
    right = chua_g(p, corner + eps)
    assert abs(left - right) <= 2.0 * max(abs(p.m0), abs(p.m1)) * eps + 1e-15


def test_chua_field_values():
    p = ChuaParams(15.0, 1.0, 25.58, m0=-8.0 / 7.0, m1=-5.0 / 7.0)
    assert np.all(chua_field(p, np.zeros(3)) == 0.0)
    f = chua_field(p, np.array([1.0, 0.0, 0.0]))
    assert abs(f[0] - 15.0 / 7.0) < 1e-12
    assert f[1] == 1.0
    assert f[2] == 0.0


def test_chua_field_outer_equilibria():
    # x + g(x) = 0 at x = +-3/2 for the shipped slopes, so (x, 0, -x) is fixed
    p = ChuaParams(15.0, 1.0, 25.58, m0=-8.0 / 7.0, m1=-5.0 / 7.0)
    for x in (1.5, -1.5):
        f = chua_field(p, np.array([x, 0.0, -x]))
        assert np.max(np.abs(f)) < 1e-12


def test_chua_params_require_distinct_slopes():
    with pytest.raises(DomainError):
        ChuaParams(15.0, 1.0, 25.58, m0=-1.0, m1=-1.0)


def test_chua_paper_code_field_matches_straight_line():
    x, y, z = -1.6, 0.0, 1.6
    expected_x = 15.0 * (y - x) - (
        (5.0 / 7.0) * x
        + 0.5 * (-(8.0 / 7.0) - (-5.0 / 7.0)) * (abs(x + 1.0) - abs(x - 1.0))
    )
    f = chua_paper_code_field(np.array([x, y, z]))
    assert f[0] == expected_x
    assert abs(f[0] - 24.714286) < 1e-6
    assert f[1] == x - y + z
    assert f[2] == -25.58 * y
    assert np.all(chua_paper_code_field(np.zeros(3)) == 0.0)


def test_chua_paper_code_orbit_decays_to_origin():
    # The verbatim double-scroll transcription has its only equilibrium at
    # the origin and spirals into it; it never reaches the x > 0.5 lobe.
    cfg = IntegratorConfig(rel_tol=1e-6, abs_tol=1e-6)
    traj = integrate(
        PRESETS["chua-paper-code"].field(None), [-1.6, 0.0, 1.6], 0.0, 200.0, cfg
    )
    assert np.max(np.abs(traj.states[-1])) < 1e-3
    assert not np.any(traj.states[:, 0] > 0.5)


def _band_visits(values, predicate):
    inside = predicate(values)
    return int(np.sum(inside[1:] & ~inside[:-1]) + (1 if inside[0] else 0))


def test_chua_equation_form_double_scrolls():
    cfg = IntegratorConfig(rel_tol=1e-4, abs_tol=1e-4)
    traj = integrate(PRESETS["chua"].field(None), [-1.6, 0.0, 1.6], 0.0, 100.0, cfg)
    x = traj.states[:, 0]
    assert _band_visits(x, lambda v: v > 0.5) >= 10
    assert _band_visits(x, lambda v: v < -0.5) >= 10


def test_linear_solution_values():
    assert linear_solution(Linear1DParams(0.0), 7.0, 123.0) == 7.0
    assert abs(linear_solution(Linear1DParams(1.0), 1.0, 1.0) - 2.718282) < 1e-6
    assert abs(linear_solution(Linear1DParams(-1.0), 2.0, math.log(2.0)) - 1.0) < 1e-15


def test_preset_registry():
    assert set(PRESETS) == {
        "logistic",
        "henon",
        "lorenz",
        "chua",
        "chua-paper-code",
        "linear1d",
    }
    assert preset("lorenz").kind == "flow"
    assert preset("henon").kind == "map"
    assert preset("logistic").default_params == (3.8282,)
    with pytest.raises(UnknownPreset):
        preset("nosuch")


def test_preset_kind_mismatch_raises():
    with pytest.raises(DomainError):
        preset("lorenz").map(None)
    with pytest.raises(DomainError):
        preset("logistic").field(None)


def test_preset_map_and_field_evaluate():
    henon = preset("henon").map(None)
    assert np.array_equal(henon(np.array([0.0, 0.0])), np.array([1.0, 0.0]))
    lorenz = preset("lorenz").field(None)
    assert np.array_equal(lorenz(0.0, np.zeros(3)), np.zeros(3))
    linear = preset("linear1d").field((2.0,))
    assert linear(0.0, np.array([3.0]))[0] == 6.0
