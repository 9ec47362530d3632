import math

import numpy as np
import pytest

from qbs.hom import (
    HomCurve,
    JsaParams,
    balanced_tbs,
    constant_coefficient_dip,
    conventional_curve,
    conventional_dip_closed,
    difference_bandwidth,
    frequency_dependent_curve,
    hom_conventional,
    hom_frequency_dependent,
    hom_identical_zero_delay,
    jsa_derived,
    jsa_norm_constant,
    mean_reflectance,
    p12_frequency_dependent,
    reflectance_moments,
    visibility,
)
from qbs.waveguide import WaveguideParams

FIVE_HALF_PI = 2.5 * math.pi


def identical_fock(width=1.0, center=2e4):
    return JsaParams.fock(center, center, width, width)


# ---------------------------------------------------------------------------
# derived JSA parameters
# ---------------------------------------------------------------------------

def test_derived_symmetric_fock():
    d = jsa_derived(identical_fock(width=2.0))
    assert d.a_param == 1.0
    assert d.b_param == 1.0
    assert abs(d.omega_g - 2.0 * math.sqrt(2.0)) < 1e-12
    assert d.delta_omega == 0.0
    assert d.omega0_term_ratio == 0.0


def test_derived_fock_limit_matches_large_pump_width():
    j_inf = JsaParams.fock(100.0, 104.0, 1.0, 1.7)
    j_big = JsaParams(
        pump_center=204.0, pump_width=1e6, center1=100.0, center2=104.0,
        width1=1.0, width2=1.7,
    )
    d_inf, d_big = jsa_derived(j_inf), jsa_derived(j_big)
    assert abs(d_inf.b_param - d_big.b_param) < 1e-5
    assert abs(d_inf.omega_g - d_big.omega_g) < 1e-5 * d_inf.omega_g
    assert abs(d_inf.delta_omega - d_big.delta_omega) < 1e-5
    assert abs(d_inf.omega0_eff - d_big.omega0_eff) < 1e-3


def test_derived_type_one_downconversion():
    # degenerate type-I: pump at twice the common center, equal widths
    j = JsaParams(pump_center=4e4, pump_width=0.3, center1=2e4, center2=2e4,
                  width1=1.0, width2=1.0)
    d = jsa_derived(j)
    assert d.a_param == 1.0
    assert abs(d.b_param - 1.0) < 1e-12
    assert abs(d.delta_omega) < 1e-12


def test_derived_asymmetric_widths():
    j = JsaParams(pump_center=4e4, pump_width=2.0, center1=2e4, center2=2e4,
                  width1=1.0, width2=3.0)
    d = jsa_derived(j)
    assert 0.0 < d.a_param < 1.0
    assert 0.0 < d.b_param <= 1.0
    assert d.omega0_term_ratio < 1e-3  # optical centers dwarf the width term


def test_derived_width_term_flag():
    # widths comparable to the centers trip the effective-frequency flag
    j = JsaParams(pump_center=12.0, pump_width=2.0, center1=5.0, center2=7.0,
                  width1=2.0, width2=3.0)
    assert jsa_derived(j).omega0_term_ratio > 1e-3


def test_dip_width_consistency():
    # B * Omega_g / 2 from the derived set equals the swap-product bandwidth
    for pump_width in (0.5, 2.0, math.inf):
        for w1, w2 in ((1.0, 1.0), (1.0, 2.5), (0.3, 0.9)):
            if math.isinf(pump_width):
                j = JsaParams.fock(2e4, 2e4, w1, w2)
            else:
                j = JsaParams(pump_center=4e4, pump_width=pump_width,
                              center1=2e4, center2=2e4, width1=w1, width2=w2)
            d = jsa_derived(j)
            assert abs(0.5 * d.b_param * d.omega_g - difference_bandwidth(j)) < 1e-12


def test_jsa_validation():
    with pytest.raises(ValueError):
        JsaParams.fock(2e4, 2e4, 0.0, 1.0)
    with pytest.raises(ValueError):
        JsaParams(pump_center=1.0, pump_width=-1.0, center1=1.0, center2=1.0,
                  width1=1.0, width2=1.0)


def test_norm_constant_regimes():
    # far inside the narrow-band regime the printed constant is numeric-exact
    j = JsaParams(pump_center=4e4, pump_width=1.0, center1=2e4, center2=2e4,
                  width1=1.0, width2=1.0)
    printed, numeric = jsa_norm_constant(j)
    assert abs(printed - numeric) <= 1e-9 * numeric
    # a detuned pump violates it and the numeric value reports the deviation
    j_off = JsaParams(pump_center=4e4 + 3.0, pump_width=1.0, center1=2e4,
                      center2=2e4, width1=1.0, width2=1.0)
    printed_off, numeric_off = jsa_norm_constant(j_off)
    assert abs(printed_off - numeric_off) > 1e-3 * numeric_off


# ---------------------------------------------------------------------------
# conventional dip
# ---------------------------------------------------------------------------

def test_conventional_perfect_dip():
    assert abs(hom_conventional(identical_fock(), 0.0)) < 1e-12


def test_conventional_known_point():
    j = identical_fock(width=1.0)
    dw = difference_bandwidth(j)
    val = hom_conventional(j, 1.0 / dw)
    assert abs(val - 0.5 * (1.0 - math.exp(-1.0))) < 1e-9


def test_conventional_long_delay_plateau():
    j = identical_fock(width=1.0)
    dw = difference_bandwidth(j)
    assert abs(hom_conventional(j, 40.0 / dw) - 0.5) < 1e-6


def test_conventional_matches_closed_form_grid():
    j = identical_fock(width=1.3)
    dw = difference_bandwidth(j)
    for x in np.linspace(0.0, 4.0, 50):
        quad = hom_conventional(j, float(x) / dw)
        closed = conventional_dip_closed(dw, float(x) / dw)
        assert abs(quad - closed) < 1e-6


def test_conventional_spdc_dip_also_closes():
    # identical signal/idler from a finite-bandwidth pump still dip to zero
    j = JsaParams(pump_center=4e4, pump_width=0.7, center1=2e4, center2=2e4,
                  width1=1.0, width2=1.0)
    assert abs(hom_conventional(j, 0.0)) < 1e-10


def test_conventional_distinguishable_photons_floor():
    j = JsaParams.fock(2e4, 2e4 + 4.0, 1.0, 1.0)
    floor = hom_conventional(j, 0.0)
    assert floor > 0.1


# ---------------------------------------------------------------------------
# frequency-dependent dip
# ---------------------------------------------------------------------------

def test_fd_unit_at_zero_interaction():
    assert p12_frequency_dependent(1.0, 0.0, 1.0, 0.3, 2.0) == pytest.approx(1.0, abs=1e-12)


def test_fd_reduces_to_constant_coefficient():
    for dt in np.linspace(0.0, 4.0, 25):
        got = p12_frequency_dependent(1e-4, FIVE_HALF_PI, 0.8, 0.3, float(dt))
        want = constant_coefficient_dip(0.8, 0.3, float(dt))
        assert abs(got - want) < 1e-6


def test_fd_zero_delay_floor_positive():
    roots = balanced_tbs(1.0, 12.0)
    t_bal = roots[-1]
    floor = p12_frequency_dependent(1.0, t_bal, 1.0, 0.0, 0.0)
    assert floor > 1e-3


def test_fd_fluctuation_identity():
    for g in (0.3, 1.0):
        t_bal = balanced_tbs(g, 12.0)[0]
        p0 = p12_frequency_dependent(g, t_bal, 1.0, 0.0, 0.0)
        rbar, r2bar = reflectance_moments(g, t_bal)
        assert abs(p0 - 4.0 * (r2bar - rbar * rbar)) < 1e-10


def test_fd_wrapper_consistency():
    j = identical_fock(width=1.0)
    d_omega_g = jsa_derived(j).omega_g
    wg = WaveguideParams(omega_coupling=d_omega_g / 0.5, t_bs=1.0)
    got = hom_frequency_dependent(j, wg, 0.7)
    want = p12_frequency_dependent(
        0.5, wg.interaction_phase, 1.0, 0.0, 0.7 * d_omega_g
    )
    assert abs(got - want) < 1e-14


def test_identical_zero_delay_matches_dip():
    j = identical_fock(width=1.0)
    omega_g = jsa_derived(j).omega_g
    for g in (0.25, 1.0):
        wg = WaveguideParams(omega_coupling=omega_g / g, t_bs=2.2 / (omega_g / g))
        a = hom_identical_zero_delay(j, wg)
        b = hom_frequency_dependent(j, wg, 0.0)
        assert abs(a - b) < 1e-9


def test_identical_zero_delay_rejects_asymmetric():
    j = JsaParams.fock(2e4, 2e4 + 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        hom_identical_zero_delay(j, WaveguideParams(omega_coupling=1.0, t_bs=1.0))


def test_fd_validation():
    with pytest.raises(ValueError):
        p12_frequency_dependent(-0.1, 1.0, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        p12_frequency_dependent(1.0, 1.0, 1.3, 0.0, 0.0)


# ---------------------------------------------------------------------------
# reflectance statistics and balanced interaction times
# ---------------------------------------------------------------------------

def test_mean_reflectance_narrow_spectrum():
    for t in (1.0, FIVE_HALF_PI, 4.4):
        assert abs(mean_reflectance(1e-6, t) - math.sin(0.5 * t) ** 2) < 1e-9


def test_mean_reflectance_bounded():
    for g in (0.2, 1.0, 4.0):
        for t in (0.5, 3.0, 17.0):
            val = mean_reflectance(g, t)
            assert 0.0 <= val <= 1.0


def test_mean_reflectance_wide_spectrum_low():
    # beyond the feasibility boundary the average never reaches 1/2
    peak = max(mean_reflectance(2.5, t) for t in np.linspace(0.1, 40.0, 900))
    assert peak < 0.5


def test_balanced_narrow_spectrum_roots():
    roots = balanced_tbs(1e-6, 9.0)
    expected = [math.pi / 2, 3 * math.pi / 2, 5 * math.pi / 2]
    assert len(roots) == len(expected)
    for r, e in zip(roots, expected):
        assert abs(r - e) < 1e-6


def test_balanced_roots_verified():
    roots = balanced_tbs(1.0, 14.0)
    assert roots
    for t in roots:
        assert abs(mean_reflectance(1.0, t) - 0.5) < 1e-8


def test_balanced_wide_spectrum_empty():
    assert balanced_tbs(3.0, 40.0) == []


def test_balanced_rejects_negative():
    with pytest.raises(ValueError):
        balanced_tbs(-1.0, 10.0)
    assert balanced_tbs(1.0, 0.0) == []


# ---------------------------------------------------------------------------
# curves and visibility
# ---------------------------------------------------------------------------

def test_conventional_curve_full_visibility():
    j = identical_fock(width=1.0)
    tau_c = 1.0 / difference_bandwidth(j)
    delays = np.concatenate([np.linspace(-3, 3, 31), [12.0 * tau_c]]) * 1.0
    delays = np.unique(np.concatenate([delays, [0.0]]))
    curve = conventional_curve(j, delays)
    assert abs(curve.visibility - 1.0) < 1e-5


def test_frequency_dependent_curve_reduced_visibility():
    j = identical_fock(width=1.0)
    omega_g = jsa_derived(j).omega_g
    g = 1.0
    t_bal = balanced_tbs(g, 9.0)[-1]
    wg = WaveguideParams(omega_coupling=omega_g / g, t_bs=t_bal / (omega_g / g))
    delays = np.unique(np.concatenate([np.linspace(-4, 4, 41), [0.0, 15.0]])) / omega_g
    curve = frequency_dependent_curve(j, wg, delays)
    assert 0.0 < curve.visibility < 1.0


def test_visibility_monotone_in_spectral_ratio():
    j = identical_fock(width=1.0)
    omega_g = jsa_derived(j).omega_g
    vis = []
    for g in (1e-6, 0.25, 0.5, 1.0):
        t_bal = balanced_tbs(g, 9.0)[-1] if g > 1e-5 else FIVE_HALF_PI
        wg = WaveguideParams(omega_coupling=omega_g / g, t_bs=t_bal / (omega_g / g))
        delays = np.unique(np.concatenate([np.linspace(-3, 3, 25), [0.0, 15.0]])) / omega_g
        vis.append(frequency_dependent_curve(j, wg, delays).visibility)
    assert all(b <= a + 1e-9 for a, b in zip(vis, vis[1:]))
    assert abs(vis[0] - 1.0) < 1e-6


def test_fd_plateau_value():
    g = 1.0
    t_bal = balanced_tbs(g, 9.0)[0]
    pinf = p12_frequency_dependent(g, t_bal, 1.0, 0.0, 50.0)
    rbar, r2bar = reflectance_moments(g, t_bal)
    t2bar = 1.0 - 2.0 * rbar + r2bar
    assert abs(pinf - 2.0 * t2bar) < 1e-3


def test_visibility_requires_samples():
    curve = HomCurve(delays=np.array([0.0, 1.0]), p12=np.array([0.1, 0.2]),
                     visibility=math.nan, tau_c=1.0)
    with pytest.raises(ValueError):
        visibility(curve)
    curve = HomCurve(delays=np.array([0.5, 20.0]), p12=np.array([0.1, 0.2]),
                     visibility=math.nan, tau_c=1.0)
    with pytest.raises(ValueError):
        visibility(curve)


def test_visibility_computation():
    curve = HomCurve(delays=np.array([0.0, 20.0]), p12=np.array([0.1, 0.5]),
                     visibility=math.nan, tau_c=1.0)
    assert abs(visibility(curve) - 0.8) < 1e-15
