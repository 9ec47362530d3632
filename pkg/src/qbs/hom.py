"""Hong-Ou-Mandel coincidence curves.

Covers both splitter families: the constant-coefficient splitter at
R = T = 1/2, where the coincidence probability is

    P12(dt) = 1/2 (1 - Re int phi(w1,w2) phi*(w2,w1) e^{-i(w2-w1) dt}),

and the frequency-dependent waveguide splitter, where R and T vary across
the photon bandwidth and the dip acquires a floor set by the mean-square
fluctuation of the coefficients.  The joint spectral amplitude is the
Gaussian pump/signal/idler family

    phi ~ C exp(-(w1+w2-Wp)^2 / 2sp^2) exp(-(w1-w01)^2 / 2s1^2)
                                       exp(-(w2-w02)^2 / 2s2^2),

which contains type-I down-conversion (finite pump width) and independent
Fock wave packets (infinite pump width) as the two cases of interest.
Delays enter only through the single parameter dt, the time between the
two detections.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .numerics import ConvergenceError, default_order, gauss_hermite, gaussian_expect
from .waveguide import WaveguideParams

__all__ = [
    "HomCurve",
    "JsaDerived",
    "JsaParams",
    "balanced_tbs",
    "constant_coefficient_dip",
    "conventional_curve",
    "conventional_dip_closed",
    "difference_bandwidth",
    "frequency_dependent_curve",
    "hom_conventional",
    "hom_frequency_dependent",
    "hom_identical_zero_delay",
    "jsa_norm_constant",
    "mean_reflectance",
    "p12_frequency_dependent",
    "reflectance_moments",
    "visibility",
]

_PLATEAU_FACTOR = 10.0


@dataclass(frozen=True)
class JsaParams:
    """Gaussian joint-spectral-amplitude parameters, all in rad/s.

    ``pump_width = math.inf`` is the factorised Fock limit and is treated
    analytically rather than as a large number.
    """

    pump_center: float
    pump_width: float
    center1: float
    center2: float
    width1: float
    width2: float

    def __post_init__(self) -> None:
        if not (self.width1 > 0.0 and self.width2 > 0.0):
            raise ValueError("signal/idler widths must be positive")
        if not (self.pump_width > 0.0):
            raise ValueError("pump width must be positive (math.inf for Fock packets)")

    @property
    def is_fock(self) -> bool:
        return math.isinf(self.pump_width)

    @property
    def is_symmetric(self) -> bool:
        """True for identical photons (equal centers and widths)."""
        return self.width1 == self.width2 and self.center1 == self.center2

    @classmethod
    def fock(cls, center1: float, center2: float, width1: float, width2: float) -> "JsaParams":
        """Independent Gaussian wave packets (infinite pump bandwidth)."""
        return cls(
            pump_center=center1 + center2,
            pump_width=math.inf,
            center1=center1,
            center2=center2,
            width1=width1,
            width2=width2,
        )


@dataclass(frozen=True)
class JsaDerived:
    """Derived dip parameters of the Gaussian JSA family.

    ``omega0_term_ratio`` reports the size of the width-only term in the
    printed effective-frequency formula relative to the dominant one; the
    formula is evaluated as given and this ratio flags when the small term
    is not negligible (> 1e-3).
    """

    a_param: float
    b_param: float
    omega_g: float
    delta_omega: float
    omega0_eff: float
    omega0_term_ratio: float


@dataclass(frozen=True)
class HomCurve:
    """Sampled coincidence curve with its visibility.

    ``tau_c`` is the coherence-time scale of the dip (the 1/e width is of
    order 2 tau_c); the plateau is sampled at delays >= 10 tau_c.
    ``visibility`` is nan when the delay grid lacks the zero-delay or
    plateau samples needed to define it.
    """

    delays: np.ndarray
    p12: np.ndarray
    visibility: float
    tau_c: float

    def __post_init__(self) -> None:
        delays = np.asarray(self.delays, dtype=float)
        p12 = np.asarray(self.p12, dtype=float)
        if delays.shape != p12.shape or delays.ndim != 1:
            raise ValueError("delays and p12 must be matching one-dimensional arrays")
        if p12.min() < -1e-9 or p12.max() > 1.0 + 1e-9:
            raise ValueError("coincidence probabilities must lie in [0, 1]")
        delays.setflags(write=False)
        p12.setflags(write=False)
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "p12", p12)


def jsa_derived(j: JsaParams) -> JsaDerived:
    """Dip parameters (A, B, Omega_g, delta omega, effective omega0).

    The infinite-pump-width limit is taken analytically: B -> A,
    Omega_g -> sqrt(s1^2 + s2^2), delta omega -> w02 - w01.
    """
    s1sq = j.width1 ** 2
    s2sq = j.width2 ** 2
    ssum = s1sq + s2sq
    a = 2.0 * j.width1 * j.width2 / ssum
    if j.is_fock:
        return JsaDerived(
            a_param=a,
            b_param=a,
            omega_g=math.sqrt(ssum),
            delta_omega=j.center2 - j.center1,
            omega0_eff=(s2sq * j.center1 + s1sq * j.center2) / ssum,
            omega0_term_ratio=0.0,
        )
    spsq = j.pump_width ** 2
    x = spsq / ssum
    b = a * math.sqrt((1.0 + x) / (a * a + x))
    omega_g = math.sqrt((4.0 * s1sq * s2sq + ssum * spsq) / (ssum + spsq))
    denom = ssum + spsq
    delta_omega = (
        j.center2 * (spsq + 2.0 * s1sq) / denom
        - j.center1 * (spsq + 2.0 * s2sq) / denom
        + j.pump_center * (s2sq - s1sq) / denom
    )
    num_width = 2.0 * j.pump_width * s1sq * s2sq
    num_main = spsq * (s2sq * j.center1 + s1sq * j.center2)
    omega0_eff = (num_width + num_main) / (4.0 * s1sq * s2sq + ssum * spsq)
    ratio = abs(num_width) / abs(num_main) if num_main != 0.0 else math.inf
    return JsaDerived(
        a_param=a,
        b_param=b,
        omega_g=omega_g,
        delta_omega=delta_omega,
        omega0_eff=omega0_eff,
        omega0_term_ratio=ratio,
    )


def difference_bandwidth(j: JsaParams) -> float:
    """Bandwidth dw of the frequency-difference variable in the dip factor.

    The swap-symmetrised spectral weight is Gaussian in v = w2 - w1 with
    standard deviation s_v = sqrt(2) s1 s2 / sqrt(s1^2 + s2^2) (pump
    independent); the zero-floor dip decays as exp(-(dw * dt)^2) with
    dw = s_v / sqrt(2).  Identical to B Omega_g / 2 of the derived set.
    """
    return j.width1 * j.width2 / math.sqrt(j.width1 ** 2 + j.width2 ** 2)


def jsa_norm_constant(j: JsaParams) -> tuple[float, float]:
    """Printed and numeric normalisation constants of the Gaussian JSA.

    The printed constant assumes centers much larger than widths; the
    numeric one is computed by quadrature.  Both are returned so callers
    can report the relative deviation outside the validated regime.  The
    Fock limit has no printed constant; the per-packet Gaussian norms are
    returned instead (equal values).
    """
    if j.is_fock:
        c = 1.0 / math.sqrt(math.pi * j.width1 * j.width2)
        return c, 1.0 / math.sqrt(_norm_integral(j))
    printed = (j.width1 ** 2 + j.width2 ** 2 + j.pump_width ** 2) ** 0.25 / math.sqrt(
        math.pi * j.width1 * j.width2 * j.pump_width
    )
    norm = _norm_integral(j)
    return printed, 1.0 / math.sqrt(norm)


# ---------------------------------------------------------------------------
# Conventional (constant-coefficient) dip.
# ---------------------------------------------------------------------------

def _axis_reference(j: JsaParams) -> tuple[float, float]:
    """Per-axis Gaussian envelope of the swap product phi(w1,w2) phi*(w2,w1)."""
    s1sq, s2sq = j.width1 ** 2, j.width2 ** 2
    center = (s2sq * j.center1 + s1sq * j.center2) / (s1sq + s2sq)
    std = math.sqrt(s1sq * s2sq / (s1sq + s2sq))
    return center, std


def _log_phi(j: JsaParams, w1: np.ndarray, w2: np.ndarray) -> np.ndarray:
    out = (
        -((w1 - j.center1) ** 2) / (2.0 * j.width1 ** 2)
        - ((w2 - j.center2) ** 2) / (2.0 * j.width2 ** 2)
    )
    if not j.is_fock:
        out = out - ((w1 + w2 - j.pump_center) ** 2) / (2.0 * j.pump_width ** 2)
    return out


@lru_cache(maxsize=128)
def _tensor_ratio(j: JsaParams) -> float:
    """Ratio of the zero-delay swap integral to the JSA norm, by quadrature."""
    center, std = _axis_reference(j)
    order = default_order()
    prev = None
    for q in (order, 2 * order, min(4 * order, 512)):
        rule = gauss_hermite(q)
        x = center + math.sqrt(2.0) * std * rule.nodes
        w = rule.weights / rule.weights.sum()
        w1, w2 = np.meshgrid(x, x, indexing="ij")
        wt = np.outer(w, w)
        log_ref = -((w1 - center) ** 2 + (w2 - center) ** 2) / (2.0 * std * std)
        swap = np.exp(_log_phi(j, w1, w2) + _log_phi(j, w2, w1) - log_ref)
        norm = np.exp(2.0 * _log_phi(j, w1, w2) - log_ref)
        val = float(np.sum(wt * swap) / np.sum(wt * norm))
        if prev is not None and abs(val - prev) <= 1e-10 * max(1.0, abs(val)):
            return val
        prev = val
    raise ConvergenceError("swap-overlap quadrature failed its doubling check")


def _norm_integral(j: JsaParams) -> float:
    """Plain two-dimensional integral of |phi|^2 with unit C."""
    center, std = _axis_reference(j)
    rule = gauss_hermite(default_order())
    x = center + math.sqrt(2.0) * std * rule.nodes
    scale = math.sqrt(2.0) * std
    w = rule.weights * scale  # undo the e^{-y^2} weight below
    w1, w2 = np.meshgrid(x, x, indexing="ij")
    wt = np.outer(w, w)
    log_ref = -((w1 - center) ** 2 + (w2 - center) ** 2) / (2.0 * std * std)
    vals = np.exp(2.0 * _log_phi(j, w1, w2) - log_ref)
    return float(np.sum(wt * vals))


def hom_conventional(j: JsaParams, delta_tau: float) -> float:
    """Coincidence probability on a balanced constant-coefficient splitter.

    Evaluates the overlap integral by quadrature, normalised numerically so
    that the JSA norm (and hence any printed constant) cancels.  Fully
    overlapping identical photons give zero; long delays give 1/2.
    """
    r0 = _tensor_ratio(j)
    s_v = math.sqrt(2.0) * difference_bandwidth(j)
    osc = abs(delta_tau)
    dip = gaussian_expect(
        lambda v: np.cos(v * delta_tau), mean=0.0, std=s_v, oscillation=osc, tol=1e-12,
    )
    return 0.5 * (1.0 - r0 * float(dip))


def conventional_dip_closed(bandwidth: float, delta_tau: float) -> float:
    """Closed-form balanced-splitter dip 1/2 (1 - exp(-(dw dt)^2)).

    Valid for identical Gaussian photons with difference bandwidth dw, see
    :func:`difference_bandwidth`.
    """
    return 0.5 * (1.0 - math.exp(-((bandwidth * delta_tau) ** 2)))


# ---------------------------------------------------------------------------
# Frequency-dependent dip.
# ---------------------------------------------------------------------------

def _r_of_y(g: float, omega_t: float, y: np.ndarray) -> np.ndarray:
    eps = g * y
    one = 1.0 + eps * eps
    return np.sin(0.5 * omega_t * np.sqrt(one)) ** 2 / one


def p12_frequency_dependent(
    omega_g_over_omega: float,
    omega_tbs: float,
    b_param: float,
    delta_omega_over_omega_g: float,
    delta_tau_omega_g: float,
) -> float:
    """Dimensionless frequency-dependent coincidence probability.

    Evaluates the reduced one-dimensional dip integral

        P12 = E_{y ~ N(c, 1/2)}[T^2(y) + R^2(y)]
              - 2 B e^{-c^2} E_{y ~ N(0, 1/2)}[T(By) R(By) cos(B dt y)]

    with c = delta_omega / Omega_g, dt in units of 1/Omega_g, and R(y)
    evaluated at detuning eps = (Omega_g / Omega) y.  Normalised so that
    zero interaction time gives 1.
    """
    g = omega_g_over_omega
    if g < 0.0 or omega_tbs < 0.0:
        raise ValueError("omega_g_over_omega and omega_tbs must be nonnegative")
    if not (0.0 < b_param <= 1.0):
        raise ValueError(f"b_param must lie in (0, 1], got {b_param!r}")
    c = delta_omega_over_omega_g
    std = math.sqrt(0.5)
    osc_r = 0.5 * omega_tbs * g

    def direct_terms(y: np.ndarray) -> np.ndarray:
        r = _r_of_y(g, omega_tbs, y)
        t = 1.0 - r
        return t * t + r * r

    term1 = gaussian_expect(direct_terms, mean=c, std=std, oscillation=osc_r, tol=1e-11)

    bb = b_param

    def cross_term(y: np.ndarray) -> np.ndarray:
        r = _r_of_y(g, omega_tbs, bb * y)
        return (1.0 - r) * r * np.cos(bb * delta_tau_omega_g * y)

    osc_c = 0.5 * omega_tbs * g * bb + bb * abs(delta_tau_omega_g)
    cross = gaussian_expect(cross_term, mean=0.0, std=std, oscillation=osc_c, tol=1e-11)
    return float(term1 - 2.0 * bb * math.exp(-c * c) * cross)


def hom_frequency_dependent(j: JsaParams, wg: WaveguideParams, delta_tau: float) -> float:
    """Coincidence probability on the frequency-dependent waveguide splitter.

    The JSA fixes the dip parameters (B, Omega_g, delta omega), the
    waveguide fixes Omega and the interaction time.
    """
    d = jsa_derived(j)
    return p12_frequency_dependent(
        omega_g_over_omega=d.omega_g / wg.omega_coupling,
        omega_tbs=wg.interaction_phase,
        b_param=d.b_param,
        delta_omega_over_omega_g=d.delta_omega / d.omega_g,
        delta_tau_omega_g=delta_tau * d.omega_g,
    )


def constant_coefficient_dip(
    b_param: float, delta_omega_over_omega_g: float, omega_g_delta_tau: float
) -> float:
    """Constant-coefficient limit of the frequency-dependent dip.

    1/2 (1 - B e^{-(dw/Og)^2} e^{-(B Og dt)^2 / 4}), the known balanced
    splitter result the reduced integral collapses to when R and T stop
    varying across the photon bandwidth.
    """
    c = delta_omega_over_omega_g
    return 0.5 * (
        1.0 - b_param * math.exp(-c * c) * math.exp(-0.25 * (b_param * omega_g_delta_tau) ** 2)
    )


def hom_identical_zero_delay(j: JsaParams, wg: WaveguideParams) -> float:
    """Zero-delay coincidence floor for identical photons.

    Equals the spectral mean of (T - R)^2, i.e. (Tbar - Rbar)^2 plus four
    times the reflectance variance; a frequency-dependent splitter keeps
    this strictly positive even when perfectly balanced on average.
    """
    if not j.is_symmetric:
        raise ValueError("identical-photon floor requires a swap-symmetric JSA "
                         "(equal centers and widths)")
    d = jsa_derived(j)
    g = d.omega_g / wg.omega_coupling
    omega_t = wg.interaction_phase

    def integrand(y: np.ndarray) -> np.ndarray:
        r = _r_of_y(g, omega_t, y)
        return (1.0 - 2.0 * r) ** 2

    return float(
        gaussian_expect(integrand, std=math.sqrt(0.5), oscillation=0.5 * omega_t * g, tol=1e-11)
    )


# ---------------------------------------------------------------------------
# Reflectance statistics and balancing.
# ---------------------------------------------------------------------------

def reflectance_moments(omega_g_over_omega: float, omega_tbs: float) -> tuple[float, float]:
    """Spectral mean of R and of R^2 for identical photons."""
    g = omega_g_over_omega

    def moments(y: np.ndarray) -> np.ndarray:
        r = _r_of_y(g, omega_tbs, y)
        return np.stack([r, r * r], axis=-1)

    out = gaussian_expect(
        moments, std=math.sqrt(0.5), oscillation=0.5 * omega_tbs * g, tol=1e-11
    )
    return float(out[0]), float(out[1])


def mean_reflectance(omega_g_over_omega: float, omega_tbs: float) -> float:
    """Spectrally averaged reflectance Rbar for identical photons.

    Rbar always lies in [0, 1]; for wide spectra the detuning envelope caps
    it well below 1/2, which is what limits the balanced-splitter choice.
    """
    if omega_g_over_omega < 0.0 or omega_tbs < 0.0:
        raise ValueError("arguments must be nonnegative")
    return reflectance_moments(omega_g_over_omega, omega_tbs)[0]


def _mean_r_curve(g: float, omega_ts: np.ndarray) -> np.ndarray:
    """Vectorised Rbar over a grid of interaction phases (one quadrature)."""
    out = np.empty(len(omega_ts))
    block = 256
    osc = 0.5 * float(omega_ts.max()) * g
    for start in range(0, len(omega_ts), block):
        ts = omega_ts[start : start + block]

        def stack(y: np.ndarray) -> np.ndarray:
            eps2 = (g * y) ** 2
            one = 1.0 + eps2
            phase = 0.5 * np.sqrt(one)[:, None] * ts[None, :]
            return np.sin(phase) ** 2 / one[:, None]

        out[start : start + len(ts)] = gaussian_expect(
            stack, std=math.sqrt(0.5), oscillation=osc, tol=1e-11
        )
    return out


def balanced_tbs(omega_g_over_omega: float, max_omega_tbs: float) -> list[float]:
    """All interaction phases on [0, max] with Rbar exactly 1/2.

    Scans a fine grid for sign changes of Rbar - 1/2 and polishes each
    bracket by bisection to 1e-9.  The list is finite and may be empty:
    wide spectra (Omega_g / Omega beyond roughly 1.85) never reach a
    balanced average.
    """
    g = omega_g_over_omega
    if g < 0.0:
        raise ValueError(f"omega_g_over_omega must be nonnegative, got {g!r}")
    if max_omega_tbs <= 0.0:
        return []
    n = max(64, int(math.ceil(max_omega_tbs / 0.01)) + 1)
    grid = np.linspace(0.0, max_omega_tbs, n)
    vals = _mean_r_curve(g, grid) - 0.5
    roots: list[float] = []
    sign = np.sign(vals)
    for i in np.nonzero(np.diff(sign) != 0)[0]:
        lo, hi = grid[i], grid[i + 1]
        flo = vals[i]
        if flo == 0.0:
            roots.append(float(lo))
            continue
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            fmid = mean_reflectance(g, mid) - 0.5
            if fmid == 0.0 or hi - lo < 1e-9:
                break
            if (fmid > 0.0) == (flo > 0.0):
                lo, flo = mid, fmid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return roots


# ---------------------------------------------------------------------------
# Curves and visibility.
# ---------------------------------------------------------------------------

def visibility(curve: HomCurve) -> float:
    """Dip visibility (P_plateau - P_0) / P_plateau.

    Requires a zero-delay sample and a plateau sample at |dt| >= 10 tau_c;
    the plateau value is read at the largest sampled delay.
    """
    delays = np.abs(curve.delays)
    at_zero = np.nonzero(delays == 0.0)[0]
    if len(at_zero) == 0:
        raise ValueError("curve has no zero-delay sample")
    plateau = np.nonzero(delays >= _PLATEAU_FACTOR * curve.tau_c)[0]
    if len(plateau) == 0:
        raise ValueError(
            f"curve has no plateau sample at |delay| >= {_PLATEAU_FACTOR} * tau_c"
        )
    p0 = curve.p12[at_zero[0]]
    pinf = curve.p12[plateau[np.argmax(delays[plateau])]]
    return float((pinf - p0) / pinf)


def _with_visibility(curve: HomCurve) -> HomCurve:
    try:
        return replace(curve, visibility=visibility(curve))
    except ValueError:
        return curve


def conventional_curve(j: JsaParams, delays: np.ndarray) -> HomCurve:
    """Coincidence curve of the balanced constant-coefficient splitter."""
    delays = np.asarray(delays, dtype=float)
    p12 = np.array([hom_conventional(j, dt) for dt in delays])
    tau_c = 1.0 / difference_bandwidth(j)
    return _with_visibility(HomCurve(delays=delays, p12=p12, visibility=math.nan, tau_c=tau_c))


def frequency_dependent_curve(j: JsaParams, wg: WaveguideParams, delays: np.ndarray) -> HomCurve:
    """Coincidence curve of the frequency-dependent waveguide splitter."""
    delays = np.asarray(delays, dtype=float)
    p12 = np.array([hom_frequency_dependent(j, wg, dt) for dt in delays])
    d = jsa_derived(j)
    tau_c = 1.0 / (d.b_param * d.omega_g)
    return _with_visibility(HomCurve(delays=delays, p12=p12, visibility=math.nan, tau_c=tau_c))
