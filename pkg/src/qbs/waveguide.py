"""Frequency-dependent waveguide splitter.

Two coupled waveguides act as a splitter whose reflectance and phase depend
on the photon frequencies through the detuning eps = (w2 - w1) / Omega:

    R = sin^2(Omega t_bs / 2 * sqrt(1 + eps^2)) / (1 + eps^2)
    cos(phi) = -eps sqrt(R / T)

Omega is set by the medium (electron concentration, modal volume,
polarization overlap).  For non-monochromatic photons the Schmidt
eigenvalues are averaged over the joint spectral density; for long
interaction times the oscillatory terms average out and the |1,1>
coincidence probability has a closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx

from .bs_core import FockPair, lambda_table
from .entanglement import SchmidtSpectrum
from .numerics import gaussian_expect

__all__ = [
    "MediumParams",
    "SpectralProfile",
    "WaveguideParams",
    "asymptotic_schmidt_modes",
    "averaged_schmidt_modes",
    "coincidence_probs_asymptotic",
    "coupled_mode_transfer",
    "entropy_asymptotic_11",
    "omega_from_medium",
    "reflectance",
]


@dataclass(frozen=True)
class WaveguideParams:
    """Coupling frequency Omega (rad/s) and interaction time t_bs (s).

    Only the product Omega * t_bs and the ratios sigma / Omega enter the
    physics, so dimensionless work can simply set omega_coupling = 1.
    """

    omega_coupling: float
    t_bs: float

    def __post_init__(self) -> None:
        if not (self.omega_coupling > 0.0):
            raise ValueError(f"omega_coupling must be positive, got {self.omega_coupling!r}")
        if self.t_bs < 0.0:
            raise ValueError(f"t_bs must be nonnegative, got {self.t_bs!r}")

    @property
    def interaction_phase(self) -> float:
        """Dimensionless product Omega * t_bs."""
        return self.omega_coupling * self.t_bs

    @classmethod
    def from_interaction_phase(cls, omega_t_bs: float) -> "WaveguideParams":
        return cls(omega_coupling=1.0, t_bs=float(omega_t_bs))


@dataclass(frozen=True)
class MediumParams:
    """Material data fixing the coupling frequency of the waveguide pair."""

    electron_count: float
    modal_volume: float
    polarization_overlap: float
    center_frequency: float

    def __post_init__(self) -> None:
        if not (self.electron_count > 0.0):
            raise ValueError("electron_count must be positive")
        if not (self.modal_volume > 0.0):
            raise ValueError("modal_volume must be positive")
        if not (-1.0 <= self.polarization_overlap <= 1.0):
            raise ValueError("polarization_overlap must lie in [-1, 1]")
        if not (self.center_frequency > 0.0):
            raise ValueError("center_frequency must be positive")


@dataclass(frozen=True)
class SpectralProfile:
    """Gaussian spectral amplitude: center w0 and width sigma, both rad/s.

    The amplitude is proportional to exp(-(w - w0)^2 / (4 sigma^2)), so the
    spectral density is the normal law N(w0, sigma^2).  Validated against
    sources with w0 / sigma >> 1.
    """

    center: float
    width: float

    def __post_init__(self) -> None:
        if not (self.center > 0.0):
            raise ValueError(f"center frequency must be positive, got {self.center!r}")
        if not (self.width > 0.0):
            raise ValueError(f"spectral width must be positive, got {self.width!r}")


def reflectance(omega1: float, omega2: float, wg: WaveguideParams) -> tuple[float, float]:
    """Frequency-dependent reflectance and phase shift of the waveguide pair.

    Returns (R, phi) at detuning eps = (omega2 - omega1) / Omega.  The phase
    branch is fixed by sin(phi) >= 0, so identical frequencies give
    phi = pi/2.  At exact full reflection (T = 0, reachable only at eps = 0
    with Omega t_bs an odd multiple of pi) the phase is undefined and is
    reported as nan.
    """
    if omega1 <= 0.0 or omega2 <= 0.0:
        raise ValueError("photon frequencies must be positive")
    eps = (omega2 - omega1) / wg.omega_coupling
    one = 1.0 + eps * eps
    r = math.sin(0.5 * wg.interaction_phase * math.sqrt(one)) ** 2 / one
    t = 1.0 - r
    if t == 0.0:
        return r, math.nan
    cos_phi = -eps * math.sqrt(r / t)
    return r, math.acos(max(-1.0, min(1.0, cos_phi)))


def omega_from_medium(m: MediumParams) -> float:
    """Coupling frequency Omega = 4 pi n u1.u2 / w0, with n = N/V.

    Solid-state electron densities at optical frequencies land in the
    1e14 - 1e17 rad/s range.
    """
    density = m.electron_count / m.modal_volume
    return 4.0 * math.pi * density * m.polarization_overlap / m.center_frequency


def coupled_mode_transfer(kappa: float, delta: float, z: float) -> np.ndarray:
    """Transfer matrix of two coupled guides after a coupling length z.

    kappa is the mutual coupling (1/m), delta the propagation-constant
    mismatch (1/m).  With S = sqrt(delta^2 + kappa^2) and tan(eta) =
    kappa / delta:

        u11 = conj(u22) = cos(S z) - i cos(eta) sin(S z)
        u12 = u21      = -i sin(eta) sin(S z)

    At delta = 0 this is the balanced-coupler form with entries cos(kappa z)
    and -i sin(kappa z).
    """
    if kappa < 0.0:
        raise ValueError(f"kappa must be nonnegative, got {kappa!r}")
    s = math.hypot(kappa, delta)
    if s == 0.0:
        return np.eye(2, dtype=complex)
    cos_eta = delta / s
    sin_eta = kappa / s
    c, sn = math.cos(s * z), math.sin(s * z)
    u11 = c - 1j * cos_eta * sn
    u12 = -1j * sin_eta * sn
    return np.array([[u11, u12], [u12, np.conj(u11)]], dtype=complex)


# ---------------------------------------------------------------------------
# Frequency-averaged Schmidt spectra.
# ---------------------------------------------------------------------------

def _lambda_at_detuning(pair: FockPair, omega_t: float, eps: np.ndarray) -> np.ndarray:
    one = 1.0 + eps * eps
    r = np.sin(0.5 * omega_t * np.sqrt(one)) ** 2 / one
    return lambda_table(pair, r)


def averaged_schmidt_modes(
    pair: FockPair,
    wg: WaveguideParams,
    p1: SpectralProfile,
    p2: SpectralProfile,
) -> SchmidtSpectrum:
    """Schmidt spectrum averaged over factorised Gaussian photon spectra.

    Lambda_k is the output probability lambda_k(R) integrated against the
    joint spectral density.  R depends on frequencies only through the
    detuning, so the two-dimensional integral reduces to one dimension in
    the frequency difference; Omega is held constant across the spectrum.

    Raises
    ------
    ConvergenceError
        If the quadrature doubling check fails (strongly oscillatory
        integrand at very large Omega t_bs).
    """
    omega = wg.omega_coupling
    omega_t = wg.interaction_phase
    eps_mean = (p2.center - p1.center) / omega
    eps_std = math.hypot(p1.width, p2.width) / omega
    lam = gaussian_expect(
        lambda eps: _lambda_at_detuning(pair, omega_t, eps),
        mean=eps_mean,
        std=eps_std,
        oscillation=0.5 * omega_t,
        tol=1e-9,
    )
    return SchmidtSpectrum.from_lambdas(lam)


_PERIOD_NODES = 48


def asymptotic_schmidt_modes(pair: FockPair, sigma_over_omega: float) -> SchmidtSpectrum:
    """Long-interaction-time Schmidt spectrum for identical photons.

    For Omega t_bs -> infinity the rapidly oscillating terms average out;
    at every detuning the distribution is replaced by its mean over one
    oscillation period before integrating over the spectrum.  Identical
    Gaussian profiles of width sigma on both ports are assumed, so the
    detuning is N(0, 2 sigma^2 / Omega^2).
    """
    if not (sigma_over_omega > 0.0):
        raise ValueError(f"sigma_over_omega must be positive, got {sigma_over_omega!r}")
    # Midpoint phases cover one sin^2 period exactly.
    chi = (np.arange(_PERIOD_NODES) + 0.5) * math.pi / _PERIOD_NODES
    sin2 = np.sin(chi) ** 2

    def period_averaged(eps: np.ndarray) -> np.ndarray:
        r = sin2[None, :] / (1.0 + eps * eps)[:, None]
        lam = lambda_table(pair, r.ravel())
        lam = lam.reshape(len(eps), _PERIOD_NODES, -1)
        return lam.mean(axis=1)

    lam = gaussian_expect(
        period_averaged,
        mean=0.0,
        std=math.sqrt(2.0) * sigma_over_omega,
        tol=1e-10,
    )
    return SchmidtSpectrum.from_lambdas(lam)


def _coincidence_j(sigma_over_omega: float) -> float:
    """Long-time coincidence probability J for |1,1>.

    J = 1 + (3/8)(O/s)^2 - (sqrt(pi)/16)(O/s)^3 {3 + 10 (s/O)^2}
        * erfc(O/2s) e^{(O/2s)^2}

    evaluated through the scaled complementary error function, since the
    bare factor e^{(O/2s)^2} overflows already at s/O ~ 0.02.
    """
    if not (sigma_over_omega > 0.0):
        raise ValueError(f"sigma_over_omega must be positive, got {sigma_over_omega!r}")
    a = 0.5 / sigma_over_omega
    j = 1.0 + 1.5 * a * a - math.sqrt(math.pi) * a * erfcx(a) * (1.5 * a * a + 1.25)
    return min(max(j, 0.0), 1.0)


def entropy_asymptotic_11(sigma_over_omega: float) -> tuple[float, float]:
    """Long-time entanglement entropy and coincidence probability for |1,1>.

    Returns (S_N, J) where the Schmidt spectrum is {(1-J)/2, J, (1-J)/2}
    and S_N = ln(2 (1-J)^{J-1} / (2J)^J).  The 0^0 limit at J -> 1 is taken
    by evaluating (1-J)^{J-1} as exp((J-1) ln(1-J)).
    """
    j = _coincidence_j(sigma_over_omega)
    s = 0.0
    if 0.0 < j < 1.0:
        s = math.log(2.0) * (1.0 - j) - (1.0 - j) * math.log1p(-j) - j * math.log(j)
    return s, j


def coincidence_probs_asymptotic(sigma_over_omega: float) -> tuple[float, float]:
    """Long-time detection probabilities for |1,1>: (P_11, P_20).

    P_11 is the both-detectors probability J; pairs arrive at either single
    detector with P_20 = P_02 = (1 - P_11) / 2, so P_11 + 2 P_20 = 1
    exactly.
    """
    p11 = _coincidence_j(sigma_over_omega)
    return p11, 0.5 * (1.0 - p11)
