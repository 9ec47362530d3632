"""Exact two-mode Fock-state evolution through a constant-coefficient splitter.

A splitter with reflectance R and phase shift phi maps the input pair
|s1, s2> onto a superposition of |k, p> with k + p = s1 + s2.  The closed
form for the amplitudes c_{k,p} is a finite sum over Jacobi polynomials
with negative-integer first parameter.  The output probabilities do not
depend on phi, so the fast path pins the phase at pi/2 where the polynomial
argument becomes the fixed integer point -3 and every coefficient is exact.

``brute_force_distribution`` provides an independent check: it applies the
output-mode creation operators one photon at a time over the finite Fock
basis, with no Jacobi machinery involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

__all__ = [
    "MAX_TOTAL_PHOTONS",
    "BsParams",
    "FockPair",
    "OutputDistribution",
    "amplitude_c",
    "brute_force_distribution",
    "bs_matrix",
    "holland_burnett_state",
    "lambda_table",
    "mean_photon_numbers",
    "output_distribution",
]

MAX_TOTAL_PHOTONS = 40

_TWO_PI = 2.0 * math.pi
_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class FockPair:
    """Photon numbers on the two input ports."""

    s1: int
    s2: int

    def __post_init__(self) -> None:
        for name, v in (("s1", self.s1), ("s2", self.s2)):
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.s1 + self.s2 > MAX_TOTAL_PHOTONS:
            raise ValueError(
                f"total photon number {self.s1 + self.s2} exceeds the "
                f"supported maximum {MAX_TOTAL_PHOTONS}"
            )

    @property
    def total(self) -> int:
        return self.s1 + self.s2


@dataclass(frozen=True)
class BsParams:
    """Constant-coefficient splitter: reflectance ``r`` and phase ``phi``.

    The transmittance is derived as ``t = 1 - r`` so that r + t = 1 holds
    exactly.  ``phi`` is stored reduced to [0, 2*pi).
    """

    r: float
    phi: float = _HALF_PI

    def __post_init__(self) -> None:
        if not (0.0 <= self.r <= 1.0):
            raise ValueError(f"reflectance must be in [0, 1], got {self.r!r}")
        if not math.isfinite(self.phi):
            raise ValueError(f"phase must be finite, got {self.phi!r}")
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "phi", float(self.phi) % _TWO_PI)

    @property
    def t(self) -> float:
        return 1.0 - self.r


@dataclass(frozen=True)
class OutputDistribution:
    """Probabilities of finding k photons at output port 1, k = 0..s1+s2.

    Port 2 then holds p = s1 + s2 - k photons.
    """

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1:
            raise ValueError("probs must be a one-dimensional vector")
        if probs.min() < -1e-10 or probs.max() > 1.0 + 1e-10:
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(probs.sum() - 1.0) > 1e-10:
            raise ValueError(f"probabilities must sum to 1, got {probs.sum()!r}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def __len__(self) -> int:
        return len(self.probs)

    def mean_port1(self) -> float:
        """Average photon number at output port 1."""
        return float(np.dot(np.arange(len(self.probs)), self.probs))


def bs_matrix(params: BsParams) -> np.ndarray:
    """Unitary 2x2 matrix of the splitter acting on the mode operators.

    Rows map the output annihilation operators (b1, b2) to the inputs
    (a1, a2):

        [[sqrt(T),            e^{i phi} sqrt(R)],
         [-e^{-i phi} sqrt(R), sqrt(T)         ]]
    """
    rt_t = math.sqrt(params.t)
    rt_r = math.sqrt(params.r)
    ph = np.exp(1j * params.phi)
    return np.array(
        [[rt_t, ph * rt_r], [-np.conj(ph) * rt_r, rt_t]],
        dtype=complex,
    )


# ---------------------------------------------------------------------------
# Closed-form amplitudes.
# ---------------------------------------------------------------------------

def _jacobi_int_at_minus3(n: int, m: int, k: int) -> int:
    """P_n^{(-(1+m+n), m-k)}(-3) as an exact integer.

    At x = -3 the binomial sum collapses to integer terms; exact big-int
    arithmetic sidesteps the heavy cancellation that ruins float sums once
    m + n grows past ~15.
    """
    total = 0
    nb = n + m - k
    for s in range(n + 1):
        j = n - s
        total += comb(m + j, j) * comb(nb, s) * ((-2) ** s)
    return total


@lru_cache(maxsize=64)
def _overlap_matrix(total: int) -> np.ndarray:
    """Orthogonal matrix A[n, k] of mode-overlap coefficients at phi = pi/2.

    Columns are indexed by the photon number k on port 1; the closed-form
    amplitude for input (s1, s2) and output (k, p) is
    sum_n A[n, s1] A[n, k] exp(-2 i n arccos(sqrt(1 - R))).
    """
    size = total + 1
    a = np.empty((size, size))
    for n in range(size):
        m = total - n
        for k in range(size):
            p = total - k
            pref = Fraction(factorial(m) * factorial(n), factorial(k) * factorial(p) * 2**total)
            a[n, k] = math.sqrt(float(pref)) * float(_jacobi_int_at_minus3(n, m, k))
    a.setflags(write=False)
    return a


def lambda_table(pair: FockPair, r_values: np.ndarray) -> np.ndarray:
    """Output distributions for one input pair over many reflectances.

    Returns an array of shape (len(r_values), s1+s2+1) whose rows are the
    probabilities lambda_k.  Evaluated on the canonical phase branch, where
    probabilities are exact; endpoints R = 0, 1 are returned as exact
    degenerate distributions.
    """
    rs = np.atleast_1d(np.asarray(r_values, dtype=float))
    if rs.min() < 0.0 or rs.max() > 1.0:
        raise ValueError("reflectance values must lie in [0, 1]")
    n_tot = pair.total
    a = _overlap_matrix(n_tot)
    b = a[:, pair.s1][:, None] * a  # (n, k)
    theta = np.arccos(np.sqrt(1.0 - rs))
    z = np.exp(-2j * np.outer(np.arange(n_tot + 1), theta))  # (n, r)
    c = np.einsum("nk,nr->rk", b, z)
    lam = np.abs(c) ** 2
    # Exact limits at the endpoints; arccos loses precision there.
    edge0 = rs == 0.0
    edge1 = rs == 1.0
    if edge0.any():
        lam[edge0] = 0.0
        lam[edge0, pair.s1] = 1.0
    if edge1.any():
        lam[edge1] = 0.0
        lam[edge1, pair.s2] = 1.0
    return lam


def output_distribution(pair: FockPair, params: BsParams) -> OutputDistribution:
    """Closed-form output photon-number distribution.

    The distribution is independent of the phase shift, so it is evaluated
    on the canonical branch regardless of ``params.phi``.
    """
    return OutputDistribution(probs=lambda_table(pair, np.array([params.r]))[0])


def _mu(r: float, phi: float) -> float:
    """Squeeze-like parameter of the general-phase amplitude formula.

    Written as 1 / (sqrt(1 + c^2) + c) with c = cos(phi) sqrt(T/R), which
    is algebraically identical to sqrt(1 + c^2) - c but avoids cancellation
    for small R.
    """
    c = math.cos(phi) * math.sqrt((1.0 - r) / r)
    return 1.0 / (math.sqrt(1.0 + c * c) + c)


def _jacobi_sum_general(n: int, m: int, k: int, x: float) -> float:
    nb = n + m - k
    lo = (x - 1.0) / 2.0
    hi = (x + 1.0) / 2.0
    terms = []
    for s in range(n + 1):
        j = n - s
        terms.append(((-1) ** j) * comb(m + j, j) * comb(nb, s) * lo**s * hi**j)
    return math.fsum(terms)


def amplitude_c(k: int, p: int, pair: FockPair, params: BsParams) -> complex:
    """Transition amplitude c_{k,p} from |s1, s2> to |k, p>.

    Evaluates the printed finite-sum formula at the given reflectance and
    phase; |c|^2 is the detection probability, which is phase independent.
    Phases outside (0, pi/2] fall back to the canonical branch pi/2 (the
    general formula's parameterisation is only single valued there).
    Cancellation grows with the photon number on the general branch, so for
    s1 + s2 beyond ~12 prefer :func:`output_distribution`.
    """
    for name, v in (("k", k), ("p", p)):
        if not isinstance(v, (int, np.integer)) or v < 0:
            raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")
    n_tot = pair.total
    if k + p != n_tot:
        raise ValueError(f"photon number not conserved: k + p = {k + p} != s1 + s2 = {n_tot}")
    r, phi = params.r, params.phi
    if r == 0.0:
        return 1.0 + 0.0j if k == pair.s1 else 0.0j
    if r == 1.0:
        if k != pair.s2:
            return 0.0j
        phase = -1j * phi * pair.s1 + 1j * phi * pair.s2
        return ((-1.0) ** pair.s2) * np.exp(phase)
    if not 0.0 < phi <= _HALF_PI:
        phi = _HALF_PI
    mu = _mu(r, phi)
    x_arg = -(2.0 + mu * mu) / (mu * mu)
    xi = math.acos(math.sqrt(1.0 - r) * math.sin(phi))
    log_mu = math.log(mu)
    log_1mu2 = math.log1p(mu * mu)

    def coeff(kk: int, pp: int, n: int, m: int) -> float:
        pref = Fraction(factorial(m) * factorial(n), factorial(kk) * factorial(pp))
        logmag = (kk + n) * log_mu - 0.5 * (n + m) * log_1mu2
        return math.sqrt(float(pref)) * math.exp(logmag) * _jacobi_sum_general(n, m, kk, x_arg)

    total = 0.0 + 0.0j
    for n in range(n_tot + 1):
        m = n_tot - n
        a_in = coeff(pair.s1, pair.s2, n, m)
        a_out = coeff(k, p, n, m)
        total += a_in * a_out * np.exp(-2j * n * xi)
    return complex(total)


# ---------------------------------------------------------------------------
# Brute-force oracle.
# ---------------------------------------------------------------------------

def brute_force_distribution(pair: FockPair, params: BsParams) -> OutputDistribution:
    """Output distribution by direct operator algebra on the Fock basis.

    The output-mode creation operators, written in terms of the input modes
    through the splitter matrix, are applied one photon at a time to the
    vacuum.  Independent of the closed-form path.
    """
    n_tot = pair.total
    rt_t = math.sqrt(params.t)
    rt_r = math.sqrt(params.r)
    ph = np.exp(1j * params.phi)
    b1 = (rt_t, np.conj(ph) * rt_r)  # components on (a1+, a2+)
    b2 = (-ph * rt_r, rt_t)

    amp = np.zeros((n_tot + 1, n_tot + 1), dtype=complex)
    amp[0, 0] = 1.0
    root = np.sqrt(np.arange(n_tot + 2, dtype=float))

    def apply_creation(c1: complex, c2: complex, count: int) -> None:
        nonlocal amp
        for _ in range(count):
            new = np.zeros_like(amp)
            new[1:, :] += c1 * root[1 : n_tot + 1, None] * amp[:-1, :]
            new[:, 1:] += c2 * root[None, 1 : n_tot + 1] * amp[:, :-1]
            amp = new

    apply_creation(*b1, pair.s1)
    apply_creation(*b2, pair.s2)
    amp /= math.sqrt(factorial(pair.s1) * factorial(pair.s2))

    ks = np.arange(n_tot + 1)
    probs = np.abs(amp[ks, n_tot - ks]) ** 2
    return OutputDistribution(probs=probs)


def mean_photon_numbers(s1: int, r: float) -> tuple[float, float]:
    """Average output photon numbers for the single-port input |s1, 0>.

    Each photon transmits independently, so port 1 holds s1*(1-R) photons
    on average and port 2 holds s1*R.
    """
    if not isinstance(s1, (int, np.integer)) or s1 < 0:
        raise ValueError(f"s1 must be a nonnegative integer, got {s1!r}")
    if not (0.0 <= r <= 1.0):
        raise ValueError(f"reflectance must be in [0, 1], got {r!r}")
    return s1 * (1.0 - r), s1 * r


def holland_burnett_state(s: int, phi: float) -> np.ndarray:
    """Amplitudes of the balanced-splitter output for the twin input |s, s>.

    Returns the complex amplitudes over the states |2n, 2s-2n> for
    n = 0..s; only even photon numbers are populated at either port.
    Defined for even s >= 2.
    """
    if not isinstance(s, (int, np.integer)) or s <= 0 or s % 2 != 0:
        raise ValueError(f"s must be a positive even integer, got {s!r}")
    if 2 * s > MAX_TOTAL_PHOTONS:
        raise ValueError(f"total photon number {2 * s} exceeds {MAX_TOTAL_PHOTONS}")
    amps = np.empty(s + 1, dtype=complex)
    for n in range(s + 1):
        mag2 = Fraction(factorial(2 * n) * factorial(2 * s - 2 * n),
                        4**s * (factorial(n) * factorial(s - n)) ** 2)
        amps[n] = math.sqrt(float(mag2)) * np.exp(2j * n * phi)
    return amps
