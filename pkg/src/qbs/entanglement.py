"""Schmidt-spectrum entanglement measures for splitter output states.

The output state of a Fock pair is already written in its Schmidt basis:
the photon-number probabilities lambda_k at port 1 are the Schmidt
eigenvalues.  Entanglement is quantified by the von Neumann entropy
S = -sum lambda ln lambda (natural log) and the Schmidt parameter
K = 1 / sum lambda^2, with closed forms for the special inputs |1,1>,
|s,s> at R = 1/2 and |s1,0>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .bs_core import BsParams, FockPair, output_distribution
from .numerics import hyp2f1_terminating, hyp4f3_terminating

__all__ = [
    "SchmidtSpectrum",
    "argmax_entanglement",
    "entropy_11_closed",
    "schmidt_k_11_closed",
    "schmidt_k_hb",
    "schmidt_k_s0",
    "schmidt_spectrum",
    "shannon_entropy",
]

_HB_MAX_S = 60


def shannon_entropy(lambdas: np.ndarray) -> float:
    """Entropy -sum lambda ln lambda in nats, with 0 ln 0 = 0."""
    lam = np.asarray(lambdas, dtype=float)
    lam = np.where(lam < 0.0, 0.0, lam)  # quadrature noise guard
    nz = lam[lam > 0.0]
    return float(-(nz * np.log(nz)).sum())


def _schmidt_k(lambdas: np.ndarray) -> float:
    lam = np.asarray(lambdas, dtype=float)
    return float(1.0 / np.sum(lam * lam))


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Schmidt eigenvalues with the derived entanglement measures."""

    lambdas: np.ndarray
    s_n: float
    k_param: float

    def __post_init__(self) -> None:
        lam = np.asarray(self.lambdas, dtype=float)
        if abs(lam.sum() - 1.0) > 1e-9:
            raise ValueError(f"Schmidt eigenvalues must sum to 1, got {lam.sum()!r}")
        if self.s_n < -1e-12 or self.s_n > math.log(len(lam)) + 1e-9:
            raise ValueError(f"entropy {self.s_n!r} outside [0, ln(len)]")
        if self.k_param < 1.0 - 1e-9 or self.k_param > len(lam) + 1e-9:
            raise ValueError(f"Schmidt parameter {self.k_param!r} outside [1, len]")
        lam.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)

    @classmethod
    def from_lambdas(cls, lambdas: np.ndarray) -> "SchmidtSpectrum":
        lam = np.asarray(lambdas, dtype=float)
        return cls(lambdas=lam, s_n=shannon_entropy(lam), k_param=_schmidt_k(lam))


def schmidt_spectrum(pair: FockPair, params: BsParams) -> SchmidtSpectrum:
    """Schmidt spectrum of the output state for a Fock pair."""
    return SchmidtSpectrum.from_lambdas(output_distribution(pair, params).probs)


def entropy_11_closed(r: float) -> float:
    """Closed-form von Neumann entropy for the input |1,1>.

    S(R) = -(1-2R)^2 ln (1-2R)^2 - 4R(1-R) ln(2R(1-R)), with the 0 ln 0
    limits at R in {0, 1/2, 1} taken as zero.
    """
    if not (0.0 <= r <= 1.0):
        raise ValueError(f"reflectance must be in [0, 1], got {r!r}")
    w = (1.0 - 2.0 * r) ** 2
    rt = 2.0 * r * (1.0 - r)
    out = 0.0
    if w > 0.0:
        out -= w * math.log(w)
    if rt > 0.0:
        out -= 2.0 * rt * math.log(rt)
    return out


def schmidt_k_11_closed(r: float) -> float:
    """Closed-form Schmidt parameter for the input |1,1>.

    K(R) = 1 / (1 - 8R(1-R)(1 - 3R(1-R))); the maximum K = 3 sits at
    R = (1 +- 1/sqrt(3))/2.
    """
    if not (0.0 <= r <= 1.0):
        raise ValueError(f"reflectance must be in [0, 1], got {r!r}")
    w = r * (1.0 - r)
    return 1.0 / (1.0 - 8.0 * w * (1.0 - 3.0 * w))


def schmidt_k_hb(s: int) -> float:
    """Schmidt parameter of the twin-Fock balanced-splitter output |s, s>.

    K = pi (s!)^2 / (Gamma(s+1/2)^2 4F3(1/2,1/2,-s,-s; 1,1/2-s,1/2-s; 1)).
    Guarded at s > 60 where the log-Gamma prefactor loses the last digits.
    """
    if not isinstance(s, (int, np.integer)) or s <= 0 or s % 2 != 0:
        raise ValueError(f"s must be a positive even integer, got {s!r}")
    if s > _HB_MAX_S:
        raise ValueError(f"s = {s} exceeds the supported maximum {_HB_MAX_S}")
    prefactor = math.exp(math.log(math.pi) + 2.0 * gammaln(s + 1) - 2.0 * gammaln(s + 0.5))
    series = hyp4f3_terminating(0.5, 0.5, -s, -s, 1.0, 0.5 - s, 0.5 - s, 1.0)
    return prefactor / series


def schmidt_k_s0(s1: int, r: float) -> float:
    """Schmidt parameter for the single-port input |s1, 0>.

    K = 1 / ((1-R)^{2 s1} 2F1(-s1, -s1; 1; (R/(1-R))^2)).  The formula has
    a pole at R = 1; evaluate at 1-R there instead (K is symmetric).
    Its maximum over R sits at R = 1/2 and equals 4^{s1} (s1!)^2 / (2 s1)!.
    """
    if not isinstance(s1, (int, np.integer)) or s1 <= 0:
        raise ValueError(f"s1 must be a positive integer, got {s1!r}")
    if not (0.0 <= r < 1.0):
        raise ValueError(f"reflectance must be in [0, 1); got {r!r} (use symmetry R -> 1-R)")
    z = (r / (1.0 - r)) ** 2
    series = hyp2f1_terminating(s1, -float(s1), 1.0, z)
    return 1.0 / ((1.0 - r) ** (2 * s1) * series)


def argmax_entanglement(pair: FockPair, measure: str = "schmidt") -> tuple[float, float]:
    """Locate the reflectance maximising an entanglement measure.

    Scans a 401-point grid on [0, 1/2] (the mirror maximum sits at 1 - R by
    symmetry), then refines with golden-section search to |dR| < 1e-7.
    Grid ties resolve toward the balanced splitter R = 1/2; a flat profile
    (e.g. the vacuum pair) reports R = 1/2 directly.

    Parameters
    ----------
    pair : FockPair
        Input photon numbers.
    measure : {"schmidt", "vn"}
        Schmidt parameter K or von Neumann entropy.

    Returns
    -------
    (r_star, value) : tuple of float
    """
    if measure not in ("schmidt", "vn"):
        raise ValueError(f"measure must be 'schmidt' or 'vn', got {measure!r}")

    def f(r: float) -> float:
        spec = schmidt_spectrum(pair, BsParams(r=r))
        return spec.k_param if measure == "schmidt" else spec.s_n

    grid = np.linspace(0.0, 0.5, 401)
    vals = np.array([f(r) for r in grid])
    if vals.max() - vals.min() <= 1e-14 * max(1.0, abs(vals.max())):
        return 0.5, float(vals[-1])
    idx = len(vals) - 1 - int(np.argmax(vals[::-1]))  # rightmost grid maximum
    lo = grid[max(idx - 1, 0)]
    hi = grid[min(idx + 1, len(grid) - 1)]

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-7:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    r_star = c if fc >= fd else d
    return float(r_star), float(f(r_star))
