"""Special functions and quadrature kernels used by the rest of the package.

The photon-number amplitudes of a two-mode splitter are built from Jacobi
polynomials whose first parameter is a negative integer.  Standard
orthogonal-polynomial routines assume alpha > -1 and are invalid there, so
``jacobi_p`` evaluates the terminating binomial sum directly.  The closed
forms for the Schmidt parameter need terminating 2F1 / 4F3 hypergeometric
sums, and the frequency integrals over photon spectra need Gauss-Hermite
rules plus a robust fallback for strongly oscillatory integrands.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special as _sp

__all__ = [
    "ConvergenceError",
    "QuadratureRule",
    "default_order",
    "erf",
    "gauss_hermite",
    "gaussian_expect",
    "hyp2f1_terminating",
    "hyp4f3_terminating",
    "jacobi_p",
]

MIN_ORDER = 2
MAX_ORDER = 512

# Gaussian tails are truncated here for composite rules; erfc(8.5/sqrt(2)) ~ 1e-17.
_TAIL_SIGMAS = 8.5


class ConvergenceError(RuntimeError):
    """Raised when a doubling check fails to stabilise an integral."""


def default_order() -> int:
    """Default Gauss-Hermite order, overridable via ``QBS_QUAD_ORDER``."""
    raw = os.environ.get("QBS_QUAD_ORDER")
    if raw is None:
        return 96
    order = int(raw)
    if not MIN_ORDER <= order <= MAX_ORDER:
        raise ValueError(f"QBS_QUAD_ORDER must be in [{MIN_ORDER}, {MAX_ORDER}], got {order}")
    return order


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite nodes and weights for the weight function exp(-x^2).

    Attributes
    ----------
    nodes : ndarray
        Strictly increasing abscissae.
    weights : ndarray
        Positive weights; their sum equals sqrt(pi).
    order : int
        Number of nodes.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self) -> None:
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def integrate(self, f) -> float:
        """Approximate the integral of f(x) exp(-x^2) over the real line."""
        return float(np.sum(self.weights * f(self.nodes)))


@lru_cache(maxsize=32)
def _hermite_rule(order: int) -> QuadratureRule:
    nodes, weights = _sp.roots_hermite(order)
    # Tail weights ~ exp(-x^2) underflow beyond order ~380; nudge them onto
    # the smallest subnormal so positivity survives in float64.
    weights = np.maximum(weights, 5e-324)
    return QuadratureRule(nodes=nodes, weights=weights, order=order)


def gauss_hermite(order: int) -> QuadratureRule:
    """Return the Gauss-Hermite rule of the given order.

    The rule integrates f(x) exp(-x^2) over the real line and is exact for
    polynomials of degree < 2 * order.

    Parameters
    ----------
    order : int
        Number of nodes, between 2 and 512.
    """
    if not isinstance(order, (int, np.integer)):
        raise TypeError(f"order must be an integer, got {order!r}")
    if not MIN_ORDER <= order <= MAX_ORDER:
        raise ValueError(f"order must be in [{MIN_ORDER}, {MAX_ORDER}], got {order}")
    return _hermite_rule(int(order))


def erf(x: float) -> float:
    """Error function.

    Thin wrapper over :func:`scipy.special.erf`, kept as the package-wide
    entry point so every module shares one implementation.
    """
    if isinstance(x, (float, int)):
        if math.isnan(x):
            raise ValueError("erf requires a finite argument")
        return float(_sp.erf(x))
    return _sp.erf(x)


def _gbinom(z: float, k: int) -> float:
    """Generalised binomial coefficient C(z, k) for integer k >= 0.

    Evaluated as a plain product so negative-integer z is exact rather than
    hitting a Gamma-function pole.
    """
    out = 1.0
    for j in range(k):
        out *= (z - j) / (j + 1)
    return out


def jacobi_p(n: int, alpha: float, beta: float, x: float) -> float:
    """Jacobi polynomial P_n^(alpha, beta)(x) by its terminating sum.

    P_n^(a,b)(x) = sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s)

    Valid for any real alpha and beta, including the negative integers that
    make the usual recurrence and Gamma-ratio forms singular.

    Parameters
    ----------
    n : int
        Polynomial degree, n >= 0.
    alpha, beta : float
        Jacobi parameters; no positivity restriction.
    x : float
        Evaluation point; must be finite.
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {n!r}")
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    if n == 0:
        return 1.0
    lo = (x - 1.0) / 2.0
    hi = (x + 1.0) / 2.0
    terms = []
    for s in range(n + 1):
        c = _gbinom(n + alpha, n - s) * _gbinom(n + beta, s)
        if c == 0.0:
            continue
        terms.append(c * lo**s * hi ** (n - s))
    return math.fsum(terms)


def _log_pochhammer(a: float, k: int) -> tuple[float, float]:
    """Return (log| (a)_k |, sign) with sign in {-1, 0, 1}."""
    logabs = 0.0
    sign = 1.0
    for j in range(k):
        v = a + j
        if v == 0.0:
            return -math.inf, 0.0
        logabs += math.log(abs(v))
        if v < 0.0:
            sign = -sign
    return logabs, sign


def _is_nonpositive_int(v: float) -> bool:
    return v <= 0.0 and float(v).is_integer()


def hyp2f1_terminating(n: int, b: float, c: float, x: float) -> float:
    """Terminating Gauss hypergeometric sum 2F1(-n, b; c; x).

    The first parameter is -n, so the series is a polynomial of degree n.
    Terms are accumulated from log-Pochhammer magnitudes with explicit sign
    tracking, which keeps the evaluation stable when the coefficients are
    factorially large.

    Raises
    ------
    ValueError
        If c is a nonpositive integer whose pole is reached before the
        series terminates.
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    if _is_nonpositive_int(c) and -int(c) < n:
        raise ValueError(f"lower parameter c={c} hits a pole before the series terminates")
    terms = []
    for k in range(n + 1):
        la, sa = _log_pochhammer(-float(n), k)
        lb, sb = _log_pochhammer(b, k)
        lc, sc = _log_pochhammer(c, k)
        sgn = sa * sb * sc
        if sgn == 0.0:
            if sc == 0.0:
                raise ValueError(f"lower parameter c={c} hits a pole inside the sum")
            continue
        logmag = la + lb - lc - math.lgamma(k + 1)
        if x == 0.0:
            if k == 0:
                terms.append(1.0)
            continue
        logmag += k * math.log(abs(x))
        if x < 0.0 and k % 2 == 1:
            sgn = -sgn
        terms.append(sgn * math.exp(logmag))
    return math.fsum(terms)


def hyp4f3_terminating(
    a1: float, a2: float, a3: float, a4: float,
    b1: float, b2: float, b3: float,
    x: float,
) -> float:
    """Terminating generalised hypergeometric sum 4F3(a1..a4; b1..b3; x).

    At least one upper parameter must be a nonpositive integer; the series
    stops after the smallest such -a + 1 terms.  Evaluation uses log-Gamma
    style magnitude accumulation with sign tracking, stable for a few
    hundred terms.
    """
    uppers = (a1, a2, a3, a4)
    lowers = (b1, b2, b3)
    n_stop = None
    for a in uppers:
        if _is_nonpositive_int(a):
            stop = -int(a)
            n_stop = stop if n_stop is None else min(n_stop, stop)
    if n_stop is None:
        raise ValueError("series does not terminate: no upper parameter is a nonpositive integer")
    for b in lowers:
        if _is_nonpositive_int(b) and -int(b) < n_stop:
            raise ValueError(f"lower parameter {b} hits a pole before the series terminates")
    terms = []
    for k in range(n_stop + 1):
        logmag = -math.lgamma(k + 1)
        sgn = 1.0
        for a in uppers:
            la, sa = _log_pochhammer(a, k)
            logmag += la
            sgn *= sa
        if sgn == 0.0:
            continue
        for b in lowers:
            lb, sb = _log_pochhammer(b, k)
            logmag -= lb
            sgn *= sb
        if x == 0.0:
            if k == 0:
                terms.append(1.0)
            continue
        logmag += k * math.log(abs(x))
        if x < 0.0 and k % 2 == 1:
            sgn = -sgn
        terms.append(sgn * math.exp(logmag))
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# Gaussian averaging with an escalation ladder for oscillatory integrands.
# ---------------------------------------------------------------------------

def _composite_gauss_legendre(mean: float, std: float, panels: int, nodes_per_panel: int = 16):
    """Nodes and normalised Gaussian weights on [mean - k*std, mean + k*std]."""
    xg, wg = leggauss(nodes_per_panel)
    edges = np.linspace(mean - _TAIL_SIGMAS * std, mean + _TAIL_SIGMAS * std, panels + 1)
    half = 0.5 * (edges[1] - edges[0])
    mids = 0.5 * (edges[1:] + edges[:-1])
    x = (mids[:, None] + half * xg[None, :]).ravel()
    w = np.broadcast_to(half * wg[None, :], (panels, nodes_per_panel)).ravel()
    dens = np.exp(-0.5 * ((x - mean) / std) ** 2)
    w = w * dens
    return x, w / w.sum()


def _hermite_points(mean: float, std: float, order: int):
    rule = gauss_hermite(order)
    x = mean + math.sqrt(2.0) * std * rule.nodes
    w = rule.weights / rule.weights.sum()
    return x, w


def _eval(f, x: np.ndarray, w: np.ndarray):
    vals = np.asarray(f(x), dtype=float)
    if vals.ndim == 1:
        return float(np.dot(w, vals))
    return np.tensordot(w, vals, axes=(0, 0))


def gaussian_expect(
    f,
    mean: float = 0.0,
    std: float = 1.0,
    *,
    oscillation: float = 0.0,
    tol: float = 1e-9,
    start_order: int | None = None,
    max_nodes: int = 2_000_000,
):
    """Expectation of ``f`` under a normal law N(mean, std^2).

    ``f`` must accept an ndarray of sample points and return either a
    same-length array or a (points, d) array; the result is a float or a
    length-d array.  Every returned estimate has passed a doubling check:
    the value is accepted only once refining the rule changes it by less
    than ``tol`` (absolute, relative to max(1, |value|)).

    Parameters
    ----------
    f : callable
        Vectorised integrand.
    mean, std : float
        Parameters of the Gaussian measure.  ``std = 0`` evaluates f(mean).
    oscillation : float
        Upper bound for |d(phase)/dx| of the integrand in the original
        variable, used to pre-size the rule.  Zero means smooth.
    tol : float
        Doubling-check tolerance.
    start_order : int, optional
        Initial Gauss-Hermite order; defaults to :func:`default_order`.

    Raises
    ------
    ConvergenceError
        If the doubling check still fails at ``max_nodes`` points.
    """
    if std < 0.0:
        raise ValueError("std must be nonnegative")
    if std == 0.0:
        vals = np.asarray(f(np.array([mean])), dtype=float)
        return float(vals[0]) if vals.ndim == 1 else vals[0]

    # Oscillation cycles across the truncated support; ~2.5 panels per cycle.
    cycles = oscillation * std * 2.0 * _TAIL_SIGMAS / (2.0 * math.pi)
    order0 = start_order if start_order is not None else default_order()

    # Hermite rules resolve a phase slope k only with order ~ k^2, so they
    # are attempted for mild oscillation and skipped otherwise.
    attempts: list[tuple[str, int]] = []
    q = max(order0, int(math.ceil(2.0 * cycles * cycles)) + 16)
    if 2 * q <= MAX_ORDER:
        attempts.append(("hermite", q))
        attempts.append(("hermite", 2 * q))
    panels = max(12, int(math.ceil(cycles * 2.5)) + 8)
    while panels * 16 <= max_nodes:
        attempts.append(("legendre", panels))
        panels *= 2

    prev = None
    for kind, size in attempts:
        if kind == "hermite":
            if size > MAX_ORDER:
                prev = None
                continue
            x, w = _hermite_points(mean, std, size)
        else:
            x, w = _composite_gauss_legendre(mean, std, size)
        val = _eval(f, x, w)
        if prev is not None:
            scale = max(1.0, float(np.max(np.abs(val))))
            if float(np.max(np.abs(val - prev))) <= tol * scale:
                return val
        prev = val
    raise ConvergenceError(
        f"integral failed the doubling check at {max_nodes} nodes "
        f"(oscillation hint {oscillation:g}, std {std:g})"
    )
