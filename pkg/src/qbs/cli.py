"""Command-line front end: sweeps, named figure datasets, CSV/JSON output.

Commands take the dimensionless controls (sigma/Omega, Omega*t_bs,
Omega_g/Omega) directly; absolute-unit inputs (rad/s, seconds) are an
optional alternative resolved through the medium parameters.  Output is
deterministic: the same configuration produces byte-identical files.

Exit codes: 0 success, 2 invalid configuration, 3 quadrature
non-convergence.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import erfcx

from . import __version__
from .bs_core import BsParams, FockPair, output_distribution
from .entanglement import schmidt_spectrum, shannon_entropy
from .hom import (
    JsaParams,
    balanced_tbs,
    difference_bandwidth,
    hom_conventional,
    jsa_derived,
    jsa_norm_constant,
    p12_frequency_dependent,
    reflectance_moments,
)
from .numerics import ConvergenceError, default_order
from .waveguide import (
    MediumParams,
    SpectralProfile,
    WaveguideParams,
    asymptotic_schmidt_modes,
    averaged_schmidt_modes,
    coincidence_probs_asymptotic,
    entropy_asymptotic_11,
    omega_from_medium,
)

__all__ = ["RunConfig", "figure_recipes", "main", "run"]

COMMANDS = (
    "evolve",
    "entropy-sweep",
    "stats",
    "waveguide-entropy",
    "hom-dip",
    "visibility",
    "figure",
)

_BALANCED_SCAN_MAX = 40.0


@dataclass(frozen=True)
class RunConfig:
    """One validated CLI invocation."""

    command: str
    params: dict = field(default_factory=dict)
    output_path: str = "-"
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be 'csv' or 'json', got {self.format!r}")


@dataclass
class _Dataset:
    """Computed table plus provenance; written as CSV or JSON."""

    columns: list[tuple[str, np.ndarray]]
    params: dict
    methods: list[str]
    extra_meta: dict = field(default_factory=dict)

    def meta(self) -> dict:
        return {
            "equations": self.methods,
            "quadrature_order": default_order(),
            "tool_version": __version__,
            **self.extra_meta,
        }


def _fmt(x: float) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def _write(dataset: _Dataset, config: RunConfig) -> None:
    if config.format == "csv":
        lines = [",".join(name for name, _ in dataset.columns)]
        n = len(dataset.columns[0][1])
        for i in range(n):
            lines.append(",".join(_fmt(col[i]) for _, col in dataset.columns))
        text = "\n".join(lines) + "\n"
    else:
        grid_name, grid_col = dataset.columns[0][0], dataset.columns[0][1]
        payload = {
            "params": dataset.params,
            "grid": {grid_name: [float(v) for v in grid_col]},
            "values": {
                name: [float(v) for v in col] for name, col in dataset.columns[1:]
            },
            "meta": dataset.meta(),
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if config.output_path in ("-", ""):
        sys.stdout.write(text)
    else:
        Path(config.output_path).write_text(text)


def _parse_grid(spec: str, name: str) -> np.ndarray:
    """Parse 'start:stop:count' into a linspace grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"{name} must look like start:stop:count, got {spec!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ValueError(f"bad {name} grid {spec!r}: {exc}") from None
    if count < 2:
        raise ValueError(f"{name} grid needs at least 2 points, got {count}")
    if stop <= start:
        raise ValueError(f"{name} grid needs stop > start, got {spec!r}")
    return np.linspace(start, stop, count)


def _require(params: dict, *names: str) -> None:
    missing = [n for n in names if params.get(n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise ValueError(f"missing required parameter(s): {flags}")


def _pair(params: dict) -> FockPair:
    _require(params, "s1", "s2")
    return FockPair(int(params["s1"]), int(params["s2"]))


def _resolve_omega(params: dict) -> float:
    """Coupling frequency: explicit value or derived from the medium."""
    if params.get("omega_coupling") is not None:
        return float(params["omega_coupling"])
    needed = ("electron_count", "modal_volume", "polarization_overlap", "center_frequency")
    if all(params.get(k) is not None for k in needed):
        medium = MediumParams(
            electron_count=float(params["electron_count"]),
            modal_volume=float(params["modal_volume"]),
            polarization_overlap=float(params["polarization_overlap"]),
            center_frequency=float(params["center_frequency"]),
        )
        return omega_from_medium(medium)
    raise ValueError(
        "absolute-unit mode needs --omega-coupling or the full set of medium "
        "parameters (--electron-count, --modal-volume, --polarization-overlap, "
        "--center-frequency)"
    )


def _waveguide_dimensionless(params: dict, key: str = "omega_tbs") -> WaveguideParams:
    if params.get(key) is not None:
        return WaveguideParams.from_interaction_phase(float(params[key]))
    omega = _resolve_omega(params)
    if params.get("t_bs") is None:
        raise ValueError("need --omega-tbs (dimensionless) or --t-bs seconds with a coupling frequency")
    return WaveguideParams(omega_coupling=omega, t_bs=float(params["t_bs"]))


# ---------------------------------------------------------------------------
# Command implementations.  Each validates, computes, and returns a _Dataset.
# ---------------------------------------------------------------------------

def _cmd_evolve(params: dict) -> _Dataset:
    pair = _pair(params)
    _require(params, "r")
    bs = BsParams(r=float(params["r"]), phi=float(params.get("phi", math.pi / 2)))
    dist = output_distribution(pair, bs)
    ks = np.arange(len(dist.probs))
    return _Dataset(
        columns=[
            ("k(photons_port1)", ks),
            ("p(photons_port2)", pair.total - ks),
            ("prob(dimensionless)", dist.probs),
        ],
        params={"s1": pair.s1, "s2": pair.s2, "r": bs.r, "phi": bs.phi},
        methods=["fock-amplitudes-jacobi-sum"],
    )


def _cmd_entropy_sweep(params: dict) -> _Dataset:
    pair = _pair(params)
    measure = params.get("measure", "vn")
    if measure not in ("vn", "schmidt"):
        raise ValueError(f"measure must be vn or schmidt, got {measure!r}")
    rs = _parse_grid(params.get("r_grid", "0:1:201"), "r")
    if rs.min() < 0.0 or rs.max() > 1.0:
        raise ValueError("r grid must stay inside [0, 1]")
    vals = np.empty(len(rs))
    for i, r in enumerate(rs):
        spec = schmidt_spectrum(pair, BsParams(r=float(r)))
        vals[i] = spec.s_n if measure == "vn" else spec.k_param
    name = "s_n(nats)" if measure == "vn" else "k_param(dimensionless)"
    return _Dataset(
        columns=[("r(dimensionless)", rs), (name, vals)],
        params={"s1": pair.s1, "s2": pair.s2, "measure": measure},
        methods=["fock-amplitudes-jacobi-sum", "schmidt-spectrum-measures"],
    )


def _cmd_stats(params: dict) -> _Dataset:
    pair = _pair(params)
    if params.get("r") is not None:
        bs = BsParams(r=float(params["r"]), phi=float(params.get("phi", math.pi / 2)))
        probs = output_distribution(pair, bs).probs
        used = {"r": bs.r, "phi": bs.phi}
        methods = ["fock-amplitudes-jacobi-sum"]
    else:
        sigma = params.get("sigma_over_omega")
        if sigma is None:
            raise ValueError("stats needs either --r or --sigma-over-omega with --omega-tbs")
        wg = _waveguide_dimensionless(params)
        sigma = float(sigma)
        if sigma == 0.0:
            r_mono = math.sin(0.5 * wg.interaction_phase) ** 2
            probs = output_distribution(pair, BsParams(r=r_mono)).probs
        else:
            width = sigma * wg.omega_coupling
            center = float(params.get("profile_center_ratio", 1e4)) * wg.omega_coupling
            prof = SpectralProfile(center=center, width=width)
            probs = averaged_schmidt_modes(pair, wg, prof, prof).lambdas
        used = {"sigma_over_omega": sigma, "omega_tbs": wg.interaction_phase}
        methods = ["schmidt-average-spectral-quadrature"]
    ks = np.arange(len(probs))
    return _Dataset(
        columns=[
            ("k(photons_port1)", ks),
            ("p(photons_port2)", pair.total - ks),
            ("prob(dimensionless)", probs),
        ],
        params={"s1": pair.s1, "s2": pair.s2, **used},
        methods=methods,
    )


def _cmd_waveguide_entropy(params: dict) -> _Dataset:
    pair = _pair(params)
    if params.get("asymptotic"):
        sigmas = _parse_grid(params.get("sigma_grid", "0.05:3:120"), "sigma")
        if sigmas.min() <= 0.0:
            raise ValueError("sigma grid must be strictly positive")
        vals = np.array([asymptotic_schmidt_modes(pair, float(u)).s_n for u in sigmas])
        return _Dataset(
            columns=[("sigma_over_omega(dimensionless)", sigmas), ("s_n(nats)", vals)],
            params={"s1": pair.s1, "s2": pair.s2, "asymptotic": True},
            methods=["long-time-period-average", "schmidt-average-spectral-quadrature"],
        )
    _require(params, "sigma_over_omega")
    sigma = float(params["sigma_over_omega"])
    ts = _parse_grid(params.get("omega_tbs_grid", "0:10:151"), "omega-tbs")
    if ts.min() < 0.0:
        raise ValueError("omega-tbs grid must be nonnegative")
    vals = np.empty(len(ts))
    for i, t in enumerate(ts):
        if sigma == 0.0:
            r_mono = math.sin(0.5 * float(t)) ** 2
            vals[i] = schmidt_spectrum(pair, BsParams(r=r_mono)).s_n
        else:
            wg = WaveguideParams.from_interaction_phase(float(t))
            prof = SpectralProfile(center=1e4, width=sigma)
            vals[i] = averaged_schmidt_modes(pair, wg, prof, prof).s_n
    return _Dataset(
        columns=[("omega_tbs(dimensionless)", ts), ("s_n(nats)", vals)],
        params={"s1": pair.s1, "s2": pair.s2, "sigma_over_omega": sigma},
        methods=["schmidt-average-spectral-quadrature"],
    )


def _jsa_from_params(params: dict) -> JsaParams | None:
    keys = ("pump_center", "pump_width", "center1", "center2", "width1", "width2")
    if all(params.get(k) is None for k in keys):
        return None
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        raise ValueError(f"incomplete JSA: missing {', '.join(missing)}")
    pump_width = math.inf if str(params["pump_width"]) == "inf" else float(params["pump_width"])
    return JsaParams(
        pump_center=float(params["pump_center"]),
        pump_width=pump_width,
        center1=float(params["center1"]),
        center2=float(params["center2"]),
        width1=float(params["width1"]),
        width2=float(params["width2"]),
    )


def _jsa_meta(jsa: JsaParams) -> dict:
    printed_c, numeric_c = jsa_norm_constant(jsa)
    return {
        "norm_constant_printed": printed_c,
        "norm_constant_numeric": numeric_c,
        "norm_constant_rel_dev": abs(printed_c - numeric_c) / numeric_c,
    }


def _hom_dimensionless(params: dict) -> tuple[dict, np.ndarray, np.ndarray, dict, float]:
    """Shared hom-dip computation.

    Returns (used params, delays, p12, meta, tau_c) with tau_c in the same
    unit as the delay column.
    """
    delays = _parse_grid(params.get("delay_grid", "-4:4:161"), "delay")
    jsa = _jsa_from_params(params)
    meta: dict = {}
    if params.get("conventional"):
        if jsa is None:
            # Canonical unit-width packets; delays are then in 1/bandwidth.
            jsa = JsaParams.fock(2e4, 2e4, 1.0, 1.0)
            scale = 1.0 / difference_bandwidth(jsa)
            unit = "1/difference_bandwidth"
            tau_c = 1.0
        else:
            scale = 1.0
            unit = "s"
            tau_c = 1.0 / difference_bandwidth(jsa)
        p12 = np.array([hom_conventional(jsa, float(dt) * scale) for dt in delays])
        meta.update(_jsa_meta(jsa))
        meta["normalization"] = "p12 = 1 at zero reflectance"
        used = {"conventional": True, "delay_unit": unit}
        return used, delays, p12, meta, tau_c
    if jsa is not None:
        omega = _resolve_omega(params)
        wg = _waveguide_dimensionless(params)
        d = jsa_derived(jsa)
        g = d.omega_g / omega
        b = d.b_param
        ratio = d.delta_omega / d.omega_g
        omega_t = wg.interaction_phase
        delays_og = delays * d.omega_g
        unit = "s"
        tau_c = 1.0 / (d.b_param * d.omega_g)
        if d.omega0_term_ratio > 1e-3:
            meta["omega0_width_term_ratio"] = d.omega0_term_ratio
        meta.update(_jsa_meta(jsa))
    else:
        _require(params, "omega_g_over_omega")
        g = float(params["omega_g_over_omega"])
        b = float(params.get("b_param", 1.0))
        ratio = float(params.get("delta_omega_ratio", 0.0))
        if params.get("balanced"):
            roots = balanced_tbs(g, _BALANCED_SCAN_MAX) if g > 0 else [5 * math.pi / 2]
            if not roots:
                raise ValueError(
                    f"no balanced interaction time exists for omega_g/omega = {g:g}"
                )
            near = float(params.get("balanced_near", 5 * math.pi / 2))
            omega_t = min(roots, key=lambda t: abs(t - near))
        else:
            if params.get("omega_tbs") is None:
                raise ValueError("hom-dip needs --omega-tbs or --balanced")
            omega_t = float(params["omega_tbs"])
        delays_og = delays
        unit = "1/omega_g"
        tau_c = 1.0 / b
    p12 = np.array(
        [p12_frequency_dependent(g, omega_t, b, ratio, float(dt)) for dt in delays_og]
    )
    meta["normalization"] = "p12 = 1 at zero interaction time"
    used = {
        "omega_g_over_omega": g,
        "omega_tbs": omega_t,
        "b_param": b,
        "delta_omega_ratio": ratio,
        "delay_unit": unit,
    }
    return used, delays, p12, meta, tau_c


def _cmd_hom_dip(params: dict) -> _Dataset:
    used, delays, p12, meta, _ = _hom_dimensionless(params)
    unit = used.pop("delay_unit")
    return _Dataset(
        columns=[(f"delay({unit})", delays), ("p12(dimensionless)", p12)],
        params=used,
        methods=["reduced-dip-integral", "detuned-reflectance"],
        extra_meta=meta,
    )


def _cmd_visibility(params: dict) -> _Dataset:
    used, delays, p12, meta, tau_c = _hom_dimensionless(params)
    unit = used.pop("delay_unit")
    i0 = int(np.argmin(np.abs(delays)))
    if delays[i0] != 0.0:
        raise ValueError("visibility needs a delay grid containing 0")
    if np.max(np.abs(delays)) < 10.0 * tau_c:
        raise ValueError(
            f"visibility needs a plateau sample at |delay| >= {10.0 * tau_c:g} "
            f"({unit}); extend --delay-grid"
        )
    p0 = p12[i0]
    pinf = p12[int(np.argmax(np.abs(delays)))]
    vis = (pinf - p0) / pinf
    return _Dataset(
        columns=[
            (f"delay({unit})", delays),
            ("p12(dimensionless)", p12),
            ("visibility(dimensionless)", np.full(len(delays), vis)),
        ],
        params=used,
        methods=["reduced-dip-integral", "dip-visibility"],
        extra_meta=meta,
    )


def _cmd_figure(params: dict) -> _Dataset:
    name = params.get("name")
    recipes = _figure_registry()
    if name not in recipes:
        known = ", ".join(sorted(recipes))
        raise ValueError(f"unknown figure {name!r}; known: {known}")
    return recipes[name]["build"](params)


_COMMAND_TABLE = {
    "evolve": _cmd_evolve,
    "entropy-sweep": _cmd_entropy_sweep,
    "stats": _cmd_stats,
    "waveguide-entropy": _cmd_waveguide_entropy,
    "hom-dip": _cmd_hom_dip,
    "visibility": _cmd_visibility,
    "figure": _cmd_figure,
}


def run(config: RunConfig) -> int:
    """Execute a validated configuration; returns the process exit status."""
    try:
        dataset = _COMMAND_TABLE[config.command](config.params)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numeric non-convergence: {exc}", file=sys.stderr)
        return 3
    _write(dataset, config)
    return 0


# ---------------------------------------------------------------------------
# Figure recipes.
# ---------------------------------------------------------------------------

def _entropy_columns(pairs, rs, measure):
    cols = [("r(dimensionless)", rs)]
    for s1, s2 in pairs:
        vals = np.empty(len(rs))
        for i, r in enumerate(rs):
            spec = schmidt_spectrum(FockPair(s1, s2), BsParams(r=float(r)))
            vals[i] = spec.s_n if measure == "vn" else spec.k_param
        base = "s_n" if measure == "vn" else "k_param"
        unit = "nats" if measure == "vn" else "dimensionless"
        cols.append((f"{base}_{s1}_{s2}({unit})", vals))
    return cols


def _fig_entropy_vs_r(pairs, measure, r_hi=1.0):
    def build(params: dict) -> _Dataset:
        rs = _parse_grid(params.get("r_grid", f"0:{r_hi}:201"), "r")
        return _Dataset(
            columns=_entropy_columns(pairs, rs, measure),
            params={"pairs": [list(p) for p in pairs], "measure": measure},
            methods=["fock-amplitudes-jacobi-sum", "schmidt-spectrum-measures"],
        )
    return build

_FIG7_SIGMAS = (10.0, 5.0, 3.0, 1.0, 1.0 / 3.0, 0.0)


def _entropy_vs_omega_t(pair: FockPair, sigma: float, ts: np.ndarray) -> np.ndarray:
    vals = np.empty(len(ts))
    for i, t in enumerate(ts):
        if sigma == 0.0:
            vals[i] = schmidt_spectrum(pair, BsParams(r=math.sin(0.5 * float(t)) ** 2)).s_n
        else:
            wg = WaveguideParams.from_interaction_phase(float(t))
            prof = SpectralProfile(center=1e4, width=sigma)
            vals[i] = averaged_schmidt_modes(pair, wg, prof, prof).s_n
    return vals


def _fig_waveguide_entropy(pairs):
    def build(params: dict) -> _Dataset:
        ts = _parse_grid(params.get("omega_tbs_grid", "0.001:10:121"), "omega-tbs")
        cols = [("omega_tbs(dimensionless)", ts)]
        for s1, s2 in pairs:
            for sigma in _FIG7_SIGMAS:
                vals = _entropy_vs_omega_t(FockPair(s1, s2), sigma, ts)
                cols.append((f"s_n_{s1}_{s2}_sigma_{sigma:g}(nats)", vals))
        return _Dataset(
            columns=cols,
            params={"pairs": [list(p) for p in pairs], "sigma_over_omega": list(_FIG7_SIGMAS)},
            methods=["schmidt-average-spectral-quadrature"],
        )
    return build


def _fig_contour(pair_t):
    def build(params: dict) -> _Dataset:
        sigmas = _parse_grid(params.get("sigma_grid", "0.05:3:40"), "sigma")
        ts = _parse_grid(params.get("omega_tbs_grid", "0.25:30:120"), "omega-tbs")
        pair = FockPair(*pair_t)
        rows_s, rows_t, rows_v = [], [], []
        for u in sigmas:
            prof = SpectralProfile(center=1e4, width=float(u))
            for t in ts:
                wg = WaveguideParams.from_interaction_phase(float(t))
                rows_s.append(float(u))
                rows_t.append(float(t))
                rows_v.append(averaged_schmidt_modes(pair, wg, prof, prof).s_n)
        return _Dataset(
            columns=[
                ("sigma_over_omega(dimensionless)", np.array(rows_s)),
                ("omega_tbs(dimensionless)", np.array(rows_t)),
                ("s_n(nats)", np.array(rows_v)),
            ],
            params={"s1": pair.s1, "s2": pair.s2},
            methods=["schmidt-average-spectral-quadrature"],
        )
    return build


def _fig_asymptote(pair_t, value: str):
    def build(params: dict) -> _Dataset:
        sigmas = _parse_grid(params.get("sigma_grid", "0.05:3:120"), "sigma")
        pair = FockPair(*pair_t)
        if value == "s_n" and pair_t == (1, 1):
            vals = np.array([entropy_asymptotic_11(float(u))[0] for u in sigmas])
            methods = ["long-time-closed-form"]
        else:
            vals = np.array([asymptotic_schmidt_modes(pair, float(u)).s_n for u in sigmas])
            methods = ["long-time-period-average"]
        return _Dataset(
            columns=[("sigma_over_omega(dimensionless)", sigmas), ("s_n(nats)", vals)],
            params={"s1": pair.s1, "s2": pair.s2, "limit": "omega_tbs->inf"},
            methods=methods,
        )
    return build


def _fig_distribution(pair_t, r_value: float, label: str):
    def build(params: dict) -> _Dataset:
        dist = output_distribution(FockPair(*pair_t), BsParams(r=r_value))
        ks = np.arange(len(dist.probs))
        return _Dataset(
            columns=[("k(photons_port1)", ks), ("prob(dimensionless)", dist.probs)],
            params={"s1": pair_t[0], "s2": pair_t[1], "r": r_value, "case": label},
            methods=["fock-amplitudes-jacobi-sum"],
        )
    return build


def _fig11_build(params: dict) -> _Dataset:
    pair = FockPair(1, 1)
    omega_t = 5 * math.pi / 2
    sig_list = (0.0, 0.3, 1.0, 3.0, 10.0)
    ks = np.arange(pair.total + 1)
    cols = [("k(photons_port1)", ks)]
    for u in sig_list:
        if u == 0.0:
            probs = output_distribution(pair, BsParams(r=math.sin(0.5 * omega_t) ** 2)).probs
        else:
            wg = WaveguideParams.from_interaction_phase(omega_t)
            prof = SpectralProfile(center=1e4, width=u)
            probs = averaged_schmidt_modes(pair, wg, prof, prof).lambdas
        cols.append((f"prob_sigma_{u:g}(dimensionless)", probs))
    return _Dataset(
        columns=cols,
        params={"s1": 1, "s2": 1, "omega_tbs": omega_t, "sigma_over_omega": list(sig_list)},
        methods=["schmidt-average-spectral-quadrature"],
    )


def _fig12_build(params: dict) -> _Dataset:
    sigmas = _parse_grid(params.get("sigma_grid", "0.05:3:241"), "sigma")
    p11 = np.empty(len(sigmas))
    p20 = np.empty(len(sigmas))
    for i, u in enumerate(sigmas):
        p11[i], p20[i] = coincidence_probs_asymptotic(float(u))
    return _Dataset(
        columns=[
            ("sigma_over_omega(dimensionless)", sigmas),
            ("p11(dimensionless)", p11),
            ("p20(dimensionless)", p20),
        ],
        params={"s1": 1, "s2": 1, "limit": "omega_tbs->inf"},
        methods=["long-time-closed-form"],
    )


_FIG13_G = (1.0, 0.5, 0.25, 0.0)


def _fig13_build(delta_ratio: float):
    def build(params: dict) -> _Dataset:
        delays = _parse_grid(params.get("delay_grid", "-5:5:161"), "delay")
        cols = [("delay(1/omega_g)", delays)]
        used_t = {}
        for g in _FIG13_G:
            if g == 0.0:
                omega_t = 5 * math.pi / 2
            else:
                roots = balanced_tbs(g, _BALANCED_SCAN_MAX)
                near = 5 * math.pi / 2
                omega_t = min(roots, key=lambda t: abs(t - near))
            used_t[f"{g:g}"] = omega_t
            vals = np.array(
                [p12_frequency_dependent(g, omega_t, 1.0, delta_ratio, float(dt)) for dt in delays]
            )
            cols.append((f"p12_g_{g:g}(dimensionless)", vals))
        return _Dataset(
            columns=cols,
            params={"delta_omega_ratio": delta_ratio, "balanced_omega_tbs": used_t},
            methods=["reduced-dip-integral", "detuned-reflectance"],
        )
    return build


def _fig14a_build(params: dict) -> _Dataset:
    gs = _parse_grid(params.get("g_grid", "0.05:3:121"), "g")
    # Long-time mean reflectance: sin^2 averages to 1/2 under the envelope.
    vals = np.array(
        [0.5 * math.sqrt(math.pi) * erfcx(1.0 / g) / g for g in gs]
    )
    return _Dataset(
        columns=[
            ("omega_g_over_omega(dimensionless)", gs),
            ("mean_reflectance(dimensionless)", vals),
        ],
        params={"limit": "omega_tbs->inf"},
        methods=["long-time-closed-form"],
    )


def _fig14a_inset_build(params: dict) -> _Dataset:
    ts = _parse_grid(params.get("omega_tbs_grid", "0.05:30:301"), "omega-tbs")
    cols = [("omega_tbs(dimensionless)", ts)]
    for g in (1.0, 2.0, 5.0, 10.0):
        vals = np.array([reflectance_moments(g, float(t))[0] for t in ts])
        cols.append((f"mean_reflectance_g_{g:g}(dimensionless)", vals))
    return _Dataset(
        columns=cols,
        params={"omega_g_over_omega": [1.0, 2.0, 5.0, 10.0]},
        methods=["detuned-reflectance"],
    )


def _fig14b_build(params: dict) -> _Dataset:
    gs = _parse_grid(params.get("g_grid", "0.05:1.8:36"), "g")
    targets = (2.0, 8.0, 14.0, 20.0, 30.0)
    cols = [("omega_g_over_omega(dimensionless)", gs)]
    for target in targets:
        vals = np.full(len(gs), np.nan)
        for i, g in enumerate(gs):
            roots = balanced_tbs(float(g), _BALANCED_SCAN_MAX)
            if not roots:
                continue
            omega_t = min(roots, key=lambda t: abs(t - target))
            p0 = p12_frequency_dependent(float(g), omega_t, 1.0, 0.0, 0.0)
            pinf = p12_frequency_dependent(float(g), omega_t, 1.0, 0.0, 50.0)
            vals[i] = (pinf - p0) / pinf
        cols.append((f"visibility_omega_tbs_{target:g}(dimensionless)", vals))
    return _Dataset(
        columns=cols,
        params={"balanced": True, "omega_tbs_targets": list(targets)},
        methods=["reduced-dip-integral", "dip-visibility"],
    )


_R_MAX_ENTANGLED = 0.5 * (1.0 + 1.0 / math.sqrt(3.0))


def _figure_registry() -> dict:
    reg: dict[str, dict] = {}

    def add(name, description, operation, build):
        reg[name] = {"description": description, "operation": operation, "build": build}

    pairs_a = [(1, 1), (2, 1), (2, 2), (3, 2)]
    pairs_b = [(1, 2), (1, 4), (1, 6), (0, 4)]
    add("fig5a", "entanglement entropy vs reflectance, mixed photon pairs",
        "schmidt_spectrum", _fig_entropy_vs_r(pairs_a, "vn"))
    add("fig5b", "entanglement entropy vs reflectance, single-heavy pairs",
        "schmidt_spectrum", _fig_entropy_vs_r(pairs_b, "vn"))
    add("fig5c", "Schmidt parameter vs reflectance, mixed photon pairs",
        "schmidt_spectrum", _fig_entropy_vs_r(pairs_a, "schmidt"))
    add("fig5d", "Schmidt parameter vs reflectance, single-heavy pairs",
        "schmidt_spectrum", _fig_entropy_vs_r(pairs_b, "schmidt"))
    twins = [(s, s) for s in range(1, 7)]
    add("fig6a", "entropy vs reflectance on [0, 1/2] for twin inputs |s,s>",
        "schmidt_spectrum", _fig_entropy_vs_r(twins, "vn", r_hi=0.5))
    add("fig6b", "Schmidt parameter vs reflectance on [0, 1/2] for twin inputs",
        "schmidt_spectrum", _fig_entropy_vs_r(twins, "schmidt", r_hi=0.5))
    add("fig7", "entropy vs interaction phase for several spectral widths and pairs",
        "averaged_schmidt_modes", _fig_waveguide_entropy([(1, 1), (2, 3), (4, 2), (3, 3)]))
    add("fig8a", "entropy contour over (sigma/Omega, Omega t_bs) for |1,1>",
        "averaged_schmidt_modes", _fig_contour((1, 1)))
    add("fig8b", "long-time entropy vs sigma/Omega for |1,1>",
        "entropy_asymptotic_11", _fig_asymptote((1, 1), "s_n"))
    add("fig9a", "entropy vs interaction phase for |0,2>",
        "averaged_schmidt_modes", _fig_waveguide_entropy([(0, 2)]))
    add("fig9b", "long-time entropy vs sigma/Omega for |0,2>",
        "asymptotic_schmidt_modes", _fig_asymptote((0, 2), "s_n"))
    add("fig10a", "output statistics for |1,1> on a balanced splitter",
        "output_distribution", _fig_distribution((1, 1), 0.5, "balanced"))
    add("fig10b", "output statistics for |1,1> at maximum entanglement",
        "output_distribution", _fig_distribution((1, 1), _R_MAX_ENTANGLED, "max-entanglement"))
    add("fig10c", "output statistics for |0,2> on a balanced splitter",
        "output_distribution", _fig_distribution((0, 2), 0.5, "balanced"))
    add("fig10d", "output statistics for |0,2> at the |1,1> max-entanglement point",
        "output_distribution", _fig_distribution((0, 2), _R_MAX_ENTANGLED, "max-entanglement"))
    add("fig11", "output statistics of |1,1> vs spectral width at fixed interaction",
        "averaged_schmidt_modes", _fig11_build)
    add("fig12", "long-time coincidence and pair probabilities vs sigma/Omega",
        "coincidence_probs_asymptotic", _fig12_build)
    add("fig13a", "coincidence dip, identical photons, several omega_g/Omega",
        "p12_frequency_dependent", _fig13_build(0.0))
    add("fig13b", "coincidence dip, slightly detuned photons",
        "p12_frequency_dependent", _fig13_build(0.5))
    add("fig13c", "coincidence dip, detuned photons",
        "p12_frequency_dependent", _fig13_build(1.0))
    add("fig13d", "coincidence dip, strongly detuned photons",
        "p12_frequency_dependent", _fig13_build(2.0))
    add("fig14a", "long-time mean reflectance vs omega_g/Omega",
        "mean_reflectance", _fig14a_build)
    add("fig14a-inset", "mean reflectance vs interaction phase for several widths",
        "mean_reflectance", _fig14a_inset_build)
    add("fig14b", "dip visibility vs omega_g/Omega at several balanced lengths",
        "balanced_tbs + p12_frequency_dependent", _fig14b_build)
    return reg


def figure_recipes() -> dict[str, dict]:
    """Listing of the named reproducible datasets.

    Maps each dataset name to its description and the library operation it
    exercises; the ``figure`` command builds any of them.
    """
    return {
        name: {"description": entry["description"], "operation": entry["operation"]}
        for name, entry in _figure_registry().items()
    }


# ---------------------------------------------------------------------------
# Argument parsing.
# ---------------------------------------------------------------------------

def _load_config_file(path: str) -> dict:
    values: dict = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line is not key=value: {line!r}")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        val = val.strip()
        for cast in (int, float):
            try:
                values[key] = cast(val)
                break
            except ValueError:
                continue
        else:
            if val.lower() in ("true", "false"):
                values[key] = val.lower() == "true"
            else:
                values[key] = val
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbs",
        description="Two-mode beam splitter sweeps: quantum statistics, "
        "entanglement and interference dips.",
    )
    parser.add_argument("--version", action="version", version=f"qbs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key=value file providing flag defaults")
        p.add_argument("-o", "--output", default="-", help="output path ('-' = stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    def pair_args(p):
        p.add_argument("--s1", type=int, help="photons on input port 1")
        p.add_argument("--s2", type=int, help="photons on input port 2")

    def absolute_args(p):
        p.add_argument("--omega-coupling", type=float, help="coupling frequency (rad/s)")
        p.add_argument("--t-bs", type=float, help="interaction time (s)")
        p.add_argument("--electron-count", type=float)
        p.add_argument("--modal-volume", type=float)
        p.add_argument("--polarization-overlap", type=float)
        p.add_argument("--center-frequency", type=float)

    p = sub.add_parser("evolve", help="output distribution of one Fock pair")
    common(p); pair_args(p)
    p.add_argument("--r", type=float)
    p.add_argument("--phi", type=float, default=math.pi / 2)

    p = sub.add_parser("entropy-sweep", help="entanglement measure over a reflectance grid")
    common(p); pair_args(p)
    p.add_argument("--r-grid", default="0:1:201", help="start:stop:count")
    p.add_argument("--measure", choices=("vn", "schmidt"), default="vn")

    p = sub.add_parser("stats", help="photon statistics, constant or averaged splitter")
    common(p); pair_args(p); absolute_args(p)
    p.add_argument("--r", type=float)
    p.add_argument("--phi", type=float, default=math.pi / 2)
    p.add_argument("--sigma-over-omega", type=float)
    p.add_argument("--omega-tbs", type=float)

    p = sub.add_parser("waveguide-entropy", help="entropy sweeps of the waveguide splitter")
    common(p); pair_args(p); absolute_args(p)
    p.add_argument("--sigma-over-omega", type=float)
    p.add_argument("--omega-tbs-grid", default="0:10:151")
    p.add_argument("--asymptotic", action="store_true", help="long-interaction limit")
    p.add_argument("--sigma-grid", default="0.05:3:120")

    for name, help_text in (
        ("hom-dip", "coincidence dip over a delay grid"),
        ("visibility", "dip plus its visibility"),
    ):
        p = sub.add_parser(name, help=help_text)
        common(p); absolute_args(p)
        p.add_argument("--conventional", action="store_true",
                       help="constant-coefficient balanced splitter")
        p.add_argument("--omega-g-over-omega", type=float)
        p.add_argument("--omega-tbs", type=float)
        p.add_argument("--balanced", action="store_true",
                       help="pick omega_tbs with mean reflectance 1/2")
        p.add_argument("--balanced-near", type=float, default=5 * math.pi / 2)
        p.add_argument("--b-param", type=float, default=1.0)
        p.add_argument("--delta-omega-ratio", type=float, default=0.0)
        p.add_argument("--delay-grid", default="-4:4:161")
        p.add_argument("--pump-center", type=float)
        p.add_argument("--pump-width", help="rad/s, or 'inf' for Fock packets")
        p.add_argument("--center1", type=float)
        p.add_argument("--center2", type=float)
        p.add_argument("--width1", type=float)
        p.add_argument("--width2", type=float)

    p = sub.add_parser("figure", help="build a named reproducible dataset")
    common(p)
    p.add_argument("--name", help="dataset name (see --list)")
    p.add_argument("--list", action="store_true", help="list available datasets")
    p.add_argument("--r-grid")
    p.add_argument("--sigma-grid")
    p.add_argument("--omega-tbs-grid")
    p.add_argument("--g-grid")
    p.add_argument("--delay-grid")
    return parser


def _namespace_to_config(args: argparse.Namespace) -> RunConfig:
    skip = {"command", "output", "format", "config"}
    params = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    return RunConfig(
        command=args.command,
        params=params,
        output_path=args.output,
        format=args.format,
    )


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)

    # A config file supplies values for every flag not given explicitly.
    if getattr(args, "config", None):
        explicit = {
            tok[2:].partition("=")[0].replace("-", "_")
            for tok in argv if tok.startswith("--")
        }
        try:
            for key, value in _load_config_file(args.config).items():
                if key not in explicit:
                    setattr(args, key, value)
        except OSError as exc:
            print(f"error: cannot read config file: {exc}", file=sys.stderr)
            return 2
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2

    if args.command == "figure" and getattr(args, "list", False):
        for name, entry in sorted(figure_recipes().items()):
            print(f"{name}: {entry['description']} [{entry['operation']}]")
        return 0
    if args.command == "figure" and not getattr(args, "name", None):
        print("error: figure needs --name or --list", file=sys.stderr)
        return 2

    try:
        config = _namespace_to_config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
