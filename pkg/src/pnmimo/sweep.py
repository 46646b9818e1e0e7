"""Parameter-sweep execution, scenario presets, and stable result emission.

A sweep evaluates one scenario along a single axis (snr, m_osc, beta,
sigma_phi, or alpha) for a set of precoders, producing one result row per
(sweep point, precoder).  Rows carry both the closed-form SINR prediction
and, when requested, the Monte-Carlo estimate, plus every rate figure.

Serialization is byte-stable: floats are written as their shortest
round-trip decimal and wall-clock timing never enters the table, so a rerun
with the same master seed reproduces the file exactly at any parallelism.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import analytics, rates
from .config import SWEEP_AXES, ConfigError, SystemConfig
from .linksim import empirical_powers
from .phase_noise import deg_to_var

__all__ = ["COLUMNS", "SCHEMA_VERSION", "run_sweep", "run_preset",
           "emit_results", "list_presets", "PRESETS", "Preset"]

SCHEMA_VERSION = 1

COLUMNS = [
    "schema_version", "preset", "sweep_axis", "sweep_value", "precoder",
    "M", "K", "M_osc", "q0", "sigma_deg_bs", "sigma_deg_ue", "tau", "T_c",
    "snr_db", "sigma_w2", "alpha", "analytical_sinr", "empirical_sinr",
    "std_error", "n_realizations", "n_rejected", "rate_awgn", "rate_lapidoth",
    "rate_min", "rate_ergodic", "master_seed",
]

PRECODERS = ("rzf", "zf", "mf")


def _apply_axis(config: SystemConfig, axis: str, value: float) -> SystemConfig:
    if axis == "snr":
        return config.with_(snr_db=float(value), sigma_w2_value=None)
    if axis == "m_osc":
        return config.with_(M_osc=int(value))
    if axis == "beta":
        M = int(round(value * config.K))
        if config.M_osc == config.M:  # fully distributed stays fully distributed
            m_osc = M
        elif M % config.M_osc == 0:
            m_osc = config.M_osc
        else:
            m_osc = M
        return config.with_(M=M, M_osc=m_osc)
    if axis == "sigma_phi":
        # value is an increment variance in rad^2, applied at both ends
        deg = float(np.rad2deg(np.sqrt(value)))
        return config.with_(sigma_deg_bs=deg, sigma_deg_ue=deg)
    if axis == "alpha":
        return config.with_(alpha_mode="fixed", alpha=float(value))
    raise ConfigError(f"sweep_axis: must be one of {SWEEP_AXES}, got {axis!r}")


def _analytic(config: SystemConfig, kind: str):
    if kind == "rzf":
        alpha = analytics.resolve_alpha(config)
        return analytics.sinr_rzf(config, alpha).sinr, alpha
    if kind == "zf":
        return analytics.sinr_zf(config).sinr, None
    if kind == "mf":
        return analytics.sinr_mf(config).sinr, None
    raise ConfigError(f"precoder: unknown kind {kind!r}")


def _empirical_key(config: SystemConfig, kind: str, alpha):
    return (kind, alpha, config.M, config.K, config.M_osc, config.q0,
            config.sigma_deg_bs, config.sigma_deg_ue, config.tau,
            config.master_seed, config.n_realizations)


def run_sweep(config: SystemConfig, sweep_axis: str, values,
              precoders=PRECODERS, with_empirical: bool = True,
              preset: str = "") -> list[dict]:
    """One row per (sweep point, precoder), deterministic given the seed.

    Monte-Carlo power averages are noise-independent, so they are cached and
    shared across SNR points with identical channel/phase settings.
    """
    if len(values) == 0:
        raise ConfigError("sweep: values must be nonempty")
    rows = []
    cache: dict = {}
    for value in values:
        point = _apply_axis(config, sweep_axis, value)
        for kind in precoders:
            sinr_a, alpha = _analytic(point, kind)
            row = {
                "schema_version": SCHEMA_VERSION,
                "preset": preset,
                "sweep_axis": sweep_axis,
                "sweep_value": float(value),
                "precoder": kind,
                "M": point.M, "K": point.K, "M_osc": point.M_osc,
                "q0": point.q0,
                "sigma_deg_bs": point.sigma_deg_bs,
                "sigma_deg_ue": point.sigma_deg_ue,
                "tau": point.tau, "T_c": point.T_c,
                "snr_db": point.snr_db, "sigma_w2": point.sigma_w2,
                "alpha": None if alpha is None else float(alpha),
                "analytical_sinr": float(sinr_a),
                "empirical_sinr": None, "std_error": None,
                "n_realizations": None, "n_rejected": None,
                "master_seed": point.master_seed,
            }
            if with_empirical:
                key = _empirical_key(point, kind, alpha)
                if key not in cache:
                    cache[key] = empirical_powers(point, kind, alpha)
                est = cache[key]
                row.update(empirical_sinr=est.sinr_at(point.sigma_w2),
                           std_error=est.std_error_at(point.sigma_w2),
                           n_realizations=est.n_realizations,
                           n_rejected=est.n_rejected)
            pp = point.phase_params
            rep = rates.rate_report(sinr_a, point.tau, pp.sigma2_ue, pp.sigma2_bs,
                                    point.M_osc)
            row.update(rate_awgn=rep.rate_awgn_bound,
                       rate_lapidoth=rep.rate_lapidoth,
                       rate_min=rep.rate_min,
                       rate_ergodic=rep.rate_ergodic)
            rows.append(row)
    return rows


@dataclass(frozen=True)
class Preset:
    """A named, self-contained sweep scenario.

    rate_kind records which rate figure the scenario is meant to be read
    with: "ergodic" (log2(1+S_eff)) or "min" (minimum of the AWGN and
    phase-entropy bounds).
    """

    name: str
    note: str
    rate_kind: str
    config: dict
    axis: str
    values: tuple
    precoders: tuple = PRECODERS
    with_empirical: bool = True
    variants: tuple = field(default=())  # extra config overrides, one sweep each

    def run(self, **config_overrides) -> list[dict]:
        base = {**self.config, **config_overrides}
        variants = self.variants or ({},)
        rows = []
        for extra in variants:
            cfg = SystemConfig(**{**base, **extra})
            rows += run_sweep(cfg, self.axis, self.values, self.precoders,
                              self.with_empirical, preset=self.name)
        return rows


_VERIFY = dict(M=50, K=10, q0=0.9, sigma_deg_bs=6.0, sigma_deg_ue=6.0,
               tau=10, T_c=100)
_SNRS = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
_MOSC_VARIANTS = tuple({"M_osc": m} for m in (1, 2, 5, 50))
_CODO = dict(K=25, q0=0.9, sigma_deg_bs=6.0, sigma_deg_ue=6.0, tau=25, T_c=100)
_BETAS = tuple(float(b) for b in range(1, 11))

PRESETS: dict[str, Preset] = {p.name: p for p in [
    Preset("fig2", "optimized RZF, SNR sweep per oscillator count; "
           "analytic vs Monte-Carlo agreement", "ergodic",
           _VERIFY, "snr", _SNRS, ("rzf",), True, _MOSC_VARIANTS),
    Preset("fig3", "ZF, SNR sweep per oscillator count", "ergodic",
           _VERIFY, "snr", _SNRS, ("zf",), True, _MOSC_VARIANTS),
    Preset("fig4", "MF, SNR sweep per oscillator count", "ergodic",
           _VERIFY, "snr", _SNRS, ("mf",), True, _MOSC_VARIANTS),
    Preset("fig5", "SINR-maximizing regularization vs SNR, common and "
           "per-antenna oscillators", "ergodic",
           {**_VERIFY, "M": 200, "K": 40}, "snr", _SNRS, ("rzf",), False,
           ({"M_osc": 1}, {"M_osc": 200})),
    Preset("fig6a", "precoder comparison vs phase variance: SNR 0 dB, beta 2",
           "ergodic", {**_VERIFY, "M": 50, "K": 25, "M_osc": 5, "snr_db": 0.0},
           "sigma_phi", tuple(np.geomspace(0.1, 1.0, 13)), PRECODERS, False),
    Preset("fig6b", "precoder comparison vs phase variance: SNR 20 dB, beta 2",
           "ergodic", {**_VERIFY, "M": 50, "K": 25, "M_osc": 5, "snr_db": 20.0},
           "sigma_phi", tuple(np.geomspace(0.005, 1.0, 13)), PRECODERS, False),
    Preset("fig6c", "precoder comparison vs phase variance: SNR 0 dB, beta 5",
           "ergodic", {**_VERIFY, "M": 50, "M_osc": 5, "snr_db": 0.0},
           "sigma_phi", tuple(np.geomspace(0.005, 1.0, 13)), PRECODERS, False),
    Preset("fig6d", "precoder comparison vs phase variance: SNR 20 dB, beta 5",
           "ergodic", {**_VERIFY, "M": 50, "M_osc": 5, "snr_db": 20.0},
           "sigma_phi", tuple(np.geomspace(0.005, 1.0, 13)), PRECODERS, False),
    Preset("fig7", "common vs per-antenna oscillators across load ratio, "
           "optimized RZF, min-bound rate", "min",
           {**_CODO, "M": 25}, "beta", _BETAS, ("rzf",), False,
           ({"M_osc": 1, "snr_db": 0.0}, {"M_osc": 25, "snr_db": 0.0},
            {"M_osc": 1, "snr_db": 40.0}, {"M_osc": 25, "snr_db": 40.0})),
    Preset("fig8", "common vs per-antenna oscillators across load ratio, MF, "
           "min-bound rate", "min",
           {**_CODO, "M": 25}, "beta", _BETAS, ("mf",), False,
           ({"M_osc": 1, "snr_db": 0.0}, {"M_osc": 25, "snr_db": 0.0},
            {"M_osc": 1, "snr_db": 40.0}, {"M_osc": 25, "snr_db": 40.0})),
    Preset("lte", "high-quality oscillators, training-to-data lag of a full "
           "coherence window", "ergodic",
           dict(M=50, K=25, q0=0.9, sigma_deg_bs=0.06, sigma_deg_ue=0.06,
                tau=10_000, T_c=10_000), "m_osc", (1, 2, 5, 10, 25, 50),
           PRECODERS, False, ({"snr_db": 0.0}, {"snr_db": 20.0})),
]}


def list_presets() -> list[tuple[str, str]]:
    """(name, note) pairs of the preset registry, in registry order."""
    return [(p.name, f"{p.note} [rate: {p.rate_kind}]") for p in PRESETS.values()]


def run_preset(name: str, **config_overrides) -> list[dict]:
    if name not in PRESETS:
        raise ConfigError(f"preset: unknown name {name!r}; have {sorted(PRESETS)}")
    return PRESETS[name].run(**config_overrides)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        return repr(value)
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        raise ValueError("emit: result table is empty")
    out = io.StringIO()
    out.write(",".join(COLUMNS) + "\n")
    for row in rows:
        out.write(",".join(_cell(row.get(c)) for c in COLUMNS) + "\n")
    return out.getvalue()


def _py(value):
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def rows_to_jsonl(rows: list[dict]) -> str:
    if not rows:
        raise ValueError("emit: result table is empty")
    return "".join(json.dumps({c: _py(row.get(c)) for c in COLUMNS}, allow_nan=True)
                   + "\n" for row in rows)


def emit_results(rows: list[dict], fmt: str, path: str) -> None:
    """Write the result table; floats as shortest round-trip decimals."""
    if fmt == "csv":
        text = rows_to_csv(rows)
    elif fmt == "json-lines":
        text = rows_to_jsonl(rows)
    else:
        raise ValueError(f"format: must be csv or json-lines, got {fmt!r}")
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
