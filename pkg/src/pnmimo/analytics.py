"""Closed-form effective SINR of the RZF, ZF, and MF precoders.

All three predictions are deterministic functions of the scenario record:
they combine the Marchenko-Pastur quantities from :mod:`pnmimo.rmt` with the
phase-drift second moment from :mod:`pnmimo.phase_noise`.  The headline
intermediate is the effective CSI quality q_eff = q0 * E|T_PN|^2: phase
drift at the BS acts exactly like a loss of channel-estimate quality.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import rmt
from .config import SystemConfig
from .phase_noise import t_pn_second_moment
from .rmt import AsymptoticParams, DeterministicEquivalents

__all__ = ["SinrPrediction", "effective_quality", "equivalents", "resolve_alpha",
           "sinr_rzf", "sinr_zf", "sinr_mf"]


@dataclass(frozen=True)
class SinrPrediction:
    sinr: float
    precoder_kind: str
    equivalents: DeterministicEquivalents


def effective_quality(config: SystemConfig) -> float:
    """q_eff = q0 * E|T_PN|^2, the phase-drift-degraded CSI quality."""
    return config.q0 * t_pn_second_moment(config.M_osc, config.tau,
                                          config.phase_params.sigma2_bs)


def resolve_alpha(config: SystemConfig) -> float:
    """Regularization used for the RZF precoder under the configured mode."""
    if config.alpha_mode == "fixed":
        return config.alpha
    e = t_pn_second_moment(config.M_osc, config.tau, config.phase_params.sigma2_bs)
    return rmt.optimal_alpha(config.q0, e, config.sigma_w2, config.beta)


def equivalents(config: SystemConfig, alpha: float) -> DeterministicEquivalents:
    """All deterministic quantities entering one RZF SINR evaluation."""
    params = AsymptoticParams(alpha, config.beta, config.M, config.powers)
    m = rmt.stieltjes_mp(alpha, config.beta)
    mp = rmt.stieltjes_mp_derivative(alpha, config.beta)
    return DeterministicEquivalents(
        m=m,
        m_prime=mp,
        t=rmt.hardening_t(m),
        t2=rmt.interference_t2(params, config.ue_index),
        xi=rmt.normalization_xi(params),
        e_tpn2=t_pn_second_moment(config.M_osc, config.tau,
                                  config.phase_params.sigma2_bs),
    )


def sinr_rzf(config: SystemConfig, alpha: float | None = None) -> SinrPrediction:
    """Large-system effective SINR of the RZF precoder for the observed UE.

    numerator    p_k * t^2 * q_eff
    denominator  (t2/M)(1 - t*q_eff - t*q_eff/(1+m)) + sigma_w^2/xi^2
    """
    if alpha is None:
        alpha = resolve_alpha(config)
    eq = equivalents(config, alpha)
    q = config.q0 * eq.e_tpn2
    p_k = float(config.powers[config.ue_index])
    num = p_k * eq.t ** 2 * q
    den = (eq.t2 / config.M) * (1.0 - eq.t * q - eq.t * q / (1.0 + eq.m)) \
        + config.sigma_w2 / eq.xi ** 2
    return SinrPrediction(num / den, f"RZF(alpha={alpha:g})", eq)


def sinr_zf(config: SystemConfig) -> SinrPrediction:
    """ZF limit of the RZF SINR; requires beta strictly above 1."""
    if config.beta <= 1:
        raise ValueError(f"ZF analysis requires beta > 1, got {config.beta}")
    e = t_pn_second_moment(config.M_osc, config.tau, config.phase_params.sigma2_bs)
    q = config.q0 * e
    p_k = float(config.powers[config.ue_index])
    t2 = rmt.zf_limit_t2(config.beta, config.powers, config.ue_index, config.M)
    xi2 = rmt.zf_limit_xi2(config.M, config.beta, config.powers)
    den = (t2 / config.M) * (1.0 - q) + config.sigma_w2 / xi2
    m = rmt.stieltjes_mp(rmt._ZF_LIMIT_ALPHA, config.beta)
    eq = DeterministicEquivalents(m=m, m_prime=float("nan"), t=rmt.hardening_t(m),
                                  t2=t2, xi=xi2 ** 0.5, e_tpn2=e)
    return SinrPrediction(p_k * q / den, "ZF", eq)


def sinr_mf(config: SystemConfig, finite_k: bool = False) -> SinrPrediction:
    """MF (conjugate beamforming) effective SINR.

    The default is the large-system limit M*q0*p_k*E / ((sigma_w^2+1)*sum p).
    With finite_k=True the interference sum excludes the observed UE's own
    power, which removes an O(1/K) bias at small K:
    M*q0*p_k*E / (sum_{k1 != k} p_k1 + sigma_w^2 * sum p).
    """
    e = t_pn_second_moment(config.M_osc, config.tau, config.phase_params.sigma2_bs)
    p = config.powers
    p_k = float(p[config.ue_index])
    psum = float(p.sum())
    num = config.M * config.q0 * p_k * e
    if finite_k:
        den = (psum - p_k) + config.sigma_w2 * psum
    else:
        den = (config.sigma_w2 + 1.0) * psum
    eq = DeterministicEquivalents(m=float("nan"), m_prime=float("nan"),
                                  t=float("nan"), t2=psum - p_k, xi=float("nan"),
                                  e_tpn2=e)
    return SinrPrediction(num / den, "MF", eq)
