"""Downlink received-signal synthesis and Monte-Carlo effective-SINR estimation.

One realization draws a channel, a joint phase trajectory, and an estimate,
builds the requested precoder from the estimate, and reads off the scalar
coefficients that the observed UE sees on its own symbol and on every
interferer's symbol at data time.  Averaging |zeta_sig|^2 and ||zeta_int||^2
over realizations yields the empirical effective SINR.

Realization `i` always uses the RNG stream seeded by (master_seed, i), and
results are assembled by index, so output is bit-identical for any
parallelism degree or execution order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import EstimateQuality, draw_channel, synthesize_estimate
from .config import SystemConfig
from .phase_noise import PhaseTrace, simulate_wiener, theta_vector
from .precoding import (PrecoderMatrix, SingularChannelError, build_mf,
                        build_rzf, build_zf)

__all__ = ["SignalDecomposition", "SinrEstimate", "PowerEstimate", "decompose",
           "transmit_symbols", "empirical_powers", "empirical_sinr",
           "RejectionRateError", "MAX_REJECTION_RATE"]

# A ZF run aborts if more than this fraction of draws fails the condition cap.
MAX_REJECTION_RATE = 1e-3


class RejectionRateError(RuntimeError):
    """Too many degenerate channel draws were rejected for a trustworthy result."""


@dataclass
class SignalDecomposition:
    """Scalar coefficients of the observed UE's received symbol equation."""

    zeta_sig: complex
    zeta_int: np.ndarray
    noise_var: float

    @property
    def sinr(self) -> float:
        return abs(self.zeta_sig) ** 2 / (
            float(np.sum(np.abs(self.zeta_int) ** 2)) + self.noise_var)


@dataclass
class PowerEstimate:
    """Noise-independent Monte-Carlo averages of signal and interference power."""

    mean_sig_power: float
    mean_int_power: float
    n_realizations: int
    n_rejected: int
    sig_powers: np.ndarray
    int_powers: np.ndarray

    def sinr_at(self, sigma_w2: float) -> float:
        return self.mean_sig_power / (self.mean_int_power + sigma_w2)

    def std_error_at(self, sigma_w2: float) -> float:
        """Delta-method standard error of the SINR ratio estimator."""
        n = self.n_realizations
        if n < 2:
            return float("inf")
        s, q = self.sig_powers, self.int_powers
        den = self.mean_int_power + sigma_w2
        cov = np.cov(s, q)
        grad = np.array([1.0 / den, -self.mean_sig_power / den ** 2])
        var = float(grad @ cov @ grad) / n
        return float(np.sqrt(max(var, 0.0)))


@dataclass
class SinrEstimate:
    mean_sig_power: float
    mean_int_power: float
    sinr: float
    n_realizations: int
    std_error: float
    n_rejected: int = 0


def _effective_row(H: np.ndarray, trace: PhaseTrace, ue: int, tau: int, topology):
    """The observed UE's channel row rotated by its data-time phase matrix."""
    return H[ue] * theta_vector(trace, ue, tau, tau, topology)


def decompose(H: np.ndarray, precoder: PrecoderMatrix, trace: PhaseTrace,
              ue: int, tau: int, topology, sigma_w2: float) -> SignalDecomposition:
    """Split the UE's effective scalar channel into desired and interference parts."""
    z = _effective_row(H, trace, ue, tau, topology) @ precoder.G
    return SignalDecomposition(zeta_sig=complex(z[ue]),
                               zeta_int=np.delete(z, ue),
                               noise_var=sigma_w2)


def transmit_symbols(precoder: PrecoderMatrix, symbols: np.ndarray, H: np.ndarray,
                     trace: PhaseTrace, noise: np.ndarray, tau: int,
                     topology) -> np.ndarray:
    """Received samples of every UE for one vector of unit-power data symbols."""
    K = H.shape[0]
    y = np.empty(K, dtype=complex)
    for k in range(K):
        y[k] = _effective_row(H, trace, k, tau, topology) @ precoder.G @ symbols + noise[k]
    return y


def _build(kind: str, H_hat: np.ndarray, alpha: float | None,
           powers: np.ndarray) -> PrecoderMatrix:
    if kind == "rzf":
        return build_rzf(H_hat, alpha, powers)
    if kind == "zf":
        return build_zf(H_hat, powers)
    if kind == "mf":
        return build_mf(H_hat, powers)
    raise ValueError(f"unknown precoder kind {kind!r}")


def _simulate_block(config: SystemConfig, kind: str, alpha: float | None,
                    start: int, stop: int):
    """Per-realization powers for indices [start, stop); NaN marks rejection."""
    topology = config.topology
    params = config.phase_params
    quality = EstimateQuality(config.q0)
    k = config.ue_index
    sig = np.empty(stop - start)
    intf = np.empty(stop - start)
    for i in range(start, stop):
        rng = np.random.default_rng((config.master_seed, i))
        H = draw_channel(config.M, config.K, rng)
        trace = simulate_wiener(topology, config.K, params, rng)
        pair = synthesize_estimate(H, trace, quality, topology, config.tau, rng)
        try:
            precoder = _build(kind, pair.H_hat, alpha, config.powers)
        except SingularChannelError:
            sig[i - start] = intf[i - start] = np.nan
            continue
        z = _effective_row(H, trace, k, config.tau, topology) @ precoder.G
        p = np.abs(z) ** 2
        sig[i - start] = p[k]
        intf[i - start] = p.sum() - p[k]
    return sig, intf


def empirical_powers(config: SystemConfig, kind: str, alpha: float | None = None,
                     n_realizations: int | None = None,
                     parallelism: int | None = None) -> PowerEstimate:
    """Monte-Carlo averages of desired and interference power for one scenario.

    These averages do not depend on the receiver noise level, so one call
    serves every SNR point that shares the channel/phase configuration.
    """
    n = config.n_realizations if n_realizations is None else n_realizations
    workers = config.parallelism if parallelism is None else parallelism
    if n < 1:
        raise ValueError(f"n_realizations must be >= 1, got {n}")
    sig = np.empty(n)
    intf = np.empty(n)
    if workers <= 1 or n < 4 * workers:
        sig, intf = _simulate_block(config, kind, alpha, 0, n)
    else:
        bounds = np.linspace(0, n, workers + 1, dtype=int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_simulate_block, config, kind, alpha, int(a), int(b))
                       for a, b in zip(bounds[:-1], bounds[1:])]
            pieces = [f.result() for f in futures]
        sig = np.concatenate([p[0] for p in pieces])
        intf = np.concatenate([p[1] for p in pieces])
    rejected = int(np.isnan(sig).sum())
    if rejected > MAX_REJECTION_RATE * n:
        raise RejectionRateError(
            f"{rejected}/{n} realizations rejected (cap {MAX_REJECTION_RATE:.1%})")
    keep = ~np.isnan(sig)
    sig, intf = sig[keep], intf[keep]
    return PowerEstimate(mean_sig_power=float(sig.mean()),
                         mean_int_power=float(intf.mean()),
                         n_realizations=int(sig.size),
                         n_rejected=rejected,
                         sig_powers=sig, int_powers=intf)


def empirical_sinr(config: SystemConfig, kind: str, alpha: float | None = None,
                   n_realizations: int | None = None,
                   parallelism: int | None = None) -> SinrEstimate:
    """Empirical effective SINR of the observed UE under one precoder."""
    est = empirical_powers(config, kind, alpha, n_realizations, parallelism)
    s = config.sigma_w2
    return SinrEstimate(mean_sig_power=est.mean_sig_power,
                        mean_int_power=est.mean_int_power,
                        sinr=est.sinr_at(s),
                        n_realizations=est.n_realizations,
                        std_error=est.std_error_at(s),
                        n_rejected=est.n_rejected)
