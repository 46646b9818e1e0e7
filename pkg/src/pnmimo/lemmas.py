"""Numerical verification oracles for the random-matrix identities the SINR
analysis rests on.

Two kinds of checks live here: exact algebraic identities (matrix inversion,
resolvent) that must hold to solver precision on every draw, and asymptotic
concentration results (trace lemma, rank-1 perturbation, trace
factorization, phase-rotated quadratic forms) whose empirical error must
decay with matrix size at the predicted log-log slope.

"Freely independent" pairs are realized concretely as (Wishart-derived
matrix, independent block-constant diagonal phase matrix) — the only pairing
the SINR derivation needs — rather than via general free-probability
machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ConvergenceRecord", "check_matrix_inversion_identity",
           "check_resolvent_identity", "check_trace_lemma",
           "check_rank1_perturbation", "check_free_probability_traces",
           "check_quadratic_form_identities", "block_phase_diag",
           "convergence_to_csv"]


@dataclass
class ConvergenceRecord:
    """Median absolute deviations of one identity across matrix sizes."""

    name: str
    M_values: list[int]
    errors: list[float]
    slope: float

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.M_values, self.M_values[1:])):
            raise ValueError("M_values must be strictly increasing")
        if any(e <= 0 for e in self.errors):
            raise ValueError("errors must be positive")


def _fit_slope(M_values, errors) -> float:
    return float(np.polyfit(np.log(M_values), np.log(errors), 1)[0])


def _record(name, M_values, per_size_errors) -> ConvergenceRecord:
    med = [float(np.median(e)) for e in per_size_errors]
    return ConvergenceRecord(name, list(M_values), med, _fit_slope(M_values, med))


def _gaussian_vec(M, rng, scale):
    return np.sqrt(scale / 2.0) * (rng.standard_normal(M) + 1j * rng.standard_normal(M))


def _random_spd(M, rng):
    B = _gaussian_vec(M * M, rng, 1.0).reshape(M, M)
    return B @ B.conj().T / M + np.eye(M)


def block_phase_diag(M: int, M_osc: int, rng: np.random.Generator) -> np.ndarray:
    """Diagonal of a unitary block-constant phase matrix (M_osc blocks)."""
    phases = rng.uniform(0.0, 2.0 * np.pi, size=M_osc)
    return np.exp(1j * np.repeat(phases, M // M_osc))


def check_matrix_inversion_identity(M: int, rng: np.random.Generator,
                                    n_trials: int = 20) -> float:
    """h^H (U + q h h^H)^{-1} = h^H U^{-1} / (1 + q h^H U^{-1} h), exactly.

    Draws with a near-singular update (denominator below 1e-6) are resampled.
    Returns the maximum absolute deviation over all trials.
    """
    worst = 0.0
    for _ in range(n_trials):
        while True:
            U = _random_spd(M, rng)
            h = _gaussian_vec(M, rng, 1.0)
            q = float(rng.normal())
            denom = 1.0 + q * np.real(h.conj() @ np.linalg.solve(U, h))
            if abs(denom) > 1e-6:
                break
        lhs = h.conj() @ np.linalg.inv(U + q * np.outer(h, h.conj()))
        rhs = (h.conj() @ np.linalg.inv(U)) / denom
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def check_resolvent_identity(M: int, rng: np.random.Generator,
                             n_trials: int = 20) -> float:
    """U^{-1} - V^{-1} = -U^{-1}(U - V)V^{-1} for invertible pairs."""
    worst = 0.0
    for _ in range(n_trials):
        U = _random_spd(M, rng)
        V = _random_spd(M, rng)
        Ui, Vi = np.linalg.inv(U), np.linalg.inv(V)
        worst = max(worst, float(np.max(np.abs((Ui - Vi) + Ui @ (U - V) @ Vi))))
    return worst


def check_trace_lemma(M_values, rng: np.random.Generator,
                      n_trials: int = 200) -> ConvergenceRecord:
    """|x^H A x - tr(A)/M| and |x^H A w| vanish at the 1/sqrt(M) rate."""
    per_size = []
    for M in M_values:
        A = _random_spd(M, rng)
        tr = np.trace(A).real / M
        errs = np.empty(n_trials)
        for t in range(n_trials):
            x = _gaussian_vec(M, rng, 1.0 / M)
            w = _gaussian_vec(M, rng, 1.0 / M)
            e1 = abs(np.real(x.conj() @ A @ x) - tr)
            e2 = abs(x.conj() @ A @ w)
            errs[t] = max(e1, e2)
        per_size.append(errs)
    return _record("trace_lemma", M_values, per_size)


def check_rank1_perturbation(M_values, rng: np.random.Generator,
                             n_trials: int = 100, zeta: float = 1.0,
                             enforce_bound: bool = True) -> ConvergenceRecord:
    """Normalized trace gap from a rank-1 update of a regularized matrix.

    The gap (1/M)|tr A[(U + zeta I + q h h^H)^{-1} - (U + zeta I)^{-1}]| is
    bounded by ||A||/(zeta M) on every draw and decays like 1/M.
    """
    per_size = []
    for M in M_values:
        errs = np.empty(n_trials)
        for t in range(n_trials):
            U = _random_spd(M, rng) - np.eye(M)  # nonnegative Hermitian
            A = _random_spd(M, rng)
            h = _gaussian_vec(M, rng, 1.0)
            q = abs(float(rng.normal())) + 0.1
            base = U + zeta * np.eye(M)
            gap = abs(np.trace(A @ (np.linalg.inv(base + q * np.outer(h, h.conj()))
                                    - np.linalg.inv(base)))) / M
            if enforce_bound:
                bound = np.linalg.norm(A, 2) / (zeta * M)
                if gap > bound * (1 + 1e-10):
                    raise AssertionError(
                        f"rank-1 trace gap {gap} exceeds bound {bound} at M={M}")
            errs[t] = gap
        per_size.append(errs)
    return _record("rank1_perturbation", M_values, per_size)


def check_free_probability_traces(M_values, rng: np.random.Generator,
                                  n_trials: int = 100,
                                  M_osc: int | None = None) -> ConvergenceRecord:
    """tr(UV)/M factorizes into (tr U/M)(tr V/M) for a Wishart resolvent U and
    an independent diagonal phase matrix V."""
    per_size = []
    for M in M_values:
        K = max(M // 4, 1)
        errs = np.empty(n_trials)
        for t in range(n_trials):
            H = _gaussian_vec(K * M, rng, 1.0).reshape(K, M)
            U = np.linalg.inv(H.conj().T @ H / M + 0.5 * np.eye(M))
            v = block_phase_diag(M, M if M_osc is None else M_osc, rng)
            tr_uv = np.trace(U * v[None, :]).item() / M  # U @ diag(v) trace
            errs[t] = abs(tr_uv - (np.trace(U) / M) * v.mean())
        per_size.append(errs)
    return _record("free_probability_traces", M_values, per_size)


def check_quadratic_form_identities(M: int, q0: float, rng: np.random.Generator,
                                    n_trials: int = 100, M_osc: int = 5,
                                    alpha: float = 0.5) -> np.ndarray:
    """Phase-rotated quadratic forms against their three deterministic limits.

    With V = (A + q0 xx^H + q1 ww^H + q2 xw^H + q2 wx^H)^{-1}, N a unitary
    block-phase diagonal independent of A, and t1 = tr(A^{-1})/M,
    t2 = tr(U A^{-1})/M, the targets are
      x^H N U V N^H x  ->  t2 - q0 t1 t2 |tr N / M|^2 / (1 + t1)
      x^H U V N^H x    ->  t2 (1 + q1 t1) / (1 + t1) * tr(N^H)/M
      w^H U V N^H x    ->  -q2 t1 t2 / (1 + t1) * tr(N^H)/M
    Returns the median absolute deviation of each identity.
    """
    if not 0.0 <= q0 <= 1.0:
        raise ValueError(f"q0 must be in [0, 1], got {q0}")
    q1 = 1.0 - q0
    q2 = np.sqrt(q0 * q1)
    K = M // 4
    devs = np.empty((n_trials, 3))
    for t in range(n_trials):
        H = _gaussian_vec(K * M, rng, 1.0).reshape(K, M)
        A = H.conj().T @ H / M + alpha * np.eye(M)
        Ainv = np.linalg.inv(A)
        U = np.linalg.inv(H.conj().T @ H / M + 2.0 * alpha * np.eye(M))
        x = _gaussian_vec(M, rng, 1.0 / M)
        w = _gaussian_vec(M, rng, 1.0 / M)
        n = block_phase_diag(M, M_osc, rng)
        t1 = (np.trace(Ainv) / M).real
        t2 = (np.trace(U @ Ainv) / M).real
        trn = n.mean()
        V = np.linalg.inv(A + q0 * np.outer(x, x.conj()) + q1 * np.outer(w, w.conj())
                          + q2 * np.outer(x, w.conj()) + q2 * np.outer(w, x.conj()))
        UV = U @ V
        nhx = np.conj(n) * x
        devs[t, 0] = abs((np.conj(n) * x).conj() @ UV @ nhx
                         - (t2 - q0 * t1 * t2 * abs(trn) ** 2 / (1.0 + t1)))
        devs[t, 1] = abs(x.conj() @ UV @ nhx
                         - t2 * (1.0 + q1 * t1) / (1.0 + t1) * np.conj(trn))
        devs[t, 2] = abs(w.conj() @ UV @ nhx
                         - (-q2 * t1 * t2) / (1.0 + t1) * np.conj(trn))
    return np.median(devs, axis=0)


def convergence_to_csv(records: list[ConvergenceRecord]) -> str:
    """Serialize convergence records as CSV text for plotting."""
    lines = ["name,M,median_error,slope"]
    for rec in records:
        for M, err in zip(rec.M_values, rec.errors):
            lines.append(f"{rec.name},{M},{err!r},{rec.slope!r}")
    return "\n".join(lines) + "\n"
