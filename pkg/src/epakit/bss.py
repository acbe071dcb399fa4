"""Blind-source-separation privacy attack.

JADE ICA (whitening + joint diagonalization of fourth-order cumulant
matrices) is mounted against the modulated copies a data owner would
publish. Recovery quality is scored as a signal-to-interference ratio in
dB; above 20 dB the sources count as recoverable and the perturbation as
broken.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import substream
from .elliptical import pair_transform
from .rotations import jacobi_eigh, joint_diagonalize

SIR_CAP_DB = 300.0
RECOVERABLE_DB = 20.0


@dataclass
class MixtureSet:
    sources: np.ndarray     # (m, T)
    mixtures: np.ndarray    # (K, T), K >= m

    def __post_init__(self):
        s, x = np.atleast_2d(self.sources), np.atleast_2d(self.mixtures)
        if x.shape[0] < s.shape[0]:
            raise ValueError("need at least as many mixtures as sources")
        if s.shape[1] != x.shape[1] or s.shape[1] < 10 * s.shape[0]:
            raise ValueError("need T >= 10*m samples in both matrices")
        if not (np.isfinite(s).all() and np.isfinite(x).all()):
            raise ValueError("non-finite values")
        self.sources, self.mixtures = s, x


@dataclass
class JadeResult:
    unmixing: np.ndarray            # (m, K)
    estimated_sources: np.ndarray   # (m, T) = unmixing @ mixtures
    whitener: np.ndarray            # (m, K)
    sweeps_used: int
    converged: bool


@dataclass
class SirReport:
    sir_db: float
    per_source_sir_db: tuple[float, ...]
    recoverable: bool
    permutation: tuple[int, ...]    # estimated row matched to each source
    scales: tuple[float, ...]       # least-squares scale applied per match
    converged: bool = True          # joint-diagonalization convergence, when known

    def __post_init__(self):
        assert self.recoverable == (self.sir_db > RECOVERABLE_DB)


def jade(mixtures: np.ndarray, m: int) -> JadeResult:
    """JADE ICA: extract m independent components from K >= m mixtures.

    Steps: center rows; whiten to m dimensions via the covariance
    eigendecomposition; build the m^2 fourth-order cumulant matrices of the
    whitened rows; jointly diagonalize them with Givens sweeps; compose the
    unmixing matrix. Non-convergence of the sweeps is reported via the
    `converged` flag, not an exception.
    """
    X = np.atleast_2d(np.asarray(mixtures, dtype=float))
    K, T = X.shape
    if not 2 <= m <= K:
        raise ValueError(f"need K >= m >= 2, got K={K}, m={m}")
    if (np.ptp(X, axis=1) == 0).any():
        raise ValueError("constant mixture row")

    Xc = X - X.mean(axis=1, keepdims=True)
    C = Xc @ Xc.T / T
    vals, vecs = jacobi_eigh(C)
    if vals[m - 1] <= 1e-12 * max(vals[0], 1e-300):
        raise ValueError(f"whitening failed: mixture covariance rank < {m}")
    whitener = (vecs[:, :m] / np.sqrt(vals[:m])).T     # (m, K)
    Z = whitener @ Xc                                   # (m, T), identity covariance

    # fourth-order cumulant matrices Q_ij = E[z_i z_j z z^T] - I*d_ij - e_i e_j^T - e_j e_i^T
    eye = np.eye(m)
    cumulants = np.empty((m * m, m, m))
    for i in range(m):
        for j in range(m):
            E = (Z * Z[i] * Z[j]) @ Z.T / T
            Q = E - eye * (1.0 if i == j else 0.0)
            Q = Q - np.outer(eye[i], eye[j]) - np.outer(eye[j], eye[i])
            cumulants[i * m + j] = 0.5 * (Q + Q.T)
    V, converged, sweeps = joint_diagonalize(cumulants)
    unmixing = V.T @ whitener
    return JadeResult(unmixing=unmixing,
                      estimated_sources=unmixing @ X,
                      whitener=whitener, sweeps_used=sweeps,
                      converged=converged)


def _capped_db(num: float, den: float) -> float:
    if den <= num * 10 ** (-SIR_CAP_DB / 10):
        return SIR_CAP_DB
    return min(SIR_CAP_DB, 10.0 * np.log10(num / den))


def sir(sources: np.ndarray, estimated: np.ndarray) -> SirReport:
    """Signal-to-interference ratio of estimated sources against the truth.

    Estimated rows are matched to source rows greedily by largest absolute
    correlation, then rescaled per pair by the least-squares factor (which
    absorbs sign). SIR is matched-signal power over residual power, in dB,
    capped at 300; the overall value pools power across sources.
    """
    S = np.atleast_2d(np.asarray(sources, dtype=float))
    E = np.atleast_2d(np.asarray(estimated, dtype=float))
    if S.shape != E.shape:
        raise ValueError("sources and estimates must have matching shapes")
    m = S.shape[0]
    if (np.ptp(S, axis=1) == 0).any() or (np.ptp(E, axis=1) == 0).any():
        raise ValueError("constant row")
    if not (S * S).sum(axis=1).all():
        raise ValueError("zero-power source")

    corr = np.corrcoef(S, E)[:m, m:]
    perm = [-1] * m
    free_src, free_est = set(range(m)), set(range(m))
    for _ in range(m):
        i, j = max(((i, j) for i in free_src for j in free_est),
                   key=lambda ij: abs(corr[ij[0], ij[1]]))
        perm[i] = j
        free_src.remove(i)
        free_est.remove(j)

    scales, per_src = [], []
    num_total = den_total = 0.0
    for i, j in enumerate(perm):
        s, e = S[i], E[j]
        c = float(np.dot(s, e) / np.dot(e, e))
        resid = s - c * e
        num, den = float(np.dot(s, s)), float(np.dot(resid, resid))
        scales.append(c)
        per_src.append(_capped_db(num, den))
        num_total += num
        den_total += den
    total = _capped_db(num_total, den_total)
    return SirReport(sir_db=total, per_source_sir_db=tuple(per_src),
                     recoverable=total > RECOVERABLE_DB,
                     permutation=tuple(perm), scales=tuple(scales))


def bss_attack(x1, x2, K: int, alpha: float, seed: int,
               a_fixed: float | None = None, linear: bool = False) -> SirReport:
    """Attack one feature pair: publish K modulated copies, try to separate.

    K weights are drawn from Uniform(0.01, 0.99) (a_fixed, when given,
    replaces the first so a tuning candidate is always among the copies).
    Each copy is the pair's elliptical transform under its weight; `linear`
    substitutes the plain weighted sum a*x1 + (1-a)*x2 as a control. JADE
    then extracts 2 components, scored against the true pair.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != x2.shape or x1.ndim != 1 or x1.size < 100:
        raise ValueError("need equal-length columns of at least 100 rows")
    if (x1 < 0).any() or (x2 < 0).any():
        raise ValueError("columns must be nonnegative")
    if K < 2:
        raise ValueError("need K >= 2 copies")

    weights = substream(seed, 0).uniform(0.01, 0.99, K)
    if a_fixed is not None:
        weights[0] = a_fixed
    mixtures = np.empty((K, x1.size))
    for k, a in enumerate(weights):
        rng = substream(seed, k + 1)
        if linear:
            mixtures[k] = a * x1 + (1 - a) * x2 + alpha * rng.standard_normal(x1.size)
        else:
            mixtures[k] = pair_transform(x1, x2, float(a), alpha, rng)
    result = jade(mixtures, m=2)
    report = sir(np.vstack([x1, x2]), result.estimated_sources)
    report.converged = result.converged
    return report
