"""Gaussian feature statistics and the Frechet distance between them."""

from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientDataError, InvalidStatsError, ShapeError

_SYMMETRY_TOL = 1e-10
_EIG_TOL = 1e-10
_SQRT_CLAMP = 1e-8


@dataclass(frozen=True)
class GaussianStats:
    """Sample mean and covariance of a feature set."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        cov = np.asarray(self.covariance, dtype=np.float64)
        d = mean.shape[0]
        if mean.ndim != 1 or cov.shape != (d, d):
            raise ShapeError(f"stats shapes inconsistent: {mean.shape} vs {cov.shape}")
        if not (np.isfinite(mean).all() and np.isfinite(cov).all()):
            raise InvalidStatsError("stats contain non-finite values")
        asym = np.abs(cov - cov.T).max(initial=0.0)
        if asym > _SYMMETRY_TOL * max(1.0, np.abs(cov).max(initial=0.0)):
            raise InvalidStatsError(f"covariance asymmetric by {asym}")
        eigs = np.linalg.eigvalsh((cov + cov.T) / 2)
        scale = max(1.0, float(np.abs(eigs).max(initial=0.0)))
        if eigs.min(initial=0.0) < -_EIG_TOL * scale:
            raise InvalidStatsError(
                f"covariance has negative eigenvalue {eigs.min()}"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", (cov + cov.T) / 2)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def gaussian_stats(feats: np.ndarray) -> GaussianStats:
    """Sample mean and unbiased sample covariance of row vectors."""
    x = np.asarray(feats, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeError(f"feature set must be 2-D, got shape {x.shape}")
    if x.shape[0] < 2:
        raise InsufficientDataError(
            f"covariance needs at least 2 samples, got {x.shape[0]}"
        )
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / (x.shape[0] - 1)
    return GaussianStats(mean=mean, covariance=cov)


def _psd_sqrt(cov: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(cov)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.T


def frechet_distance(a: GaussianStats, b: GaussianStats) -> float:
    """|mu_a - mu_b|^2 + Tr(S_a + S_b - 2 (S_a S_b)^{1/2}).

    The cross square root is evaluated through the symmetric sandwich
    S_a^{1/2} S_b S_a^{1/2}, whose eigenvalues are clamped to zero when they
    dip no further than 1e-8 below it; anything worse is rejected.
    """
    if a.dim != b.dim:
        raise ShapeError(f"stats dims differ: {a.dim} vs {b.dim}")
    root_a = _psd_sqrt(a.covariance)
    sandwich = root_a @ b.covariance @ root_a
    sandwich = (sandwich + sandwich.T) / 2
    eigs = np.linalg.eigvalsh(sandwich)
    if eigs.min(initial=0.0) < -_SQRT_CLAMP:
        raise InvalidStatsError(
            f"cross-covariance sandwich indefinite: eigenvalue {eigs.min()}"
        )
    trace_sqrt = np.sqrt(np.clip(eigs, 0.0, None)).sum()
    delta = a.mean - b.mean
    return float(
        delta @ delta
        + np.trace(a.covariance)
        + np.trace(b.covariance)
        - 2.0 * trace_sqrt
    )
