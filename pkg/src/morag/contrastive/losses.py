"""Similarity matrices and the composite training loss.

The total loss combines a motion reconstruction term, KL regularizers on the
text/motion latent distributions, a cross-modal embedding similarity term, and
a symmetric InfoNCE contrastive term over the cosine-similarity matrix of a
batch. In-batch negatives whose *text* descriptions are too similar to the
anchor ("wrong negatives") are excluded from the InfoNCE denominators.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import (
    ConfigError,
    DegenerateVectorError,
    InvalidLatentError,
    InvalidMaskError,
    ShapeError,
)
from .latent import GaussianLatent

DEFAULT_TAU = 0.1
DEFAULT_LAMBDA_NCE = 0.1
DEFAULT_LAMBDA_KL = 1e-5
DEFAULT_LAMBDA_E = 1e-5
DEFAULT_FILTER_THRESHOLD = 0.8


@dataclass(frozen=True)
class LossWeights:
    lambda_kl: float = DEFAULT_LAMBDA_KL
    lambda_e: float = DEFAULT_LAMBDA_E
    lambda_nce: float = DEFAULT_LAMBDA_NCE
    tau: float = DEFAULT_TAU
    filter_threshold: float = DEFAULT_FILTER_THRESHOLD

    def __post_init__(self):
        if not (np.isfinite(self.tau) and self.tau > 0):
            raise ConfigError(f"tau must be positive, got {self.tau}")
        for name in ("lambda_kl", "lambda_e", "lambda_nce"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise ConfigError(f"{name} must be non-negative, got {value}")
        if not -1.0 <= self.filter_threshold <= 1.0:
            raise ConfigError(
                f"filter_threshold must lie in [-1, 1], got {self.filter_threshold}"
            )


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ShapeError(f"vectors must share one dimension, got {a.shape} and {b.shape}")
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise DegenerateVectorError("cosine similarity of a zero-norm vector")
    return float(np.clip(np.dot(a, b) / (norm_a * norm_b), -1.0, 1.0))


def similarity_matrix(text_embs: np.ndarray, motion_embs: np.ndarray) -> np.ndarray:
    """Pairwise cosine similarities; rows index texts, columns index motions."""
    text = np.asarray(text_embs, dtype=np.float64)
    motion = np.asarray(motion_embs, dtype=np.float64)
    if text.ndim != 2 or text.shape != motion.shape:
        raise ShapeError(
            f"embedding batches must be equal-shaped 2-D arrays, got {text.shape} and {motion.shape}"
        )
    for name, batch in (("text", text), ("motion", motion)):
        norms = np.linalg.norm(batch, axis=1)
        if (norms == 0.0).any():
            row = int(np.nonzero(norms == 0.0)[0][0])
            raise DegenerateVectorError(f"{name} row {row} has zero norm")
    t_unit = text / np.linalg.norm(text, axis=1, keepdims=True)
    m_unit = motion / np.linalg.norm(motion, axis=1, keepdims=True)
    return np.clip(t_unit @ m_unit.T, -1.0, 1.0)


def wrong_negative_mask(text_sims: np.ndarray, threshold: float = DEFAULT_FILTER_THRESHOLD) -> np.ndarray:
    """Keep-mask over batch pairs: filter negatives with text similarity > threshold.

    The comparison is strict, so a pair sitting exactly at the threshold is
    kept. Diagonal (positive) pairs are always kept.
    """
    sims = np.asarray(text_sims, dtype=np.float64)
    if sims.ndim != 2 or sims.shape[0] != sims.shape[1]:
        raise ShapeError(f"text similarity matrix must be square, got {sims.shape}")
    mask = sims <= threshold
    np.fill_diagonal(mask, True)
    return mask


def _masked_log_softmax_diag(scores: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Per-row log(softmax(scores)[i, i]) with masked-out entries excluded."""
    neg_inf = np.where(mask, 0.0, -np.inf)
    shifted = scores + neg_inf
    row_max = shifted.max(axis=1, keepdims=True)
    expo = np.exp(shifted - row_max)
    log_denom = np.log(expo.sum(axis=1)) + row_max[:, 0]
    return np.diagonal(scores) - log_denom


def infonce_loss(S: np.ndarray, tau: float = DEFAULT_TAU, mask: np.ndarray | None = None) -> float:
    """Symmetric InfoNCE over a similarity matrix.

    Averages the row-wise (text -> motion) and column-wise (motion -> text)
    cross entropies of the diagonal against temperature-scaled softmaxes,
    restricted to pairs the mask keeps. Uses max-subtraction for stability.
    """
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ShapeError(f"similarity matrix must be square, got {S.shape}")
    if not (np.isfinite(tau) and tau > 0):
        raise ConfigError(f"tau must be positive, got {tau}")
    n = S.shape[0]
    if mask is None:
        mask = np.ones((n, n), dtype=bool)
    else:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != S.shape:
            raise ShapeError(f"mask shape {mask.shape} does not match {S.shape}")
        if not np.diagonal(mask).all():
            raise InvalidMaskError("mask must keep every diagonal (positive) pair")
    scores = S / tau
    rows = _masked_log_softmax_diag(scores, mask)
    cols = _masked_log_softmax_diag(scores.T, mask.T)
    return float(-(rows.sum() + cols.sum()) / (2 * n) + 0.0)


def kl_diag_gaussians(p: GaussianLatent, q: GaussianLatent) -> float:
    """KL(p || q) for diagonal Gaussians."""
    if p.dim != q.dim:
        raise ShapeError(f"latent dims differ: {p.dim} vs {q.dim}")
    var_q = q.sigma**2
    terms = (
        np.log(q.sigma / p.sigma)
        + (p.sigma**2 + (p.mu - q.mu) ** 2) / (2 * var_q)
        - 0.5
    )
    return float(terms.sum())


def kl_loss(text: GaussianLatent, motion: GaussianLatent) -> float:
    """Four-part KL regularizer: both latents against N(0, I) plus both cross terms."""
    if text.dim != motion.dim:
        raise ShapeError(f"latent dims differ: {text.dim} vs {motion.dim}")
    standard = GaussianLatent.standard(text.dim)
    return (
        kl_diag_gaussians(text, standard)
        + kl_diag_gaussians(motion, standard)
        + kl_diag_gaussians(text, motion)
        + kl_diag_gaussians(motion, text)
    )


def _smooth_l1(diff: np.ndarray) -> np.ndarray:
    absd = np.abs(diff)
    return np.where(absd < 1.0, 0.5 * diff**2, absd - 0.5)


def embedding_similarity_loss(z_text: np.ndarray, z_motion: np.ndarray) -> float:
    """Smooth-L1 distance between paired latent embeddings, averaged per element."""
    zt = np.asarray(z_text, dtype=np.float64)
    zm = np.asarray(z_motion, dtype=np.float64)
    if zt.shape != zm.shape:
        raise ShapeError(f"embedding shapes differ: {zt.shape} vs {zm.shape}")
    return float(_smooth_l1(zt - zm).mean())


def reconstruction_loss(decoded, reference) -> float:
    """Smooth-L1 over feature matrices, averaged over all entries."""
    dec = np.asarray(getattr(decoded, "data", decoded), dtype=np.float64)
    ref = np.asarray(getattr(reference, "data", reference), dtype=np.float64)
    if dec.shape != ref.shape:
        raise ShapeError(f"feature shapes differ: {dec.shape} vs {ref.shape}")
    return float(_smooth_l1(dec - ref).mean())


def total_loss(
    reconstruction: float,
    kl: float,
    embedding: float,
    nce: float,
    weights: LossWeights = LossWeights(),
) -> float:
    return float(
        reconstruction
        + weights.lambda_kl * kl
        + weights.lambda_e * embedding
        + weights.lambda_nce * nce
    )
