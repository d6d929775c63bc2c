"""Desk-scale trainer: two linear projections fitted with the contrastive objective.

This is a deliberately small stand-in for the full encoder training loop: raw
text-side and motion-side feature vectors are projected into the shared
embedding space by single linear maps, optimized with full-batch gradient
descent on ``lambda_e * L_E + lambda_nce * L_NCE``. The KL and reconstruction
terms need the sequence decoder and are out of scope here. Gradients are
computed analytically (closed form below) so they can be checked against
finite differences.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import (
    DegenerateVectorError,
    InsufficientDataError,
    ShapeError,
    TrainingDivergedError,
)
from .losses import LossWeights, wrong_negative_mask

DEFAULT_OUT_DIM = 256


def _normalize_rows(z: np.ndarray, label: str) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(z, axis=1)
    if (norms == 0.0).any():
        row = int(np.nonzero(norms == 0.0)[0][0])
        raise DegenerateVectorError(f"{label} embedding row {row} has zero norm")
    return z / norms[:, None], norms


def _masked_softmax(scores: np.ndarray, mask: np.ndarray) -> np.ndarray:
    shifted = np.where(mask, scores, -np.inf)
    shifted = shifted - shifted.max(axis=1, keepdims=True)
    expo = np.exp(shifted)
    return expo / expo.sum(axis=1, keepdims=True)


def projection_loss_and_grads(
    w_text: np.ndarray,
    w_motion: np.ndarray,
    text_features: np.ndarray,
    motion_features: np.ndarray,
    weights: LossWeights = LossWeights(),
    mask: np.ndarray | None = None,
) -> tuple[float, np.ndarray, np.ndarray, dict]:
    """Objective value and analytic gradients w.r.t. both projection matrices.

    InfoNCE backprop: with row/column masked softmaxes P and C of S/tau, the
    similarity-matrix gradient is (P + C - 2I) / (2N tau); it is pushed through
    the cosine normalization (g - (g.u)u)/|z| and the linear maps.
    """
    xt = np.asarray(text_features, dtype=np.float64)
    xm = np.asarray(motion_features, dtype=np.float64)
    wt = np.asarray(w_text, dtype=np.float64)
    wm = np.asarray(w_motion, dtype=np.float64)
    n = xt.shape[0]
    if xm.shape[0] != n:
        raise ShapeError("text and motion batches must pair up")
    if mask is None:
        mask = np.ones((n, n), dtype=bool)

    with np.errstate(over="ignore", invalid="ignore"):
        return _loss_and_grads(wt, wm, xt, xm, weights, mask)


def _loss_and_grads(wt, wm, xt, xm, weights, mask):
    n = xt.shape[0]
    zt = xt @ wt
    zm = xm @ wm
    dim = zt.shape[1]

    # Smooth-L1 embedding term.
    diff = zt - zm
    absd = np.abs(diff)
    l_e = float(np.where(absd < 1.0, 0.5 * diff**2, absd - 0.5).mean())
    d_e = np.where(absd < 1.0, diff, np.sign(diff)) / (n * dim)

    # InfoNCE term over cosine similarities.
    ut, norm_t = _normalize_rows(zt, "text")
    um, norm_m = _normalize_rows(zm, "motion")
    scores = (ut @ um.T) / weights.tau
    p_row = _masked_softmax(scores, mask)
    p_col = _masked_softmax(scores.T, mask.T).T
    diag = np.diagonal(scores)
    log_p_row = diag - _logsumexp_masked(scores, mask)
    log_p_col = diag - _logsumexp_masked(scores.T, mask.T)
    l_nce = float(-(log_p_row.sum() + log_p_col.sum()) / (2 * n))

    eye = np.eye(n)
    g_s = (p_row + p_col - 2 * eye) / (2 * n * weights.tau)
    g_ut = g_s @ um
    g_um = g_s.T @ ut
    g_zt_nce = (g_ut - (g_ut * ut).sum(axis=1, keepdims=True) * ut) / norm_t[:, None]
    g_zm_nce = (g_um - (g_um * um).sum(axis=1, keepdims=True) * um) / norm_m[:, None]

    g_zt = weights.lambda_e * d_e + weights.lambda_nce * g_zt_nce
    g_zm = -weights.lambda_e * d_e + weights.lambda_nce * g_zm_nce

    total = weights.lambda_e * l_e + weights.lambda_nce * l_nce
    components = {"embedding": l_e, "nce": l_nce, "total": total}
    return total, xt.T @ g_zt, xm.T @ g_zm, components


def _logsumexp_masked(scores: np.ndarray, mask: np.ndarray) -> np.ndarray:
    shifted = np.where(mask, scores, -np.inf)
    row_max = shifted.max(axis=1)
    return np.log(np.exp(shifted - row_max[:, None]).sum(axis=1)) + row_max


@dataclass
class TrainResult:
    w_text: np.ndarray
    w_motion: np.ndarray
    trace: np.ndarray = field(repr=False)
    final_components: dict = field(default_factory=dict)

    @property
    def initial_loss(self) -> float:
        return float(self.trace[0])

    @property
    def final_loss(self) -> float:
        return float(self.trace[-1])


def train_toy_projection(
    text_features: np.ndarray,
    motion_features: np.ndarray,
    weights: LossWeights = LossWeights(),
    epochs: int = 1000,
    learning_rate: float = 1.0,
    seed: int = 0,
    out_dim: int = DEFAULT_OUT_DIM,
    text_sims: np.ndarray | None = None,
) -> TrainResult:
    """Fit the two projections by full-batch gradient descent.

    Deterministic for a fixed seed. ``text_sims``, when given, derives the
    wrong-negative keep-mask with the configured filter threshold.
    """
    xt = np.asarray(text_features, dtype=np.float64)
    xm = np.asarray(motion_features, dtype=np.float64)
    if xt.ndim != 2 or xm.ndim != 2 or xt.shape[0] != xm.shape[0]:
        raise ShapeError(
            f"paired 2-D feature batches required, got {xt.shape} and {xm.shape}"
        )
    if xt.shape[0] < 2:
        raise InsufficientDataError("contrastive training needs at least 2 pairs")
    if xt.shape[1] < 1 or xm.shape[1] < 1:
        raise ShapeError("feature dimensions must be at least 1")

    mask = None
    if text_sims is not None:
        mask = wrong_negative_mask(text_sims, weights.filter_threshold)
        if mask.shape[0] != xt.shape[0]:
            raise ShapeError("text_sims size does not match the batch")

    rng = np.random.default_rng(seed)
    wt = rng.standard_normal((xt.shape[1], out_dim)) / np.sqrt(xt.shape[1])
    wm = rng.standard_normal((xm.shape[1], out_dim)) / np.sqrt(xm.shape[1])

    trace = np.empty(epochs + 1)
    components = {}
    for epoch in range(epochs):
        loss, g_wt, g_wm, components = projection_loss_and_grads(
            wt, wm, xt, xm, weights, mask
        )
        if not np.isfinite(loss):
            raise TrainingDivergedError(f"non-finite loss at epoch {epoch}")
        trace[epoch] = loss
        wt = wt - learning_rate * g_wt
        wm = wm - learning_rate * g_wm
    loss, _, _, components = projection_loss_and_grads(wt, wm, xt, xm, weights, mask)
    if not np.isfinite(loss):
        raise TrainingDivergedError(f"non-finite loss at epoch {epochs}")
    trace[epochs] = loss
    return TrainResult(w_text=wt, w_motion=wm, trace=trace, final_components=components)
