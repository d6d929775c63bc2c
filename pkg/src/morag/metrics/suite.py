"""Retrieval-quality and diversity metrics over feature vectors.

All sampling is driven by ``numpy.random.default_rng`` seeded explicitly, so
every metric is bit-reproducible for a fixed seed and input. The feature
extractor producing the vectors is external; these functions only consume
them.
"""

import numpy as np

from ..errors import InsufficientDataError, ShapeError

DEFAULT_POOL_SIZE = 32
DEFAULT_SUBSET_SIZE = 300
DEFAULT_PAIRS = 10


def _check_paired(text_feats, motion_feats):
    text = np.asarray(text_feats, dtype=np.float64)
    motion = np.asarray(motion_feats, dtype=np.float64)
    if text.ndim != 2 or text.shape != motion.shape:
        raise ShapeError(
            f"paired feature sets must be equal-shaped 2-D arrays, "
            f"got {text.shape} and {motion.shape}"
        )
    return text, motion


def _sample_distractors(rng, n: int, ground_truth: int, count: int) -> np.ndarray:
    """``count`` distinct indices drawn uniformly from 0..n-1 minus the truth."""
    drawn = rng.choice(n - 1, size=count, replace=False)
    return np.where(drawn >= ground_truth, drawn + 1, drawn)


def r_precision(
    text_feats: np.ndarray,
    motion_feats: np.ndarray,
    pool_size: int = DEFAULT_POOL_SIZE,
    seed: int = 0,
) -> tuple[float, float, float]:
    """Top-1/2/3 accuracy of ranking each motion's true text in a sampled pool.

    For every motion the pool holds its ground-truth text plus
    ``pool_size - 1`` distinct distractors; candidates are ordered by
    ascending Euclidean distance. Distance ties resolve in favor of the
    ground truth (immaterial for continuous features).
    """
    text, motion = _check_paired(text_feats, motion_feats)
    n = text.shape[0]
    if n < pool_size:
        raise InsufficientDataError(
            f"r_precision needs at least pool_size={pool_size} rows, got {n}"
        )
    rng = np.random.default_rng(seed)
    hits = np.zeros(3)
    for i in range(n):
        distractors = _sample_distractors(rng, n, i, pool_size - 1)
        d_truth = np.linalg.norm(text[i] - motion[i])
        d_other = np.linalg.norm(text[distractors] - motion[i], axis=1)
        rank = 1 + int((d_other < d_truth).sum())
        for m in range(3):
            hits[m] += rank <= m + 1
    top1, top2, top3 = hits / n
    return float(top1), float(top2), float(top3)


def mm_dist(text_feats: np.ndarray, motion_feats: np.ndarray) -> float:
    """Mean Euclidean distance between paired text and motion features."""
    text, motion = _check_paired(text_feats, motion_feats)
    return float(np.linalg.norm(text - motion, axis=1).mean())


def sample_disjoint_subsets(rng, n: int, size: int) -> tuple[np.ndarray, np.ndarray]:
    indices = rng.choice(n, size=2 * size, replace=False)
    return indices[:size], indices[size:]


def diversity(
    feats: np.ndarray, subset_size: int = DEFAULT_SUBSET_SIZE, seed: int = 0
) -> float:
    """Mean distance between two disjoint sampled subsets, pair-aligned."""
    x = np.asarray(feats, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeError(f"feature set must be 2-D, got shape {x.shape}")
    if x.shape[0] < 2 * subset_size:
        raise InsufficientDataError(
            f"diversity needs at least {2 * subset_size} rows, got {x.shape[0]}"
        )
    rng = np.random.default_rng(seed)
    first, second = sample_disjoint_subsets(rng, x.shape[0], subset_size)
    return float(np.linalg.norm(x[first] - x[second], axis=1).mean())


def sample_disjoint_pairs(rng, n: int, pairs: int) -> np.ndarray:
    """(pairs, 2) index pairs with no index reused across pairs."""
    chosen = rng.permutation(n)[: 2 * pairs]
    return chosen.reshape(pairs, 2)


def multimodality(
    groups, pairs: int = DEFAULT_PAIRS, seed: int = 0
) -> float:
    """Within-group variation: mean distance over sampled disjoint pairs.

    ``groups`` maps a group label (e.g. the text) to a 2-D array of feature
    vectors generated for it; each group must supply at least ``2 * pairs``
    rows.
    """
    if not groups:
        raise InsufficientDataError("multimodality needs at least one group")
    items = groups.items() if isinstance(groups, dict) else enumerate(groups)
    rng = np.random.default_rng(seed)
    means = []
    for label, rows in items:
        x = np.asarray(rows, dtype=np.float64)
        if x.ndim != 2:
            raise ShapeError(f"group {label!r} must be a 2-D array, got {x.shape}")
        if x.shape[0] < 2 * pairs:
            raise InsufficientDataError(
                f"group {label!r} has {x.shape[0]} rows, needs {2 * pairs}"
            )
        idx = sample_disjoint_pairs(rng, x.shape[0], pairs)
        dists = np.linalg.norm(x[idx[:, 0]] - x[idx[:, 1]], axis=1)
        means.append(dists.mean())
    return float(np.mean(means))
