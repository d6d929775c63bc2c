"""Evaluation report assembly from feature-set archives.

Input is a single ``.npz`` archive with any of the arrays:

* ``text``, ``motion`` -- paired (N, D) sets; enables r_precision and mm_dist
* ``real`` -- (M, D) reference set; with ``motion`` enables the Frechet score
* ``mm_groups`` -- (G, S, D) per-text generations; enables multimodality

Metrics whose inputs are absent are reported as null.
"""

from pathlib import Path

import numpy as np

from ..errors import DataError, IoError
from .frechet import frechet_distance, gaussian_stats
from .suite import (
    DEFAULT_PAIRS,
    DEFAULT_POOL_SIZE,
    DEFAULT_SUBSET_SIZE,
    diversity,
    mm_dist,
    multimodality,
    r_precision,
)


def load_feature_sets(path) -> dict:
    p = Path(path)
    if not p.exists():
        raise IoError(f"feature archive not found: {path}")
    try:
        with np.load(p) as archive:
            sets = {name: np.asarray(archive[name], dtype=np.float64) for name in archive.files}
    except (OSError, ValueError) as exc:
        raise DataError(f"cannot load feature archive {path}: {exc}") from exc
    for name in ("text", "motion", "real"):
        if name in sets and sets[name].ndim != 2:
            raise DataError(f"{path}: array {name!r} must be 2-D")
    if "mm_groups" in sets and sets["mm_groups"].ndim != 3:
        raise DataError(f"{path}: array 'mm_groups' must be 3-D (groups, samples, dim)")
    return sets


def build_report(
    sets: dict,
    seed: int = 0,
    subset_size: int = DEFAULT_SUBSET_SIZE,
    pool_size: int = DEFAULT_POOL_SIZE,
    pairs: int = DEFAULT_PAIRS,
) -> dict:
    report = {
        "r_precision": None,
        "mm_dist": None,
        "diversity": None,
        "multimodality": None,
        "fid": None,
        "config": {
            "seeds": {"r_precision": seed, "diversity": seed, "multimodality": seed},
            "subset_size": subset_size,
            "pool_size": pool_size,
        },
    }
    text = sets.get("text")
    motion = sets.get("motion")
    real = sets.get("real")
    if text is not None and motion is not None:
        top1, top2, top3 = r_precision(text, motion, pool_size=pool_size, seed=seed)
        report["r_precision"] = {"top1": top1, "top2": top2, "top3": top3}
        report["mm_dist"] = mm_dist(text, motion)
    if motion is not None and motion.shape[0] >= 2 * subset_size:
        report["diversity"] = diversity(motion, subset_size=subset_size, seed=seed)
    if "mm_groups" in sets:
        groups = {str(i): g for i, g in enumerate(sets["mm_groups"])}
        report["multimodality"] = multimodality(groups, pairs=pairs, seed=seed)
    if motion is not None and real is not None:
        report["fid"] = frechet_distance(gaussian_stats(real), gaussian_stats(motion))
    return report
