from .frechet import GaussianStats, frechet_distance, gaussian_stats
from .suite import diversity, mm_dist, multimodality, r_precision
from .report import build_report, load_feature_sets

__all__ = [
    "GaussianStats",
    "gaussian_stats",
    "frechet_distance",
    "r_precision",
    "mm_dist",
    "diversity",
    "multimodality",
    "build_report",
    "load_feature_sets",
]
