"""Pluggable text and motion encoders.

Real exports run pretrained part-specific checkpoints; those are external
inputs and are wired in through the same callable interface. The built-in
``hash`` encoder derives a deterministic pseudo-embedding from the normalized
text, which keeps toy exports self-consistent: identical descriptions map to
identical vectors, so retrieval over toy databases behaves sensibly without
any model weights.
"""

import hashlib

import numpy as np

from .formats import normalize_text

EMBEDDING_DIM = 256


def hash_embed(text: str, dim: int = EMBEDDING_DIM) -> np.ndarray:
    digest = hashlib.sha256(normalize_text(text).encode("utf-8")).digest()
    seed = int.from_bytes(digest[:8], "little")
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, 1.0, dim).astype(np.float32)


class HashTextEncoder:
    """Deterministic stand-in for a part-specific text encoder."""

    def __init__(self, dim: int = EMBEDDING_DIM):
        self.dim = dim

    def __call__(self, text: str) -> np.ndarray:
        return hash_embed(text, self.dim)


class HashMotionEncoder:
    """Deterministic stand-in for a part-specific motion encoder.

    Embeds the motion's annotation text plus a small id-seeded perturbation,
    mimicking an encoder that lands near its paired text embedding.
    """

    def __init__(self, dim: int = EMBEDDING_DIM, noise: float = 0.05):
        self.dim = dim
        self.noise = noise

    def __call__(self, motion_id: str, annotation: str) -> np.ndarray:
        base = hash_embed(annotation, self.dim).astype(np.float64)
        seed = int.from_bytes(
            hashlib.sha256(motion_id.encode("utf-8")).digest()[:8], "little"
        )
        rng = np.random.default_rng(seed)
        return (base + self.noise * rng.normal(0.0, 1.0, self.dim)).astype(np.float32)


def make_text_encoder(kind: str, dim: int = EMBEDDING_DIM, checkpoint: str = ""):
    if kind == "hash":
        return HashTextEncoder(dim)
    raise ValueError(
        f"unknown text encoder {kind!r}; checkpoint-backed encoders plug in "
        "through the same callable interface"
    )


def make_motion_encoder(kind: str, dim: int = EMBEDDING_DIM, checkpoint: str = ""):
    if kind == "hash":
        return HashMotionEncoder(dim)
    raise ValueError(f"unknown motion encoder {kind!r}")
