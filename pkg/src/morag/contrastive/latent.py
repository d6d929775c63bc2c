"""Diagonal Gaussian latents and the reparameterized sampling step."""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidLatentError, ShapeError

LATENT_DIM = 256


@dataclass(frozen=True)
class GaussianLatent:
    """Diagonal Gaussian over the embedding space (mu, sigma elementwise)."""

    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=np.float64)
        sigma = np.asarray(self.sigma, dtype=np.float64)
        if mu.ndim != 1 or mu.shape != sigma.shape:
            raise ShapeError(
                f"mu and sigma must be equal-length vectors, got {mu.shape} and {sigma.shape}"
            )
        if not (np.isfinite(mu).all() and np.isfinite(sigma).all()):
            raise InvalidLatentError("latent parameters contain non-finite values")
        if (sigma <= 0).any():
            raise InvalidLatentError("sigma must be elementwise positive")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    @property
    def dim(self) -> int:
        return self.mu.shape[0]

    @classmethod
    def standard(cls, dim: int = LATENT_DIM) -> "GaussianLatent":
        return cls(mu=np.zeros(dim), sigma=np.ones(dim))


def reparameterize(g: GaussianLatent, noise: np.ndarray) -> np.ndarray:
    """Sample ``mu + sigma * noise`` for standard-normal ``noise``.

    Retrieval-time embeddings bypass this and use ``mu`` directly; sampling is
    a training-path operation.
    """
    noise = np.asarray(noise, dtype=np.float64)
    if noise.shape != g.mu.shape:
        raise ShapeError(f"noise shape {noise.shape} does not match latent dim {g.dim}")
    return g.mu + g.sigma * noise
