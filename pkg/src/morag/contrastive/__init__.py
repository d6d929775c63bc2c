from .latent import GaussianLatent, reparameterize
from .losses import (
    LossWeights,
    cosine_similarity,
    embedding_similarity_loss,
    infonce_loss,
    kl_diag_gaussians,
    kl_loss,
    reconstruction_loss,
    similarity_matrix,
    total_loss,
    wrong_negative_mask,
)
from .trainer import TrainResult, projection_loss_and_grads, train_toy_projection

__all__ = [
    "GaussianLatent",
    "reparameterize",
    "LossWeights",
    "cosine_similarity",
    "similarity_matrix",
    "wrong_negative_mask",
    "infonce_loss",
    "kl_diag_gaussians",
    "kl_loss",
    "embedding_similarity_loss",
    "reconstruction_loss",
    "total_loss",
    "TrainResult",
    "projection_loss_and_grads",
    "train_toy_projection",
]
