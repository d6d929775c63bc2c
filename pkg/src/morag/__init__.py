"""Part-specific text-to-motion retrieval and spatial composition engine.

The package is organized around a small pipeline: an input description is
expanded into torso/hands/legs descriptions via a completion endpoint, each
part description queries its own motion vector database, and the retrieved
motions are fused rank-by-rank into full-body sequences. Supporting modules
provide the motion feature codec, the contrastive-loss mathematics used to
structure the embedding spaces, and the evaluation metric suite.
"""

__version__ = "0.1.0"
