from .partition import JointPartition, default_partition
from .composer import (
    ComposedMotion,
    Provenance,
    compose,
    compose_topk,
    export_composed,
)

__all__ = [
    "JointPartition",
    "default_partition",
    "ComposedMotion",
    "Provenance",
    "compose",
    "compose_topk",
    "export_composed",
]
