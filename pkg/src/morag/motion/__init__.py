from .types import FeatureSequence, JointMotion, RootTrajectory
from .codec import (
    compute_foot_contacts,
    decode_features,
    encode_features,
    integrate_root,
    trim,
)
from .fileio import (
    load_feature_sequence,
    load_joint_motion,
    save_feature_sequence,
    save_joint_motion,
)

__all__ = [
    "FeatureSequence",
    "JointMotion",
    "RootTrajectory",
    "compute_foot_contacts",
    "decode_features",
    "encode_features",
    "integrate_root",
    "trim",
    "load_feature_sequence",
    "load_joint_motion",
    "save_feature_sequence",
    "save_joint_motion",
]
