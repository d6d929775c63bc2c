"""Skeleton tables and the per-frame feature layout.

The skeleton is the 22-joint SMPL subset. Joint 0 (the pelvis) is the root;
the 21 remaining joints each carry a 6D rotation row at index ``joint - 1``.
"""

JOINT_NAMES = (
    "pelvis",        # 0
    "left_hip",      # 1
    "right_hip",     # 2
    "spine1",        # 3
    "left_knee",     # 4
    "right_knee",    # 5
    "spine2",        # 6
    "left_ankle",    # 7
    "right_ankle",   # 8
    "spine3",        # 9
    "left_foot",     # 10
    "right_foot",    # 11
    "neck",          # 12
    "left_collar",   # 13
    "right_collar",  # 14
    "head",          # 15
    "left_shoulder",  # 16
    "right_shoulder",  # 17
    "left_elbow",    # 18
    "right_elbow",   # 19
    "left_wrist",    # 20
    "right_wrist",   # 21
)

NUM_JOINTS = 22
NUM_ROTATION_JOINTS = NUM_JOINTS - 1

# Heel/toe joints used for contact detection, in feature-column order:
# left ankle, left foot, right ankle, right foot.
CONTACT_JOINTS = (7, 10, 8, 11)

DEFAULT_CONTACT_THRESHOLD = 2e-3  # squared per-frame displacement

# Per-frame feature row: root angular velocity (1), root planar velocity (2),
# root height (1), non-root joint positions (21*3), all-joint velocities
# (22*3), non-root 6D rotations (21*6), foot contacts (4).
FEATURE_WIDTH = 263

ROOT_ANGULAR = slice(0, 1)
ROOT_PLANAR = slice(1, 3)
ROOT_HEIGHT = slice(3, 4)
JOINT_POSITIONS = slice(4, 67)
JOINT_VELOCITIES = slice(67, 133)
JOINT_ROTATIONS = slice(133, 259)
FOOT_CONTACTS = slice(259, 263)

SLICE_BOUNDARIES = (1, 3, 4, 67, 133, 259)

# MORAGMO1 joint-motion row: root translation (3), root heading (1),
# joint positions (22*3), joint rotations (21*6).
JOINT_MOTION_WIDTH = 3 + 1 + NUM_JOINTS * 3 + NUM_ROTATION_JOINTS * 6

PARTS = ("torso", "hands", "legs")
