"""Conversion between skeletal motions and the 263-dim feature representation.

Velocity features are raw per-frame forward differences (frame ``t`` holds the
step ``t -> t+1``), so a feature matrix has one row fewer than its source
motion. Planar root velocities and joint velocities are expressed in the root
frame of the earlier frame; decoding re-integrates them from an origin anchor
(heading 0 at x = z = 0), which recovers the source trajectory up to a rigid
planar transform.
"""

import numpy as np

from .. import skeleton
from ..errors import ConfigError, FrameRangeError, InsufficientFramesError, ShapeError
from .types import FeatureSequence, JointMotion, RootTrajectory, rotation_rows_degenerate

# Identity rotation in the 6D encoding (first two rotation-matrix columns).
IDENTITY_ROTATION_6D = np.array([1.0, 0.0, 0.0, 0.0, 1.0, 0.0])


def rotate_about_y(theta: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """Rotate 3-vectors about the +Y axis. ``theta`` broadcasts against ``vec[..., 0]``."""
    c = np.cos(theta)
    s = np.sin(theta)
    x = vec[..., 0]
    y = vec[..., 1]
    z = vec[..., 2]
    return np.stack([c * x + s * z, y, -s * x + c * z], axis=-1)


def global_joint_positions(m: JointMotion) -> np.ndarray:
    """World-frame joint positions, (frames, 22, 3)."""
    rotated = rotate_about_y(m.root_heading[:, None], m.joint_positions)
    return m.root_translation[:, None, :] + rotated


def compute_foot_contacts(m: JointMotion, velocity_threshold: float = skeleton.DEFAULT_CONTACT_THRESHOLD) -> np.ndarray:
    """Binary contact flags for (left ankle, left foot, right ankle, right foot).

    An entry is 1 when the squared per-frame displacement of the joint falls
    below ``velocity_threshold``. Returns (frames - 1, 4).
    """
    if not (np.isfinite(velocity_threshold) and velocity_threshold > 0):
        raise ConfigError(f"velocity_threshold must be positive, got {velocity_threshold}")
    if m.frames < 2:
        raise InsufficientFramesError("contact detection needs at least 2 frames")
    feet = global_joint_positions(m)[:, skeleton.CONTACT_JOINTS, :]
    sq_speed = np.sum(np.diff(feet, axis=0) ** 2, axis=-1)
    return (sq_speed < velocity_threshold).astype(np.float64)


def encode_features(m: JointMotion, contact_threshold: float = skeleton.DEFAULT_CONTACT_THRESHOLD) -> FeatureSequence:
    """Encode a motion into its (frames - 1) x 263 feature matrix.

    Row ``t`` combines the static pose of frame ``t`` with the forward
    difference toward frame ``t + 1``; the final frame contributes no row.
    """
    if m.frames < 2:
        raise InsufficientFramesError(
            f"encoding needs at least 2 frames, got {m.frames}"
        )
    heading = m.root_heading
    trans = m.root_translation

    d_heading = heading[1:] - heading[:-1]
    d_planar = trans[1:] - trans[:-1]
    planar_local = rotate_about_y(-heading[:-1], d_planar)

    glob = global_joint_positions(m)
    d_glob = glob[1:] - glob[:-1]
    vel_local = rotate_about_y(-heading[:-1, None], d_glob)

    rows = m.frames - 1
    out = np.empty((rows, skeleton.FEATURE_WIDTH))
    out[:, skeleton.ROOT_ANGULAR] = d_heading[:, None]
    out[:, skeleton.ROOT_PLANAR] = planar_local[:, [0, 2]]
    out[:, skeleton.ROOT_HEIGHT] = trans[:-1, 1][:, None]
    out[:, skeleton.JOINT_POSITIONS] = m.joint_positions[:-1, 1:, :].reshape(rows, -1)
    out[:, skeleton.JOINT_VELOCITIES] = vel_local.reshape(rows, -1)
    out[:, skeleton.JOINT_ROTATIONS] = m.joint_rotations[:-1].reshape(rows, -1)
    out[:, skeleton.FOOT_CONTACTS] = compute_foot_contacts(m, contact_threshold)
    return FeatureSequence(out)


def integrate_root(
    root_angular: np.ndarray,
    planar_x: np.ndarray,
    planar_z: np.ndarray,
    height: np.ndarray,
) -> RootTrajectory:
    """Integrate per-frame root velocities into a world trajectory.

    Anchored at heading 0 and planar origin: ``heading[t] = heading[t-1] +
    root_angular[t-1]`` and the planar step ``(planar_x, planar_z)[t-1]`` is
    rotated by ``heading[t-1]`` before being added. Heights are taken directly
    from ``height``. The velocities of the final frame are not consumed.
    """
    arrays = [np.asarray(a, dtype=np.float64) for a in (root_angular, planar_x, planar_z, height)]
    length = arrays[0].shape[0] if arrays[0].ndim == 1 else -1
    for arr in arrays:
        if arr.ndim != 1 or arr.shape[0] != length:
            raise ShapeError("integrate_root expects four equal-length 1-D arrays")
    if length < 1:
        raise ShapeError("integrate_root needs at least one frame")
    r_a, r_x, r_z, r_y = arrays

    heading = np.zeros(length)
    heading[1:] = np.cumsum(r_a[:-1])

    steps = np.stack([r_x[:-1], np.zeros(length - 1), r_z[:-1]], axis=-1)
    world_steps = rotate_about_y(heading[:-1], steps)
    position = np.zeros((length, 3))
    position[1:, 0] = np.cumsum(world_steps[:, 0])
    position[1:, 2] = np.cumsum(world_steps[:, 2])
    position[:, 1] = r_y
    return RootTrajectory(heading=heading, position=position)


def decode_features(f: FeatureSequence, fps: float = 20.0) -> JointMotion:
    """Realize a feature matrix as a skeletal motion with L frames for L rows.

    The root path comes from :func:`integrate_root`; positions and rotations
    are copied from their slices. Joint-velocity slots and the last row's root
    velocities are redundant for decoding and are ignored. Degenerate rotation
    rows (e.g. from all-zero features) are replaced with the identity encoding
    so the result is always a valid motion.
    """
    if not isinstance(f, FeatureSequence):
        f = FeatureSequence(np.asarray(f))
    rows = f.frames
    traj = integrate_root(
        f.root_angular_velocity,
        f.root_planar_velocity[:, 0],
        f.root_planar_velocity[:, 1],
        f.root_height,
    )
    positions = np.zeros((rows, skeleton.NUM_JOINTS, 3))
    positions[:, 1:, :] = f.joint_positions.reshape(rows, skeleton.NUM_ROTATION_JOINTS, 3)
    rotations = f.joint_rotations.reshape(rows, skeleton.NUM_ROTATION_JOINTS, 6).copy()
    bad = rotation_rows_degenerate(rotations)
    if bad.any():
        rotations[bad] = IDENTITY_ROTATION_6D
    return JointMotion(
        root_translation=traj.position,
        root_heading=traj.heading,
        joint_positions=positions,
        joint_rotations=rotations,
        fps=fps,
    )


def slice_frames(m: JointMotion, start: int, length: int) -> JointMotion:
    """Contiguous frame window [start, start + length)."""
    if length < 1 or start < 0 or start + length > m.frames:
        raise FrameRangeError(
            f"window [{start}, {start + length}) out of range for {m.frames} frames"
        )
    return JointMotion(
        root_translation=m.root_translation[start : start + length],
        root_heading=m.root_heading[start : start + length],
        joint_positions=m.joint_positions[start : start + length],
        joint_rotations=m.joint_rotations[start : start + length],
        fps=m.fps,
    )


def trim(m: JointMotion, f_target: int) -> JointMotion:
    """Keep the first ``f_target`` frames."""
    if not 1 <= f_target <= m.frames:
        raise FrameRangeError(f"f_target must be in [1, {m.frames}], got {f_target}")
    return slice_frames(m, 0, f_target)
