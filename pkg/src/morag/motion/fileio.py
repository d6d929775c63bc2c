"""MORAGMO1 binary motion files.

Layout: 8-byte magic ``MORAGMO1``, little-endian u32 version (=1), u32 frames,
u32 width, u32 fps, then ``frames * width`` little-endian float32 values,
row-major. Width 263 stores a feature matrix; width 196 stores a joint motion
as rows of [root_translation(3), root_heading(1), joint_positions(66),
joint_rotations(126)].
"""

import struct
from pathlib import Path

import numpy as np

from .. import skeleton
from ..errors import CorruptFileError, DataError, FormatError
from .types import FeatureSequence, JointMotion

MAGIC = b"MORAGMO1"
VERSION = 1
_HEADER = struct.Struct("<IIII")  # version, frames, width, fps


def _check_fps(fps: float) -> int:
    rounded = round(fps)
    if abs(fps - rounded) > 1e-9 or rounded <= 0:
        raise DataError(f"file format stores integral fps, got {fps}")
    return int(rounded)


def _write(path, frames: int, width: int, fps: int, data: np.ndarray) -> None:
    payload = np.ascontiguousarray(data, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_HEADER.pack(VERSION, frames, width, fps))
        fh.write(payload.tobytes())


def _read(path) -> tuple[int, int, int, np.ndarray]:
    raw = Path(path).read_bytes()
    if len(raw) < len(MAGIC) + _HEADER.size:
        raise CorruptFileError(f"{path}: file shorter than header")
    if raw[: len(MAGIC)] != MAGIC:
        raise FormatError(f"{path}: bad magic {raw[:len(MAGIC)]!r}")
    version, frames, width, fps = _HEADER.unpack_from(raw, len(MAGIC))
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    body = raw[len(MAGIC) + _HEADER.size :]
    expected = frames * width * 4
    if len(body) != expected:
        raise CorruptFileError(
            f"{path}: expected {expected} payload bytes, found {len(body)}"
        )
    data = np.frombuffer(body, dtype="<f4").reshape(frames, width).astype(np.float64)
    return frames, width, fps, data


def save_joint_motion(m: JointMotion, path) -> None:
    rows = np.concatenate(
        [
            m.root_translation,
            m.root_heading[:, None],
            m.joint_positions.reshape(m.frames, -1),
            m.joint_rotations.reshape(m.frames, -1),
        ],
        axis=1,
    )
    _write(path, m.frames, skeleton.JOINT_MOTION_WIDTH, _check_fps(m.fps), rows)


def load_joint_motion(path) -> JointMotion:
    frames, width, fps, data = _read(path)
    if width != skeleton.JOINT_MOTION_WIDTH:
        raise FormatError(
            f"{path}: width {width} is not a joint motion "
            f"(expected {skeleton.JOINT_MOTION_WIDTH})"
        )
    n = skeleton.NUM_JOINTS
    return JointMotion(
        root_translation=data[:, 0:3],
        root_heading=data[:, 3],
        joint_positions=data[:, 4 : 4 + n * 3].reshape(frames, n, 3),
        joint_rotations=data[:, 4 + n * 3 :].reshape(frames, n - 1, 6),
        fps=float(fps),
    )


def save_feature_sequence(f: FeatureSequence, fps: float, path) -> None:
    _write(path, f.frames, skeleton.FEATURE_WIDTH, _check_fps(fps), f.data)


def load_feature_sequence(path) -> tuple[FeatureSequence, float]:
    frames, width, fps, data = _read(path)
    if width != skeleton.FEATURE_WIDTH:
        raise FormatError(
            f"{path}: width {width} is not a feature sequence "
            f"(expected {skeleton.FEATURE_WIDTH})"
        )
    return FeatureSequence(data), float(fps)
