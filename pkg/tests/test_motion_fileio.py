import numpy as np
import pytest

from morag.errors import CorruptFileError, DataError, FormatError
from morag.motion import (
    encode_features,
    load_feature_sequence,
    load_joint_motion,
    save_feature_sequence,
    save_joint_motion,
)

from conftest import random_motion


def test_joint_motion_round_trip_bit_exact(tmp_path, rng):
    m = random_motion(rng, frames=20, quantize=True)
    path = tmp_path / "motion.momo"
    save_joint_motion(m, path)
    loaded = load_joint_motion(path)
    assert loaded.frames == m.frames
    assert loaded.fps == m.fps
    assert np.array_equal(loaded.root_translation, m.root_translation)
    assert np.array_equal(loaded.root_heading, m.root_heading)
    assert np.array_equal(loaded.joint_positions, m.joint_positions)
    assert np.array_equal(loaded.joint_rotations, m.joint_rotations)


def test_feature_sequence_round_trip(tmp_path, rng):
    m = random_motion(rng, frames=12, quantize=True)
    f = encode_features(m)
    path = tmp_path / "features.momo"
    save_feature_sequence(f, m.fps, path)
    loaded, fps = load_feature_sequence(path)
    assert fps == m.fps
    assert np.allclose(loaded.data, f.data, atol=1e-6)


def test_wrong_magic(tmp_path):
    path = tmp_path / "bad.momo"
    path.write_bytes(b"NOTMAGIC" + b"\x00" * 32)
    with pytest.raises(FormatError):
        load_joint_motion(path)


def test_truncated_payload(tmp_path, rng):
    m = random_motion(rng, frames=6)
    path = tmp_path / "motion.momo"
    save_joint_motion(m, path)
    raw = path.read_bytes()
    path.write_bytes(raw[:-10])
    with pytest.raises(CorruptFileError):
        load_joint_motion(path)


def test_too_short_for_header(tmp_path):
    path = tmp_path / "tiny.momo"
    path.write_bytes(b"MORAG")
    with pytest.raises(CorruptFileError):
        load_joint_motion(path)


def test_unsupported_version(tmp_path, rng):
    m = random_motion(rng, frames=4)
    path = tmp_path / "motion.momo"
    save_joint_motion(m, path)
    raw = bytearray(path.read_bytes())
    raw[8] = 9  # version byte
    path.write_bytes(bytes(raw))
    with pytest.raises(FormatError):
        load_joint_motion(path)


def test_width_mismatch_between_kinds(tmp_path, rng):
    m = random_motion(rng, frames=6, quantize=True)
    path = tmp_path / "motion.momo"
    save_joint_motion(m, path)
    with pytest.raises(FormatError):
        load_feature_sequence(path)


def test_fractional_fps_rejected(tmp_path, rng):
    m = random_motion(rng, frames=4, fps=12.5)
    with pytest.raises(DataError):
        save_joint_motion(m, tmp_path / "motion.momo")


def test_save_is_deterministic(tmp_path, rng):
    m = random_motion(rng, frames=10, quantize=True)
    a = tmp_path / "a.momo"
    b = tmp_path / "b.momo"
    save_joint_motion(m, a)
    save_joint_motion(m, b)
    assert a.read_bytes() == b.read_bytes()
