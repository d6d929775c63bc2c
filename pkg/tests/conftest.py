import numpy as np
import pytest

from morag.motion import JointMotion
from morag.retrieval import DatabaseEntry, build


def random_rotations(rng, shape):
    """Random non-degenerate 6D rotation rows."""
    a = rng.normal(0.0, 1.0, shape + (3,))
    b = rng.normal(0.0, 1.0, shape + (3,))
    rows = np.concatenate([a, b], axis=-1)
    return rows


def random_motion(rng, frames=None, fps=20.0, quantize=False):
    """A valid random motion: smooth-ish root walk plus random pose."""
    frames = frames if frames is not None else int(rng.integers(2, 61))
    heading = np.cumsum(rng.normal(0.0, 0.15, frames))
    translation = np.cumsum(rng.normal(0.0, 0.05, (frames, 3)), axis=0)
    translation[:, 1] = 0.9 + rng.normal(0.0, 0.02, frames)
    positions = rng.normal(0.0, 0.5, (frames, 22, 3))
    positions[:, 0, :] = 0.0
    rotations = random_rotations(rng, (frames, 21))
    if quantize:
        heading = heading.astype(np.float32).astype(np.float64)
        translation = translation.astype(np.float32).astype(np.float64)
        positions = positions.astype(np.float32).astype(np.float64)
        rotations = rotations.astype(np.float32).astype(np.float64)
        positions[:, 0, :] = 0.0
    return JointMotion(
        root_translation=translation,
        root_heading=heading,
        joint_positions=positions,
        joint_rotations=rotations,
        fps=fps,
    )


def stationary_motion(frames=10, fps=20.0, height=0.9):
    rng = np.random.default_rng(123)
    positions = np.tile(rng.normal(0.0, 0.4, (1, 22, 3)), (frames, 1, 1))
    positions[:, 0, :] = 0.0
    rotations = np.tile(random_rotations(rng, (1, 21)), (frames, 1, 1))
    translation = np.zeros((frames, 3))
    translation[:, 1] = height
    return JointMotion(
        root_translation=translation,
        root_heading=np.zeros(frames),
        joint_positions=positions,
        joint_rotations=rotations,
        fps=fps,
    )


def make_entries(rng, part, count, dim=256, prefix=""):
    vecs = rng.normal(0.0, 1.0, (count, dim)).astype(np.float32)
    return [
        DatabaseEntry(
            id=f"{prefix}{i:06d}",
            part=part,
            embedding=vecs[i],
            motion_ref=f"motions/{prefix}{i:06d}.momo",
            length=int(rng.integers(20, 120)),
            source_text=f"sample motion {i}",
        )
        for i in range(count)
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def small_db(rng):
    return build("hands", make_entries(rng, "hands", 16))
