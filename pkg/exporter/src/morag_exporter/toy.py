"""Deterministic synthetic dataset for exercising the export pipeline.

Generates smooth random-walk motions over the 22-joint skeleton with simple
templated annotations. Optionally emits a left/right mirrored variant per
motion under an ``M``-prefixed id sharing the original's source id, matching
how mirror-augmented datasets are organized.
"""

from dataclasses import dataclass

import numpy as np

NUM_JOINTS = 22

# left/right joint pairs in the 22-joint skeleton
_MIRROR_PAIRS = ((1, 2), (4, 5), (7, 8), (10, 11), (13, 14), (16, 17), (18, 19), (20, 21))

_ACTIONS = (
    "a person walks forward slowly",
    "a person raises both hands above the head",
    "a person sits down and stands back up",
    "a person kicks with the right leg",
    "a person waves with the left hand",
    "a person turns around in place",
    "a person jumps twice",
    "a person bends down to pick something up",
)


@dataclass
class ToyMotion:
    id: str
    text: str
    fps: float
    root_translation: np.ndarray
    root_heading: np.ndarray
    joint_positions: np.ndarray
    joint_rotations: np.ndarray
    source_id: str = ""

    @property
    def frames(self) -> int:
        return self.root_translation.shape[0]


def _random_rotations(rng, frames):
    a = rng.normal(0.0, 1.0, (frames, NUM_JOINTS - 1, 3))
    b = rng.normal(0.0, 1.0, (frames, NUM_JOINTS - 1, 3))
    return np.concatenate([a, b], axis=-1)


def make_motion(ident: str, text: str, rng, fps: float = 20.0) -> ToyMotion:
    frames = int(rng.integers(24, 80))
    heading = np.cumsum(rng.normal(0.0, 0.1, frames))
    translation = np.cumsum(rng.normal(0.0, 0.04, (frames, 3)), axis=0)
    translation[:, 1] = 0.9 + 0.05 * np.sin(np.linspace(0, 4 * np.pi, frames))
    positions = rng.normal(0.0, 0.45, (frames, NUM_JOINTS, 3))
    positions[:, 0, :] = 0.0
    return ToyMotion(
        id=ident,
        text=text,
        fps=fps,
        root_translation=translation,
        root_heading=heading,
        joint_positions=positions,
        joint_rotations=_random_rotations(rng, frames),
    )


def mirror_motion(m: ToyMotion) -> ToyMotion:
    """Left/right reflection about the YZ plane with joint relabelling."""
    positions = m.joint_positions.copy()
    rotations = m.joint_rotations.copy()
    for left, right in _MIRROR_PAIRS:
        positions[:, [left, right]] = positions[:, [right, left]]
        rotations[:, [left - 1, right - 1]] = rotations[:, [right - 1, left - 1]]
    positions[:, :, 0] *= -1.0
    translation = m.root_translation.copy()
    translation[:, 0] *= -1.0
    # reflect each 6D rotation: first column negates y/z, second negates x
    rotations[:, :, 1] *= -1.0
    rotations[:, :, 2] *= -1.0
    rotations[:, :, 3] *= -1.0
    text = (
        m.text.replace("left", "\x00").replace("right", "left").replace("\x00", "right")
    )
    return ToyMotion(
        id="M" + m.id,
        text=text,
        fps=m.fps,
        root_translation=translation,
        root_heading=-m.root_heading,
        joint_positions=positions,
        joint_rotations=rotations,
        source_id=m.id,
    )


def generate(count: int, seed: int = 0, mirror: bool = False) -> list[ToyMotion]:
    rng = np.random.default_rng(seed)
    motions = []
    for i in range(count):
        text = _ACTIONS[i % len(_ACTIONS)]
        motions.append(make_motion(f"{i:06d}", text, rng))
    if mirror:
        motions.extend([mirror_motion(m) for m in list(motions)])
    return motions
