"""Loader for datasets stored as per-motion 263-dim feature files.

Expected layout under the dataset root: ``new_joint_vecs/<id>.npy`` holding
(frames, 263) arrays in the canonical ordering [root(4) | positions(63) |
rotations(126) | velocities(66) | contacts(4)], ``texts/<id>.txt`` with one
caption per line (caption before the first ``#``), and ``<split>.txt`` listing
the ids of a split. Mirror-augmented ids start with ``M`` and record their
source id.

Feature rows are converted to skeletal motions by re-integrating the root
velocities from the origin; positions and rotations copy across. The stored
rotation ordering differs from the engine's feature layout (rotations before
velocities), so slices are remapped here.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .toy import ToyMotion

log = logging.getLogger("morag_exporter")

NUM_JOINTS = 22
DEFAULT_FPS = 20.0

_ROOT = slice(0, 4)
_POS = slice(4, 4 + 63)
_ROT = slice(67, 67 + 126)
_VEL = slice(193, 193 + 66)


def _integrate_root(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    frames = rows.shape[0]
    r_a, r_x, r_z, r_y = rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]
    heading = np.zeros(frames)
    heading[1:] = np.cumsum(r_a[:-1])
    cos, sin = np.cos(heading[:-1]), np.sin(heading[:-1])
    step_x = cos * r_x[:-1] + sin * r_z[:-1]
    step_z = -sin * r_x[:-1] + cos * r_z[:-1]
    position = np.zeros((frames, 3))
    position[1:, 0] = np.cumsum(step_x)
    position[1:, 2] = np.cumsum(step_z)
    position[:, 1] = r_y
    return heading, position


def features_to_motion(ident: str, text: str, rows: np.ndarray, fps: float = DEFAULT_FPS) -> ToyMotion:
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] != 263:
        raise ValueError(f"{ident}: expected (frames, 263), got {rows.shape}")
    frames = rows.shape[0]
    heading, position = _integrate_root(rows)
    positions = np.zeros((frames, NUM_JOINTS, 3))
    positions[:, 1:, :] = rows[:, _POS].reshape(frames, NUM_JOINTS - 1, 3)
    rotations = rows[:, _ROT].reshape(frames, NUM_JOINTS - 1, 6)
    return ToyMotion(
        id=ident,
        text=text,
        fps=fps,
        root_translation=position,
        root_heading=heading,
        joint_positions=positions,
        joint_rotations=rotations,
        source_id=ident[1:] if ident.startswith("M") else "",
    )


@dataclass
class DatasetLayout:
    root: Path

    @property
    def vectors_dir(self) -> Path:
        return self.root / "new_joint_vecs"

    @property
    def texts_dir(self) -> Path:
        return self.root / "texts"

    def split_ids(self, split: str) -> list[str]:
        path = self.root / f"{split}.txt"
        if not path.exists():
            raise FileNotFoundError(f"split list not found: {path}")
        return [line.strip() for line in path.read_text().splitlines() if line.strip()]

    def caption(self, ident: str) -> str:
        path = self.texts_dir / f"{ident}.txt"
        first = path.read_text(encoding="utf-8").splitlines()[0]
        return first.split("#")[0].strip()


def load_split(root, split: str, limit: int | None = None) -> list[ToyMotion]:
    """Load a split, skipping (and logging) missing or corrupt motions."""
    layout = DatasetLayout(Path(root))
    motions = []
    ids = layout.split_ids(split)
    if limit is not None:
        ids = ids[:limit]
    for ident in ids:
        try:
            rows = np.load(layout.vectors_dir / f"{ident}.npy")
            text = layout.caption(ident)
            motions.append(features_to_motion(ident, text, rows))
        except (OSError, ValueError, IndexError) as exc:
            log.warning("skipping %s: %s", ident, exc)
    return motions
