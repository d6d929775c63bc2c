"""Rank-by-rank fusion of retrieved part motions into full-body sequences.

Fusion is a hard per-joint selection: after trimming the three sources to the
shortest length, every joint's positions and rotations are copied bit-for-bit
from the source that owns the joint, and the global root trajectory comes from
the legs source. No blending or smoothing is applied at part boundaries.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import (
    EmptySourceError,
    IncompatibleSourcesError,
    LoadError,
    UsageError,
)
from ..motion.codec import slice_frames
from ..motion.fileio import save_joint_motion
from ..motion.types import JointMotion
from ..skeleton import NUM_JOINTS, PARTS
from .partition import JointPartition, default_partition

_FPS_RTOL = 1e-6


@dataclass(frozen=True)
class Provenance:
    torso_id: str
    hands_id: str
    legs_id: str
    f_min: int
    rank: int = 1

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "torso_id": self.torso_id,
            "hands_id": self.hands_id,
            "legs_id": self.legs_id,
            "f_min": self.f_min,
        }


@dataclass(frozen=True)
class ComposedMotion:
    motion: JointMotion
    provenance: Provenance


def _trim_to(m: JointMotion, f_min: int, mode: str) -> JointMotion:
    if mode == "prefix":
        start = 0
    elif mode == "center":
        start = (m.frames - f_min) // 2
    else:
        raise UsageError(f"unknown trim mode {mode!r}")
    return slice_frames(m, start, f_min)


def compose(
    r_torso: JointMotion,
    r_hands: JointMotion,
    r_legs: JointMotion,
    partition: JointPartition | None = None,
    *,
    trim_mode: str = "prefix",
    torso_id: str = "torso",
    hands_id: str = "hands",
    legs_id: str = "legs",
    rank: int = 1,
) -> ComposedMotion:
    """Fuse three retrieved motions into one full-body sequence.

    Joint ownership follows the partition; the root translation and heading
    are taken unchanged from the legs source.
    """
    partition = partition or default_partition()
    sources = {"torso": r_torso, "hands": r_hands, "legs": r_legs}
    for part, m in sources.items():
        if m.frames < 1:
            raise EmptySourceError(f"{part} source has no frames")
    fps_values = [m.fps for m in sources.values()]
    base = fps_values[0]
    if any(abs(v - base) > _FPS_RTOL * max(base, v) for v in fps_values[1:]):
        raise IncompatibleSourcesError(f"source fps differ: {fps_values}")

    f_min = min(m.frames for m in sources.values())
    trimmed = {p: _trim_to(m, f_min, trim_mode) for p, m in sources.items()}

    positions = np.empty((f_min, NUM_JOINTS, 3))
    rotations = np.empty((f_min, NUM_JOINTS - 1, 6))
    for part in PARTS:
        idx = partition.indices(part)
        positions[:, idx, :] = trimmed[part].joint_positions[:, idx, :]
        rot_idx = idx[idx >= 1] - 1
        rotations[:, rot_idx, :] = trimmed[part].joint_rotations[:, rot_idx, :]

    legs = trimmed["legs"]
    motion = JointMotion(
        root_translation=legs.root_translation,
        root_heading=legs.root_heading,
        joint_positions=positions,
        joint_rotations=rotations,
        fps=legs.fps,
    )
    return ComposedMotion(
        motion=motion,
        provenance=Provenance(
            torso_id=torso_id,
            hands_id=hands_id,
            legs_id=legs_id,
            f_min=f_min,
            rank=rank,
        ),
    )


def compose_topk(
    results: dict,
    k: int,
    partition: JointPartition | None = None,
    loader=None,
    *,
    trim_mode: str = "prefix",
) -> list[ComposedMotion]:
    """Rank-by-rank combination: the i-th ranked motion of each part forms
    the i-th composition. ``loader`` maps a motion_ref to a JointMotion."""
    if k < 1:
        raise UsageError(f"k must be >= 1, got {k}")
    if loader is None:
        raise UsageError("compose_topk requires a motion loader")
    for part in PARTS:
        if part not in results or not results[part].items:
            raise EmptySourceError(f"no retrieval results for part {part!r}")
    count = min(k, min(len(results[p].items) for p in PARTS))
    composed = []
    for i in range(count):
        motions = {}
        for part in PARTS:
            item = results[part].items[i]
            try:
                motions[part] = loader(item.motion_ref)
            except Exception as exc:
                raise LoadError(
                    f"failed to load motion {item.id!r} ({item.motion_ref}): {exc}"
                ) from exc
        composed.append(
            compose(
                motions["torso"],
                motions["hands"],
                motions["legs"],
                partition,
                trim_mode=trim_mode,
                torso_id=results["torso"].items[i].id,
                hands_id=results["hands"].items[i].id,
                legs_id=results["legs"].items[i].id,
                rank=i + 1,
            )
        )
    return composed


def export_composed(cm: ComposedMotion, out_dir, stem: str) -> tuple[Path, Path]:
    """Write the motion file and its provenance sidecar; returns both paths."""
    out = Path(out_dir)
    motion_path = out / f"{stem}.momo"
    sidecar_path = out / f"{stem}.provenance.json"
    save_joint_motion(cm.motion, motion_path)
    sidecar_path.write_text(
        json.dumps(cm.provenance.to_dict(), sort_keys=True, separators=(",", ":"))
        + "\n",
        encoding="utf-8",
    )
    return motion_path, sidecar_path
