"""Writers for the engine's on-disk formats.

MORAGMO1 joint motion: 8-byte magic, little-endian u32 version (=1), u32
frames, u32 width (=196), u32 fps, then rows of [root_translation(3),
root_heading(1), joint_positions(22*3), joint_rotations(21*6)] as float32.

Manifests are JSONL {id, part, frames, text, motion_path} (extra keys such as
source_id are permitted). Vector tables and similarity matrices are raw
little-endian float32, row-major. Lookups are JSONL {text, embedding} keyed by
lower-cased, whitespace-collapsed text.
"""

import json
import struct

import numpy as np

MOTION_MAGIC = b"MORAGMO1"
VERSION = 1
NUM_JOINTS = 22
JOINT_MOTION_WIDTH = 3 + 1 + NUM_JOINTS * 3 + (NUM_JOINTS - 1) * 6


def normalize_text(text: str) -> str:
    return " ".join(text.lower().split())


def write_joint_motion(path, root_translation, root_heading, joint_positions, joint_rotations, fps):
    frames = root_translation.shape[0]
    rows = np.concatenate(
        [
            np.asarray(root_translation, dtype=np.float64),
            np.asarray(root_heading, dtype=np.float64)[:, None],
            np.asarray(joint_positions, dtype=np.float64).reshape(frames, -1),
            np.asarray(joint_rotations, dtype=np.float64).reshape(frames, -1),
        ],
        axis=1,
    )
    if rows.shape[1] != JOINT_MOTION_WIDTH:
        raise ValueError(f"joint motion rows must be {JOINT_MOTION_WIDTH} wide, got {rows.shape[1]}")
    with open(path, "wb") as fh:
        fh.write(MOTION_MAGIC)
        fh.write(struct.pack("<IIII", VERSION, frames, rows.shape[1], int(round(fps))))
        fh.write(np.ascontiguousarray(rows, dtype="<f4").tobytes())


def write_manifest(records, path):
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def write_vectors(vectors, path):
    arr = np.ascontiguousarray(vectors, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(arr.tobytes())


def write_similarity_matrix(sims, path):
    arr = np.ascontiguousarray(sims, dtype="<f4")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"similarity matrix must be square, got {arr.shape}")
    with open(path, "wb") as fh:
        fh.write(arr.tobytes())


def write_lookup(table, path):
    with open(path, "w", encoding="utf-8") as fh:
        for text, vec in table.items():
            record = {
                "text": normalize_text(text),
                "embedding": [float(x) for x in np.asarray(vec, dtype=np.float32)],
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")
