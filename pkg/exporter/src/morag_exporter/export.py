"""Export orchestration: motions, embedding tables, lookups, similarities,
and evaluation feature sets, all aligned through one manifest ordering."""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .encoders import EMBEDDING_DIM, hash_embed, make_motion_encoder, make_text_encoder
from .formats import (
    write_joint_motion,
    write_lookup,
    write_manifest,
    write_similarity_matrix,
    write_vectors,
)
from .toy import ToyMotion

PARTS = ("torso", "hands", "legs")

_PART_PHRASES = {
    "torso": "the torso during",
    "hands": "the hands during",
    "legs": "the legs during",
}


@dataclass
class ExportManifest:
    """What to export and where."""

    out_dir: Path
    split: str = "test"
    dataset_root: Path | None = None
    encoder: str = "hash"
    dim: int = EMBEDDING_DIM
    checkpoints: dict = field(default_factory=dict)  # part -> checkpoint ref

    def __post_init__(self):
        if self.split not in ("train", "val", "test"):
            raise ValueError(f"split must be train/val/test, got {self.split!r}")
        self.out_dir = Path(self.out_dir)


def part_description(part: str, text: str) -> str:
    """Deterministic per-part annotation used by the hash encoders."""
    return f"{_PART_PHRASES[part]} {text}"


def export_motions(manifest: ExportManifest, motions: list[ToyMotion]) -> list[dict]:
    """One motion file per id; returns the part-agnostic catalog records.

    Each part's manifest is written by :func:`export_embeddings` with the part
    tag filled in, so the same motions appear once per part table.
    """
    motions_dir = manifest.out_dir / "motions"
    motions_dir.mkdir(parents=True, exist_ok=True)
    records = []
    for m in motions:
        rel = f"motions/{m.id}.momo"
        write_joint_motion(
            manifest.out_dir / rel,
            m.root_translation,
            m.root_heading,
            m.joint_positions,
            m.joint_rotations,
            m.fps,
        )
        record = {
            "id": m.id,
            "frames": int(m.frames),
            "text": m.text,
            "motion_path": rel,
        }
        if m.source_id:
            record["source_id"] = m.source_id
        records.append(record)
    return records


def export_embeddings(manifest: ExportManifest, motions, records, part: str) -> Path:
    """Vectors file for one part, row-aligned with the manifest records."""
    encoder = make_motion_encoder(manifest.encoder, manifest.dim)
    vectors = np.stack(
        [encoder(m.id, part_description(part, m.text)) for m in motions]
    )
    part_records = [dict(r, part=part) for r in records]
    write_manifest(part_records, manifest.out_dir / f"manifest_{part}.jsonl")
    path = manifest.out_dir / f"vectors_{part}.f32"
    write_vectors(vectors, path)
    return path


def export_lookup(manifest: ExportManifest, motions) -> Path:
    """Description-embedding lookup covering every per-part annotation."""
    encoder = make_text_encoder(manifest.encoder, manifest.dim)
    table = {}
    for m in motions:
        for part in PARTS:
            text = part_description(part, m.text)
            table[text] = encoder(text)
    path = manifest.out_dir / "lookup.jsonl"
    write_lookup(table, path)
    return path


def export_text_sims(manifest: ExportManifest, texts) -> tuple[Path, list]:
    """Pairwise cosine similarities of annotation embeddings.

    Off-diagonal pairs above the wrong-negative threshold (0.8) are returned
    and recorded in the summary so they can be reviewed before training.
    """
    embs = np.stack([hash_embed(t, manifest.dim).astype(np.float64) for t in texts])
    unit = embs / np.linalg.norm(embs, axis=1, keepdims=True)
    sims = unit @ unit.T
    sims = (sims + sims.T) / 2.0
    np.fill_diagonal(sims, 1.0)
    path = manifest.out_dir / "text_sims.f32"
    write_similarity_matrix(sims, path)
    flagged = [
        {"i": int(i), "j": int(j), "similarity": float(sims[i, j])}
        for i, j in np.argwhere(np.triu(sims, k=1) > 0.8)
    ]
    return path, flagged


def export_eval_features(manifest: ExportManifest, motions, seed: int = 0) -> Path:
    """Paired text/motion features plus a reference set and per-text groups."""
    n = len(motions)
    text_feats = np.stack([hash_embed(m.text, 64) for m in motions])
    rng = np.random.default_rng(seed)
    motion_feats = (text_feats + 0.2 * rng.normal(0, 1, text_feats.shape)).astype(
        np.float32
    )
    real_feats = (text_feats + 0.2 * rng.normal(0, 1, text_feats.shape)).astype(
        np.float32
    )
    group_count = min(4, n)
    mm_groups = np.stack(
        [
            np.stack(
                [
                    text_feats[g] + 0.3 * rng.normal(0, 1, 64).astype(np.float32)
                    for _ in range(20)
                ]
            )
            for g in range(group_count)
        ]
    ).astype(np.float32)
    path = manifest.out_dir / f"eval_features_{manifest.split}.npz"
    np.savez(path, text=text_feats, motion=motion_feats, real=real_feats, mm_groups=mm_groups)
    return path


def run_export(
    manifest: ExportManifest,
    motions: list[ToyMotion],
    seed: int = 0,
    parts=PARTS,
) -> dict:
    """Full export; returns a summary dict (also written as summary.json)."""
    manifest.out_dir.mkdir(parents=True, exist_ok=True)
    records = export_motions(manifest, motions)
    vector_paths = {
        part: str(export_embeddings(manifest, motions, records, part))
        for part in parts
    }
    lookup_path = export_lookup(manifest, motions)
    sims_path, flagged = export_text_sims(manifest, [m.text for m in motions])
    eval_path = export_eval_features(manifest, motions, seed=seed)
    summary = {
        "split": manifest.split,
        "count": len(motions),
        "dim": manifest.dim,
        "manifests": {p: f"manifest_{p}.jsonl" for p in parts},
        "vectors": {p: Path(v).name for p, v in vector_paths.items()},
        "lookup": lookup_path.name,
        "text_sims": sims_path.name,
        "eval_features": eval_path.name,
        "wrong_negative_pairs": flagged,
    }
    (manifest.out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return summary
