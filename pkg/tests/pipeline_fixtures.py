"""Deterministic end-to-end workspace used by service, CLI, and golden tests.

Builds, under a root directory: motion files, per-part manifests and vector
tables, built databases, a description-embedding lookup covering the canned
part descriptions, a pre-populated completion cache, an eval feature archive,
a training pairs archive, and a config file tying it together. Everything is
derived from fixed seeds so rebuilding yields byte-identical artifacts.
"""

import json
from pathlib import Path

import numpy as np

from morag.config import load_config
from morag.motion import save_joint_motion
from morag.prompts import DEFAULT_TEMPLATE, PromptCache
from morag.prompts.describe import cache_key
from morag.retrieval import (
    DatabaseEntry,
    build,
    normalize_text,
    save_database,
    save_lookup,
    write_manifest,
    write_vectors,
)

from conftest import random_motion

INPUT_TEXT = "A person is standing and raising both hands"

COMPLETION = (
    "1) Torso: The person's torso is upright and still, while standing tall "
    "and balanced.\n"
    "2) Hands: The person's hands are being lifted up towards the sky, using "
    "their arms to extend upwards.\n"
    "3) Legs: The legs are steady and stable, acting as a strong foundation "
    "to support the body as the arms raise up."
)

PART_TEXTS = {
    "torso": "The person's torso is upright and still, while standing tall "
    "and balanced.",
    "hands": "The person's hands are being lifted up towards the sky, using "
    "their arms to extend upwards.",
    "legs": "The legs are steady and stable, acting as a strong foundation "
    "to support the body as the arms raise up.",
}

DB_SIZES = {"torso": 6, "hands": 7, "legs": 5}
HANDS_STAR_ID = "002315"


def _query_vector(part: str) -> np.ndarray:
    rng = np.random.default_rng(abs(hash_part(part)))
    return rng.normal(0.0, 1.0, 256).astype(np.float32)


def hash_part(part: str) -> int:
    return {"torso": 101, "hands": 202, "legs": 303}[part]


def build_workspace(root, relative_paths: bool = False) -> dict:
    """With ``relative_paths`` the artifacts reference each other relative to
    the root (run commands with the root as working directory); outputs are
    then byte-stable across machines, which the golden tests rely on."""
    root = Path(root)
    motions_dir = root / "motions"
    motions_dir.mkdir(parents=True, exist_ok=True)

    def ref(path: Path) -> str:
        return str(path.relative_to(root)) if relative_paths else str(path)

    rng = np.random.default_rng(7)
    paths = {"root": root, "dbs": {}, "manifests": {}, "vectors": {}}

    lookup = {PART_TEXTS[p]: _query_vector(p) for p in PART_TEXTS}

    for part, size in DB_SIZES.items():
        entries = []
        for i in range(size):
            ident = f"{part[0]}{i:05d}"
            if part == "hands" and i == 2:
                ident = HANDS_STAR_ID
            frames = int(rng.integers(30, 70))
            motion = random_motion(
                np.random.default_rng(1000 * hash_part(part) + i),
                frames=frames,
                quantize=True,
            )
            motion_path = motions_dir / f"{ident}.momo"
            save_joint_motion(motion, motion_path)
            embedding = rng.normal(0.0, 1.0, 256).astype(np.float32)
            if ident == HANDS_STAR_ID:
                # plant the top match for the canned hands description
                embedding = (_query_vector("hands") * 3.0).astype(np.float32)
            entries.append(
                DatabaseEntry(
                    id=ident,
                    part=part,
                    embedding=embedding,
                    motion_ref=ref(motion_path),
                    length=frames,
                    source_text=f"annotated {part} motion {i}",
                )
            )
        db = build(part, entries)
        db_path = root / f"{part}.db"
        save_database(db, db_path)
        manifest_path = root / f"{part}_manifest.jsonl"
        write_manifest(db, manifest_path)
        vectors_path = root / f"{part}_vectors.f32"
        write_vectors(np.stack([e.embedding for e in entries]), vectors_path)
        paths["dbs"][part] = db_path
        paths["manifests"][part] = manifest_path
        paths["vectors"][part] = vectors_path

    lookup_path = root / "lookup.jsonl"
    save_lookup(lookup, lookup_path)
    paths["lookup"] = lookup_path

    cache_path = root / "cache.jsonl"
    cache = PromptCache(cache_path)
    cache.put(cache_key(INPUT_TEXT, DEFAULT_TEMPLATE), "prompt", COMPLETION)
    # strip the timestamp for byte stability of the fixture itself
    record = json.loads(cache_path.read_text().splitlines()[0])
    record["timestamp"] = 0.0
    cache_path.write_text(json.dumps(record, sort_keys=True) + "\n")
    paths["cache"] = cache_path

    eval_rng = np.random.default_rng(17)
    text_feats = eval_rng.normal(0.0, 1.0, (48, 32)).astype(np.float32)
    motion_feats = (text_feats + eval_rng.normal(0.0, 0.3, (48, 32))).astype(np.float32)
    real_feats = eval_rng.normal(0.0, 1.0, (48, 32)).astype(np.float32)
    mm_groups = eval_rng.normal(0.0, 1.0, (3, 24, 32)).astype(np.float32)
    eval_path = root / "eval_features.npz"
    np.savez(eval_path, text=text_feats, motion=motion_feats, real=real_feats, mm_groups=mm_groups)
    paths["eval"] = eval_path

    pair_rng = np.random.default_rng(23)
    xt = pair_rng.normal(0.0, 1.0, (8, 16))
    transform = pair_rng.normal(0.0, 1.0, (16, 16)) / 4.0
    pairs_path = root / "train_pairs.npz"
    np.savez(pairs_path, text=xt, motion=xt @ transform)
    paths["pairs"] = pairs_path

    config_path = root / "engine.cfg"
    config_path.write_text(
        "\n".join(
            [
                f"db.torso = {ref(paths['dbs']['torso'])}",
                f"db.hands = {ref(paths['dbs']['hands'])}",
                f"db.legs = {ref(paths['dbs']['legs'])}",
                f"llm.cache = {ref(cache_path)}",
                f"embeddings.lookup = {ref(lookup_path)}",
                "metrics.seed = 7",
                "metrics.subset_size = 12",
                "metrics.pool_size = 16",
                "compose.k = 3",
                "",
            ]
        )
    )
    paths["config"] = config_path
    return paths


def load_workspace_config(paths):
    return load_config(paths["config"])
