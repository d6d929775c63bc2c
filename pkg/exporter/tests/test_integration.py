"""Integration contract: every exported artifact must load through the
engine's own parsers and drive its CLI end-to-end."""

import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from morag_exporter.cli import main as export_main
from morag_exporter.export import part_description

morag = pytest.importorskip("morag", reason="engine package not installed")

from morag.metrics import load_feature_sets  # noqa: E402
from morag.motion import encode_features, load_joint_motion  # noqa: E402
from morag.retrieval import (  # noqa: E402
    load_database,
    load_lookup,
    normalize_text,
    read_manifest,
    read_similarity_matrix,
    read_vectors,
)

TOY_COUNT = 12


@pytest.fixture(scope="module")
def exported(tmp_path_factory):
    out = tmp_path_factory.mktemp("toy_export")
    code = export_main(["--toy", str(TOY_COUNT), "--out", str(out), "--seed", "6"])
    assert code == 0
    return out


def test_motions_parse_and_reencode(exported):
    rows = read_manifest(exported / "manifest_torso.jsonl")
    assert len(rows) == TOY_COUNT
    for record in rows:
        motion = load_joint_motion(exported / record["motion_path"])
        assert motion.frames == record["frames"]
        features = encode_features(motion)
        assert features.data.shape == (motion.frames - 1, 263)


def test_manifest_vector_alignment(exported):
    for part in ("torso", "hands", "legs"):
        rows = read_manifest(exported / f"manifest_{part}.jsonl")
        vectors = read_vectors(exported / f"vectors_{part}.f32", 256)
        assert vectors.shape == (len(rows), 256)
        assert all(r["part"] == part for r in rows)


def test_text_sims_parse(exported):
    sims = read_similarity_matrix(exported / "text_sims.f32")
    assert sims.shape == (TOY_COUNT, TOY_COUNT)
    assert np.allclose(np.diagonal(sims), 1.0, atol=1e-6)
    assert np.abs(sims - sims.T).max() <= 1e-6


def test_lookup_parses_and_covers_parts(exported):
    table = load_lookup(exported / "lookup.jsonl")
    rows = read_manifest(exported / "manifest_torso.jsonl")
    for record in rows:
        for part in ("torso", "hands", "legs"):
            key = normalize_text(part_description(part, record["text"]))
            assert key in table
            assert table[key].shape == (256,)


def test_eval_features_parse(exported):
    sets = load_feature_sets(exported / f"eval_features_test.npz")
    assert sets["text"].shape == sets["motion"].shape
    assert sets["mm_groups"].ndim == 3


def _run_engine_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "morag.cli", *argv],
        capture_output=True,
        text=True,
    )


def test_engine_cli_builds_and_retrieves(exported, tmp_path):
    """Drive the engine's external surface: build-db, retrieve, eval."""
    for part in ("torso", "hands", "legs"):
        result = _run_engine_cli(
            "build-db",
            "--manifest", str(exported / f"manifest_{part}.jsonl"),
            "--vectors", str(exported / f"vectors_{part}.f32"),
            "--part", part,
            "--out", str(tmp_path / f"{part}.db"),
        )
        assert result.returncode == 0, result.stderr
        assert f"{TOY_COUNT} entries" in result.stdout

    # retrieval coherence: querying with a stored annotation's embedding must
    # surface motions carrying that annotation (several toy motions share a
    # text; duplicates rank together, so assert on the text, not one id)
    db = load_database(tmp_path / "hands.db")
    lookup = load_lookup(exported / "lookup.jsonl")
    rows = read_manifest(exported / "manifest_hands.jsonl")
    target = rows[3]
    same_text_ids = {r["id"] for r in rows if r["text"] == target["text"]}
    key = normalize_text(part_description("hands", target["text"]))
    result = db.query(lookup[key].astype(np.float64), len(same_text_ids))
    assert result.items[0].source_text == target["text"]
    assert {item.id for item in result.items} == same_text_ids

    eval_result = _run_engine_cli(
        "eval", "--features", str(exported / "eval_features_test.npz"),
        "--pool-size", str(TOY_COUNT),
    )
    assert eval_result.returncode == 0, eval_result.stderr
    report = json.loads(eval_result.stdout.strip().splitlines()[-1])
    assert report["fid"] is not None
    assert report["mm_dist"] > 0


DATASET_ROOT = os.environ.get("MORAG_DATASET_ROOT", "")
CHECKPOINTS = os.environ.get("MORAG_CHECKPOINTS", "")


@pytest.mark.skipif(
    not (DATASET_ROOT and Path(DATASET_ROOT).exists() and CHECKPOINTS),
    reason="real dataset and released checkpoints not available",
)
def test_real_data_hands_spot_check(tmp_path):
    """With the real dataset and encoder checkpoints: retrieval for the
    standing-and-raising-both-hands description must rank 002315 first."""
    raise NotImplementedError(
        "wire the released part-specific checkpoints through the encoder "
        "interface, export the hands split, and assert id 002315 at rank 1"
    )
