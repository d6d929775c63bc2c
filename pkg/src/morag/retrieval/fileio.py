"""On-disk formats for databases, manifests, vector tables, and text lookups.

MORAGDB1 layout: 8-byte magic, u32 version (=1), u8 part tag (0=torso,
1=hands, 2=legs), u32 dim, u32 count; then per record u16 id length + UTF-8
id, u32 frame length, u16 path length + UTF-8 motion path, u16 text length +
UTF-8 source text, and ``dim`` little-endian float32 embedding values.

Manifests are JSONL with one object per line: {id, part, frames, text,
motion_path}. Vector tables are raw little-endian float32, row-major, with the
row count implied by the file size. Description-embedding lookups are JSONL
{text, embedding} keyed by whitespace/case-normalized text.
"""

import json
import struct
from pathlib import Path

import numpy as np

from ..errors import CorruptFileError, DataError, FormatError, IoError
from ..skeleton import PARTS
from .database import DatabaseEntry, PartDatabase

MAGIC = b"MORAGDB1"
VERSION = 1

PART_TAGS = {"torso": 0, "hands": 1, "legs": 2}
TAG_PARTS = {v: k for k, v in PART_TAGS.items()}


def normalize_text(text: str) -> str:
    """Canonical lookup key: lowercase with collapsed whitespace."""
    return " ".join(text.lower().split())


def save_database(db: PartDatabase, path) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IBII", VERSION, PART_TAGS[db.part], db.dim, len(db)))
        for e in db.entries:
            ident = e.id.encode("utf-8")
            ref = e.motion_ref.encode("utf-8")
            text = e.source_text.encode("utf-8")
            fh.write(struct.pack("<H", len(ident)))
            fh.write(ident)
            fh.write(struct.pack("<I", e.length))
            fh.write(struct.pack("<H", len(ref)))
            fh.write(ref)
            fh.write(struct.pack("<H", len(text)))
            fh.write(text)
            fh.write(np.ascontiguousarray(e.embedding, dtype="<f4").tobytes())


class _Reader:
    def __init__(self, raw: bytes, path):
        self.raw = raw
        self.pos = 0
        self.path = path

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.raw):
            raise CorruptFileError(f"{self.path}: truncated record data")
        chunk = self.raw[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        size = struct.calcsize(fmt)
        return struct.unpack(fmt, self.take(size))


def load_database(path) -> PartDatabase:
    raw = Path(path).read_bytes()
    if len(raw) < len(MAGIC) + struct.calcsize("<IBII"):
        raise CorruptFileError(f"{path}: file shorter than header")
    if raw[: len(MAGIC)] != MAGIC:
        raise FormatError(f"{path}: bad magic {raw[:len(MAGIC)]!r}")
    reader = _Reader(raw, path)
    reader.pos = len(MAGIC)
    version, tag, dim, count = reader.unpack("<IBII")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    if tag not in TAG_PARTS:
        raise FormatError(f"{path}: unknown part tag {tag}")
    entries = []
    for _ in range(count):
        (id_len,) = reader.unpack("<H")
        ident = reader.take(id_len).decode("utf-8")
        (length,) = reader.unpack("<I")
        (ref_len,) = reader.unpack("<H")
        ref = reader.take(ref_len).decode("utf-8")
        (text_len,) = reader.unpack("<H")
        text = reader.take(text_len).decode("utf-8")
        emb = np.frombuffer(reader.take(dim * 4), dtype="<f4").copy()
        entries.append(
            DatabaseEntry(
                id=ident,
                part=TAG_PARTS[tag],
                embedding=emb,
                motion_ref=ref,
                length=length,
                source_text=text,
            )
        )
    if reader.pos != len(raw):
        raise CorruptFileError(f"{path}: {len(raw) - reader.pos} trailing bytes")
    return PartDatabase(TAG_PARTS[tag], entries)


def write_manifest(db: PartDatabase, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in db.entries:
            fh.write(
                json.dumps(
                    {
                        "id": e.id,
                        "part": e.part,
                        "frames": e.length,
                        "text": e.source_text,
                        "motion_path": e.motion_ref,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def read_manifest(path) -> list[dict]:
    rows = []
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoError(f"cannot read manifest {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        for key in ("id", "part", "frames", "text", "motion_path"):
            if key not in row:
                raise DataError(f"{path}:{lineno}: missing key {key!r}")
        if row["part"] not in PARTS:
            raise DataError(f"{path}:{lineno}: unknown part {row['part']!r}")
        rows.append(row)
    return rows


def write_vectors(vectors: np.ndarray, path) -> None:
    arr = np.ascontiguousarray(vectors, dtype="<f4")
    if arr.ndim != 2:
        raise DataError(f"vector table must be 2-D, got shape {arr.shape}")
    with open(path, "wb") as fh:
        fh.write(arr.tobytes())


def read_vectors(path, dim: int) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) % (4 * dim) != 0:
        raise CorruptFileError(
            f"{path}: size {len(raw)} is not a multiple of {4 * dim} (dim {dim})"
        )
    return np.frombuffer(raw, dtype="<f4").reshape(-1, dim).copy()


def write_similarity_matrix(sims: np.ndarray, path) -> None:
    arr = np.ascontiguousarray(sims, dtype="<f4")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DataError(f"similarity matrix must be square, got shape {arr.shape}")
    with open(path, "wb") as fh:
        fh.write(arr.tobytes())


def read_similarity_matrix(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    count = len(raw) // 4
    n = int(round(count**0.5))
    if count == 0 or n * n != count or len(raw) % 4 != 0:
        raise CorruptFileError(f"{path}: size {len(raw)} is not a square float32 table")
    return np.frombuffer(raw, dtype="<f4").reshape(n, n).copy()


def save_lookup(embeddings: dict, path) -> None:
    """Write {description: vector} as JSONL keyed by normalized text."""
    with open(path, "w", encoding="utf-8") as fh:
        for text, vec in embeddings.items():
            record = {
                "text": normalize_text(text),
                "embedding": [float(x) for x in np.asarray(vec, dtype=np.float32)],
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def load_lookup(path) -> dict:
    table = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoError(f"cannot read lookup {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            row = json.loads(line)
            table[normalize_text(row["text"])] = np.asarray(
                row["embedding"], dtype=np.float32
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise DataError(f"{path}:{lineno}: invalid lookup record: {exc}") from exc
    return table
