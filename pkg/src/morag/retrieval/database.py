"""Part-specific motion vector databases with exact cosine k-NN.

Databases are immutable after build/load. Search is an exact scan over
unit-normalized vectors; at desk scale this beats any approximate index and
keeps rankings bit-reproducible. Ties break by ascending id.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import (
    ConfigurationError,
    DataError,
    DegenerateVectorError,
    DuplicateIdError,
    ShapeError,
    UsageError,
)
from ..skeleton import PARTS

EMBEDDING_DIM = 256


@dataclass(frozen=True)
class DatabaseEntry:
    id: str
    part: str
    embedding: np.ndarray  # (dim,) float32
    motion_ref: str
    length: int
    source_text: str = ""

    def __post_init__(self):
        if self.part not in PARTS:
            raise DataError(f"unknown part {self.part!r}")
        emb = np.ascontiguousarray(self.embedding, dtype=np.float32)
        if emb.ndim != 1:
            raise ShapeError(f"embedding must be a vector, got shape {emb.shape}")
        if not np.isfinite(emb).all():
            raise DataError(f"entry {self.id!r} has non-finite embedding values")
        if np.linalg.norm(emb.astype(np.float64)) == 0.0:
            raise DegenerateVectorError(f"entry {self.id!r} has a zero-norm embedding")
        if self.length < 1:
            raise DataError(f"entry {self.id!r} must have length >= 1")
        if not self.id:
            raise DataError("entry id must be non-empty")
        emb.flags.writeable = False
        object.__setattr__(self, "embedding", emb)


@dataclass(frozen=True)
class RetrievalItem:
    id: str
    score: float
    length: int
    motion_ref: str
    source_text: str = ""


@dataclass(frozen=True)
class RetrievalResult:
    part: str
    items: tuple
    truncated: bool = False

    def __post_init__(self):
        items = tuple(self.items)
        scores = [it.score for it in items]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise DataError("retrieval scores must be non-increasing")
        object.__setattr__(self, "items", items)

    def ids(self) -> list[str]:
        return [it.id for it in self.items]


class PartDatabase:
    """Ordered entry table plus a unit-norm embedding cache for cosine scans."""

    def __init__(self, part: str, entries: list[DatabaseEntry]):
        if part not in PARTS:
            raise DataError(f"unknown part {part!r}")
        if not entries:
            raise DataError("database must contain at least one entry")
        dims = {e.embedding.shape[0] for e in entries}
        if len(dims) != 1:
            raise ShapeError(f"inconsistent embedding dimensions: {sorted(dims)}")
        seen = set()
        for e in entries:
            if e.id in seen:
                raise DuplicateIdError(f"duplicate entry id {e.id!r}")
            seen.add(e.id)
        self.part = part
        self.entries = tuple(entries)
        self.dim = dims.pop()
        matrix = np.stack([e.embedding for e in entries]).astype(np.float64)
        self._unit = matrix / np.linalg.norm(matrix, axis=1, keepdims=True)
        self._by_id = {e.id: i for i, e in enumerate(entries)}

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, entry_id: str) -> DatabaseEntry:
        try:
            return self.entries[self._by_id[entry_id]]
        except KeyError:
            raise DataError(f"no entry with id {entry_id!r}") from None

    def query(self, q: np.ndarray, k: int) -> RetrievalResult:
        return query(self, q, k)


def build(part: str, entries) -> PartDatabase:
    return PartDatabase(part, list(entries))


def query(db: PartDatabase, q: np.ndarray, k: int) -> RetrievalResult:
    """Top-min(k, size) entries by cosine similarity, ties by ascending id."""
    if k < 1:
        raise UsageError(f"k must be >= 1, got {k}")
    qv = np.asarray(q, dtype=np.float64)
    if qv.shape != (db.dim,):
        raise ShapeError(f"query must have shape ({db.dim},), got {qv.shape}")
    norm = np.linalg.norm(qv)
    if norm == 0.0:
        raise DegenerateVectorError("query vector has zero norm")
    # elementwise multiply + per-row pairwise sum: unlike a BLAS gemv, this
    # reduces every row with the same summation order, so identical stored
    # vectors get bit-identical scores and ties resolve purely by id
    scores = (db._unit * (qv / norm)).sum(axis=1)
    order = sorted(range(len(db)), key=lambda i: (-scores[i], db.entries[i].id))
    top = order[: min(k, len(db))]
    items = tuple(
        RetrievalItem(
            id=db.entries[i].id,
            score=float(scores[i]),
            length=db.entries[i].length,
            motion_ref=db.entries[i].motion_ref,
            source_text=db.entries[i].source_text,
        )
        for i in top
    )
    return RetrievalResult(part=db.part, items=items, truncated=k > len(db))


def retrieve_parts(dbs: dict, part_queries: dict, k: int) -> dict:
    """Independent per-part queries; returns {part: RetrievalResult}."""
    missing = [p for p in PARTS if p not in dbs or dbs[p] is None]
    if missing:
        raise ConfigurationError(
            f"missing part database(s): {', '.join(missing)}; build them first"
        )
    absent = [p for p in PARTS if p not in part_queries]
    if absent:
        raise UsageError(f"missing query vector(s) for: {', '.join(absent)}")
    return {p: query(dbs[p], part_queries[p], k) for p in PARTS}
