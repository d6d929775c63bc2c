"""The engine behind every service endpoint and CLI subcommand.

Holds the loaded part databases, the description-embedding lookup, the
completion client, and the cache; individual operations delegate to the core
modules. Databases and lookups load lazily on first use so that commands that
only produce artifacts (build-db, train-toy, eval) never require them.
"""

import json
from pathlib import Path

import numpy as np

import httpx

from ..compose import JointPartition, compose_topk, default_partition, export_composed
from ..config import EngineConfig
from ..contrastive import train_toy_projection
from ..errors import (
    ConfigurationError,
    DataError,
    EndpointError,
    IoError,
    MissingDependencyError,
    UsageError,
)
from ..metrics import build_report, load_feature_sets
from ..motion.fileio import load_joint_motion
from ..prompts import HttpCompletionClient, PromptCache, describe_parts
from ..retrieval import (
    DatabaseEntry,
    PartDatabase,
    load_database,
    load_lookup,
    normalize_text,
    read_manifest,
    read_vectors,
    retrieve_parts,
    save_database,
)
from ..retrieval.database import EMBEDDING_DIM
from ..skeleton import PARTS
from . import models


def _stable_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


class Engine:
    def __init__(self, config: EngineConfig, client=None):
        self.config = config
        self._client = client
        self._dbs: dict[str, PartDatabase] = {}
        self._lookup = None
        self._cache = None

    # -- lazily constructed collaborators ---------------------------------

    @property
    def cache(self) -> PromptCache | None:
        if self._cache is None and self.config.llm.cache:
            self._cache = PromptCache(self.config.llm.cache)
        return self._cache

    @property
    def client(self):
        if self._client is None and self.config.llm.endpoint:
            self._client = HttpCompletionClient(
                endpoint=self.config.llm.endpoint, model=self.config.llm.model
            )
        return self._client

    def database(self, part: str) -> PartDatabase:
        if part not in self._dbs:
            path = self.config.db_paths.get(part, "")
            if not path:
                raise ConfigurationError(
                    f"no database configured for part {part!r} (set db.{part})"
                )
            if not Path(path).exists():
                raise ConfigurationError(
                    f"database for part {part!r} not found at {path}; run build-db first"
                )
            self._dbs[part] = load_database(path)
        return self._dbs[part]

    def lookup(self) -> dict:
        if self._lookup is None:
            path = self.config.embeddings_lookup
            if not path:
                self._lookup = {}
            elif not Path(path).exists():
                raise ConfigurationError(
                    f"embedding lookup not found at {path}; run the exporter first"
                )
            else:
                self._lookup = load_lookup(path)
        return self._lookup

    def partition(self) -> JointPartition:
        override = self.config.partition_override
        if override:
            missing = [p for p in PARTS if p not in override]
            if missing:
                raise ConfigurationError(
                    f"partition override must set all parts, missing {missing}"
                )
            return JointPartition(
                torso=frozenset(override["torso"]),
                hands=frozenset(override["hands"]),
                legs=frozenset(override["legs"]),
            )
        return default_partition()

    # -- embedding resolution ---------------------------------------------

    def embed_description(self, text: str) -> np.ndarray:
        key = normalize_text(text)
        table = self.lookup()
        if key in table:
            return table[key]
        if self.config.embeddings_endpoint:
            return self._embed_remote(text)
        raise MissingDependencyError(
            f"no embedding available for description {text!r}; "
            "export a lookup table or configure embeddings.endpoint"
        )

    def _embed_remote(self, text: str) -> np.ndarray:
        try:
            response = httpx.post(
                self.config.embeddings_endpoint, json={"texts": [text]}, timeout=30.0
            )
            response.raise_for_status()
            payload = response.json()
            vec = np.asarray(payload["embeddings"][0], dtype=np.float32)
        except (httpx.HTTPError, ValueError, KeyError, IndexError) as exc:
            raise EndpointError(f"embedding endpoint failed: {exc}") from exc
        if vec.shape != (EMBEDDING_DIM,):
            raise DataError(
                f"embedding endpoint returned shape {vec.shape}, expected ({EMBEDDING_DIM},)"
            )
        return vec

    # -- operations ---------------------------------------------------------

    def health(self) -> models.HealthResponse:
        databases = {
            part: bool(self.config.db_paths.get(part))
            and Path(self.config.db_paths[part]).exists()
            for part in PARTS
        }
        return models.HealthResponse(status="ok", databases=databases)

    def describe(self, request: models.DescribeRequest) -> models.DescribeResponse:
        if not request.text.strip():
            raise UsageError("description must be non-empty")
        cached = False
        if self.cache is not None:
            from ..prompts.describe import cache_key
            from ..prompts.template import DEFAULT_TEMPLATE

            cached = self.cache.get(cache_key(request.text, DEFAULT_TEMPLATE)) is not None
        parts = describe_parts(
            request.text,
            client=self.client,
            cache=self.cache,
            retries=self.config.llm.retries,
            max_tokens=self.config.llm.max_tokens,
            model_id=self.config.llm.model,
        )
        return models.DescribeResponse(
            parts=models.PartTexts(**parts.as_dict()), cached=cached
        )

    def retrieve(self, request: models.RetrieveRequest) -> models.RetrieveResponse:
        parts = self.describe(models.DescribeRequest(text=request.text)).parts
        queries = {
            "torso": self.embed_description(parts.torso),
            "hands": self.embed_description(parts.hands),
            "legs": self.embed_description(parts.legs),
        }
        dbs = {part: self.database(part) for part in PARTS}
        results = retrieve_parts(dbs, queries, request.k)
        rankings = {
            part: models.PartRanking(
                items=[
                    models.RetrievalItemModel(
                        id=item.id,
                        score=item.score,
                        frames=item.length,
                        text=item.source_text,
                        motion_path=item.motion_ref,
                    )
                    for item in result.items
                ],
                truncated=result.truncated,
            )
            for part, result in results.items()
        }
        return models.RetrieveResponse(part_texts=parts, parts=rankings, k=request.k)

    def compose(self, request: models.ComposeRequest) -> models.ComposeResponse:
        retrieved = self.retrieve(
            models.RetrieveRequest(text=request.text, k=request.k)
        )
        out_dir = Path(request.out_dir)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            probe = out_dir / ".write-probe"
            probe.write_bytes(b"")
            probe.unlink()
        except OSError as exc:
            raise IoError(f"output directory not writable: {exc}") from exc

        from ..retrieval.database import RetrievalItem, RetrievalResult

        results = {
            part: RetrievalResult(
                part=part,
                items=tuple(
                    RetrievalItem(
                        id=item.id,
                        score=item.score,
                        length=item.frames,
                        motion_ref=item.motion_path,
                        source_text=item.text,
                    )
                    for item in ranking.items
                ),
                truncated=ranking.truncated,
            )
            for part, ranking in retrieved.parts.items()
        }
        composed = compose_topk(
            results,
            request.k,
            self.partition(),
            loader=load_joint_motion,
            trim_mode=self.config.compose.trim,
        )
        out = []
        for cm in composed:
            motion_path, sidecar_path = export_composed(
                cm, out_dir, f"composed_{cm.provenance.rank:03d}"
            )
            out.append(
                models.ComposedItemModel(
                    rank=cm.provenance.rank,
                    torso_id=cm.provenance.torso_id,
                    hands_id=cm.provenance.hands_id,
                    legs_id=cm.provenance.legs_id,
                    f_min=cm.provenance.f_min,
                    motion_path=str(motion_path),
                    sidecar_path=str(sidecar_path),
                )
            )
        return models.ComposeResponse(composed=out)

    def build_db(self, request: models.BuildDbRequest) -> models.BuildDbResponse:
        if request.part not in PARTS:
            raise UsageError(f"part must be one of {PARTS}, got {request.part!r}")
        manifest_path = Path(request.manifest_path)
        vectors_path = Path(request.vectors_path)
        for p, label in ((manifest_path, "manifest"), (vectors_path, "vectors")):
            if not p.exists():
                raise IoError(f"{label} file not found: {p}")
        rows = read_manifest(manifest_path)
        vectors = read_vectors(vectors_path, EMBEDDING_DIM)
        if len(rows) != vectors.shape[0]:
            raise DataError(
                f"manifest has {len(rows)} entries but vectors file has "
                f"{vectors.shape[0]} rows"
            )
        entries = [
            DatabaseEntry(
                id=row["id"],
                part=request.part,
                embedding=vectors[i],
                motion_ref=row["motion_path"],
                length=int(row["frames"]),
                source_text=row["text"],
            )
            for i, row in enumerate(rows)
        ]
        db = PartDatabase(request.part, entries)
        save_database(db, request.out_path)
        return models.BuildDbResponse(
            part=request.part, count=len(db), dim=db.dim, out_path=request.out_path
        )

    def evaluate(self, request: models.EvalRequest) -> models.EvalResponse:
        sets = load_feature_sets(request.features_path)
        opts = self.config.metrics
        report = build_report(
            sets,
            seed=request.seed if request.seed is not None else opts.seed,
            subset_size=request.subset_size or opts.subset_size,
            pool_size=request.pool_size or opts.pool_size,
            pairs=opts.mm_pairs,
        )
        r_prec = report.pop("r_precision")
        return models.EvalResponse(
            r_precision=models.RPrecisionModel(**r_prec) if r_prec else None,
            **report,
        )

    def train_toy(self, request: models.TrainToyRequest) -> models.TrainToyResponse:
        path = Path(request.pairs_path)
        if not path.exists():
            raise IoError(f"pairs archive not found: {path}")
        try:
            with np.load(path) as archive:
                text = np.asarray(archive["text"], dtype=np.float64)
                motion = np.asarray(archive["motion"], dtype=np.float64)
                text_sims = (
                    np.asarray(archive["text_sims"], dtype=np.float64)
                    if "text_sims" in archive.files
                    else None
                )
        except (OSError, ValueError, KeyError) as exc:
            raise DataError(f"cannot load pairs archive {path}: {exc}") from exc
        result = train_toy_projection(
            text,
            motion,
            weights=self.config.loss,
            epochs=request.epochs,
            learning_rate=request.learning_rate,
            seed=request.seed,
            text_sims=text_sims,
        )
        maps_path = ""
        if request.out_path:
            np.savez(request.out_path, w_text=result.w_text, w_motion=result.w_motion)
            maps_path = request.out_path
        return models.TrainToyResponse(
            initial_loss=result.initial_loss,
            final_loss=result.final_loss,
            final_nce=result.final_components.get("nce", float("nan")),
            final_embedding=result.final_components.get("embedding", float("nan")),
            epochs=request.epochs,
            maps_path=maps_path,
        )
