"""Request/response models shared by the HTTP service and the CLI client."""

from pydantic import BaseModel, Field


class ErrorBody(BaseModel):
    category: str
    message: str


class HealthResponse(BaseModel):
    status: str
    databases: dict[str, bool]


class PartTexts(BaseModel):
    torso: str
    hands: str
    legs: str
    source: str = ""


class DescribeRequest(BaseModel):
    text: str


class DescribeResponse(BaseModel):
    parts: PartTexts
    cached: bool


class RetrieveRequest(BaseModel):
    text: str
    k: int = Field(default=3, ge=1)


class RetrievalItemModel(BaseModel):
    id: str
    score: float
    frames: int
    text: str = ""
    motion_path: str = ""


class PartRanking(BaseModel):
    items: list[RetrievalItemModel]
    truncated: bool = False


class RetrieveResponse(BaseModel):
    part_texts: PartTexts
    parts: dict[str, PartRanking]
    k: int


class ComposeRequest(BaseModel):
    text: str
    k: int = Field(default=3, ge=1)
    out_dir: str


class ComposedItemModel(BaseModel):
    rank: int
    torso_id: str
    hands_id: str
    legs_id: str
    f_min: int
    motion_path: str
    sidecar_path: str


class ComposeResponse(BaseModel):
    composed: list[ComposedItemModel]


class BuildDbRequest(BaseModel):
    manifest_path: str
    vectors_path: str
    part: str
    out_path: str


class BuildDbResponse(BaseModel):
    part: str
    count: int
    dim: int
    out_path: str


class EvalRequest(BaseModel):
    features_path: str
    seed: int | None = None
    subset_size: int | None = None
    pool_size: int | None = None


class RPrecisionModel(BaseModel):
    top1: float
    top2: float
    top3: float


class EvalResponse(BaseModel):
    r_precision: RPrecisionModel | None = None
    mm_dist: float | None = None
    diversity: float | None = None
    multimodality: float | None = None
    fid: float | None = None
    config: dict


class TrainToyRequest(BaseModel):
    pairs_path: str
    epochs: int = Field(default=1000, ge=0)
    learning_rate: float = 1.0
    seed: int = 0
    out_path: str = ""


class TrainToyResponse(BaseModel):
    initial_loss: float
    final_loss: float
    final_nce: float
    final_embedding: float
    epochs: int
    maps_path: str = ""
