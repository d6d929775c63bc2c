"""FastAPI application wrapping the engine.

Engine errors map to HTTP statuses by category (usage 400, data 422,
missing 424, io 500); the body always carries ``{category, message}`` so thin
clients can translate back to exit codes.
"""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..config import EngineConfig
from ..errors import MoragError
from . import models
from .engine import Engine

_STATUS = {"usage": 400, "data": 422, "missing": 424, "io": 500}


def create_app(config: EngineConfig | None = None, engine: Engine | None = None) -> FastAPI:
    engine = engine or Engine(config or EngineConfig())
    app = FastAPI(title="morag", version="0.1.0")
    app.state.engine = engine

    @app.exception_handler(MoragError)
    async def morag_error_handler(request: Request, exc: MoragError):
        return JSONResponse(
            status_code=_STATUS.get(exc.category, 500),
            content=models.ErrorBody(category=exc.category, message=str(exc)).model_dump(),
        )

    @app.get("/health", response_model=models.HealthResponse)
    def health():
        return engine.health()

    @app.post("/describe", response_model=models.DescribeResponse)
    def describe(request: models.DescribeRequest):
        return engine.describe(request)

    @app.post("/retrieve", response_model=models.RetrieveResponse)
    def retrieve(request: models.RetrieveRequest):
        return engine.retrieve(request)

    @app.post("/compose", response_model=models.ComposeResponse)
    def compose(request: models.ComposeRequest):
        return engine.compose(request)

    @app.post("/build-db", response_model=models.BuildDbResponse)
    def build_db(request: models.BuildDbRequest):
        return engine.build_db(request)

    @app.post("/eval", response_model=models.EvalResponse)
    def evaluate(request: models.EvalRequest):
        return engine.evaluate(request)

    @app.post("/train-toy", response_model=models.TrainToyResponse)
    def train_toy(request: models.TrainToyRequest):
        return engine.train_toy(request)

    return app
