"""Local stateless HTTP service backing scripts and the curve-editor UI."""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import api
from .errors import ConfigurationError, InputError
from .schemas import (
    EditRequest,
    FeatureFileModel,
    LibraryResponse,
    MetricsRequest,
    MetricsResponse,
    RecoverRequest,
    RecoveryResponse,
    ScoreModel,
)

MAX_BODY_BYTES = 4 * 1024 * 1024


def create_app(manifest_path: str | None = None) -> FastAPI:
    app = FastAPI(title="spiraltension", version="0.1.0")
    app.state.manifest = (
        json.loads(Path(manifest_path).read_text()) if manifest_path else None
    )

    @app.middleware("http")
    async def reject_oversized_bodies(request: Request, call_next):
        length = request.headers.get("content-length")
        if length is not None and int(length) > MAX_BODY_BYTES:
            return JSONResponse(
                status_code=413, content={"error": "payload_too_large", "detail": f"> {MAX_BODY_BYTES} bytes"}
            )
        return await call_next(request)

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        # undecodable JSON is a malformed body (400); schema violations are 422
        malformed = any(e.get("type") == "json_invalid" for e in exc.errors())
        return JSONResponse(
            status_code=400 if malformed else 422,
            content={"error": "malformed_body" if malformed else "invalid_request", "detail": str(exc)},
        )

    @app.exception_handler(InputError)
    async def input_error(request: Request, exc: InputError):
        return JSONResponse(status_code=422, content={"error": "invariant_violation", "detail": str(exc)})

    @app.exception_handler(ConfigurationError)
    async def config_error(request: Request, exc: ConfigurationError):
        return JSONResponse(status_code=422, content={"error": "invalid_configuration", "detail": str(exc)})

    @app.post("/analyze", response_model=FeatureFileModel, response_model_exclude_none=True)
    def analyze(
        score: ScoreModel,
        beam_width: int = Query(8, ge=1),
        tonality: int | None = Query(None, ge=0, le=23),
    ) -> FeatureFileModel:
        return api.analyze_score(score, beam_width=beam_width, tonality=tonality)

    @app.post("/recover", response_model=RecoveryResponse, response_model_exclude_none=True)
    def recover(request: RecoverRequest) -> RecoveryResponse:
        return api.recover_features(request)

    @app.post("/edit", response_model=FeatureFileModel, response_model_exclude_none=True)
    def edit(request: EditRequest) -> FeatureFileModel:
        return api.apply_edits(request)

    @app.post("/metrics", response_model=MetricsResponse, response_model_exclude_none=True)
    def metrics(request: MetricsRequest) -> MetricsResponse:
        return api.compute_metrics(request)

    @app.get("/library", response_model=LibraryResponse)
    def library(
        min_notes: int = Query(2, ge=1, le=5),
        max_notes: int = Query(5, ge=1, le=5),
        quality: str | None = Query(None, description="comma-separated quality tags"),
        must_contain: str | None = Query(None, description="comma-separated pitch labels"),
    ) -> LibraryResponse:
        return api.library_entries(
            min_notes=min_notes,
            max_notes=max_notes,
            quality_filter=quality.split(",") if quality else None,
            must_contain=must_contain.split(",") if must_contain else None,
        )

    @app.get("/manifest")
    def manifest():
        if app.state.manifest is None:
            return JSONResponse(status_code=404, content={"error": "no_manifest", "detail": "service started without a manifest"})
        return app.state.manifest

    return app
