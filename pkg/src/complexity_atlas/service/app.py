"""FastAPI service over an immutable snapshot directory.

All endpoints are read-only except /whatif, which is a pure computation
over the loaded snapshot (no mutation). Responses are validated against
the pydantic schemas and then serialized through canonical_json, so HTTP
bodies match the CLI's output byte for byte.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Response
from fastapi.middleware.cors import CORSMiddleware

from ..errors import AtlasError, NotFoundError, ValidationError
from ..snapshot import Snapshot, canonical_json
from . import queries, schemas


def _json(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def create_app(snapshot: Snapshot | str | Path) -> FastAPI:
    if not isinstance(snapshot, Snapshot):
        snapshot = Snapshot.load(snapshot)
    snap = snapshot

    app = FastAPI(title="complexity-atlas", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.snapshot = snap

    @app.exception_handler(AtlasError)
    async def atlas_error_handler(_, exc: AtlasError):
        status = 500
        if isinstance(exc, NotFoundError):
            status = 404
        elif isinstance(exc, ValidationError):
            status = 400
        body = schemas.ErrorResponse(
            error=schemas.ErrorBody(
                code=exc.code, message=str(exc), details=exc.details
            )
        )
        return _json(body.model_dump(), status_code=status)

    @app.get("/periods", response_model=schemas.PeriodsResponse)
    def get_periods():
        payload = schemas.PeriodsResponse.model_validate(queries.periods(snap))
        return _json(payload.model_dump())

    @app.get("/rankings", response_model=schemas.RankingsResponse)
    def get_rankings(period: str, metric: str = "eci"):
        payload = schemas.RankingsResponse.model_validate(
            queries.rankings(snap, period, metric)
        )
        return _json(payload.model_dump())

    @app.get("/pgi", response_model=schemas.PgiResponse)
    def get_pgi(period: str):
        payload = schemas.PgiResponse.model_validate(queries.pgi(snap, period))
        return _json(payload.model_dump())

    @app.get("/productspace", response_model=schemas.ProductSpaceResponse)
    def get_productspace(period: str):
        payload = schemas.ProductSpaceResponse.model_validate(
            queries.productspace(snap, period)
        )
        return _json(payload.model_dump())

    @app.get("/country/{code}", response_model=schemas.CountryResponse)
    def get_country(code: str, period: str):
        payload = schemas.CountryResponse.model_validate(
            queries.country(snap, period, code)
        )
        return _json(payload.model_dump())

    @app.post("/whatif", response_model=schemas.WhatIfResponse)
    def post_whatif(body: schemas.WhatIfRequest):
        payload = schemas.WhatIfResponse.model_validate(
            queries.whatif(snap, body.period, body.country, body.add, body.remove)
        )
        return _json(payload.model_dump())

    return app
