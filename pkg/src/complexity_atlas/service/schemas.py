"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class PeriodInfo(BaseModel):
    id: str
    start_year: int
    end_year: int
    empty: bool


class PeriodsResponse(BaseModel):
    periods: list[PeriodInfo]
    content_digest: str


class RankingEntry(BaseModel):
    # The metric value rides along under the metric's own name (eci, ...).
    model_config = ConfigDict(extra="allow")
    rank: int
    country: str


class RankingsResponse(BaseModel):
    period: str
    metric: str
    entries: list[RankingEntry]
    unranked: list[str]


class ContributorInfo(BaseModel):
    country: str
    weight: float
    gini: float


class PgiProduct(BaseModel):
    product: str
    pgi: float
    n_p: float
    top_contributors: list[ContributorInfo]


class PgiResponse(BaseModel):
    period: str
    products: list[PgiProduct]
    excluded_products: list[str]


class SpaceNodeInfo(BaseModel):
    id: str
    size: float
    pgi: float | None
    pci: float | None


class SpaceLinkInfo(BaseModel):
    source: str
    target: str
    phi: float


class ProductSpaceResponse(BaseModel):
    period: str
    nodes: list[SpaceNodeInfo]
    links: list[SpaceLinkInfo]


class PortfolioItem(BaseModel):
    product: str
    share: float


class CountryResponse(BaseModel):
    period: str
    country: str
    portfolio: list[PortfolioItem]
    expected_gini: float | None
    scores: dict[str, float | None]
    gini: float | None


class WhatIfRequest(BaseModel):
    country: str
    period: str
    add: list[str] | dict[str, float] = Field(default_factory=list)
    remove: list[str] = Field(default_factory=list)


class WhatIfEdit(BaseModel):
    product: str
    share: float


class WhatIfResponse(BaseModel):
    period: str
    country: str
    baseline: float
    scenario: float
    delta: float
    added: list[WhatIfEdit]
    removed: list[str]


class ErrorBody(BaseModel):
    code: str
    message: str
    details: dict = Field(default_factory=dict)


class ErrorResponse(BaseModel):
    error: ErrorBody
