"""Error types shared across the package.

Every error carries a short machine-readable code so the HTTP layer can
map failures to structured responses without string matching.
"""

from __future__ import annotations

from typing import Any


class AtlasError(Exception):
    """Base error with a machine-readable code and optional details."""

    code = "atlas_error"

    def __init__(self, message: str, *, code: str | None = None, **details: Any):
        super().__init__(message)
        if code is not None:
            self.code = code
        self.details = details

    def to_dict(self) -> dict:
        return {"code": self.code, "message": str(self), "details": self.details}


class InputError(AtlasError):
    """Malformed or inconsistent input data (whole-file level)."""

    code = "input_error"


class EmptyWorldTradeError(AtlasError):
    code = "empty_world_trade"


class DegenerateEigenvalueError(AtlasError):
    """Second eigenvalue has multiplicity > 1; ranking is not identified."""

    code = "degenerate_eigenvalue"


class ConvergenceError(AtlasError):
    code = "no_convergence"


class RankDeficientError(AtlasError):
    code = "rank_deficient"


class NoWithinVariationError(AtlasError):
    code = "no_within_variation"


class NotFoundError(AtlasError):
    code = "not_found"


class ValidationError(AtlasError):
    code = "validation_error"
