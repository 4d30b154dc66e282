"""Economic-complexity and income-inequality analytics.

Pipeline: trade/indicator ingestion -> RCA and advantage matrices ->
complexity scores (ECI/PCI, Fitness, entropy, HHI) -> Product Gini Index
and what-if edits -> product-space backbone -> deterministic snapshot
served over CLI and HTTP.
"""

from .complexity import eci, entropy, fitness, hhi, pci
from .econometrics import (
    ClarkeResult,
    FitResult,
    PanelDataset,
    clarke_test,
    fe_fit,
    ols_fit,
    parse_spec,
    semi_partial,
)
from .inequality import ProductGiniTable, WhatIfResult, expected_gini, pgi_table, whatif
from .ingest import (
    AnalysisFrame,
    FilterThresholds,
    PeriodSpec,
    TradeFlow,
    build_frame,
    parse_panel_tables,
    parse_trade_table,
)
from .matrix import (
    AdvantageMatrix,
    ExportMatrix,
    RcaMatrix,
    ShareMatrix,
    advantage,
    rca,
    shares,
    trim_advantage,
)
from .productspace import ProximityMatrix, SpaceGraph, backbone, proximity
from .snapshot import Snapshot, SnapshotConfig, build_panel, build_snapshot

__version__ = "0.1.0"

__all__ = [
    "AdvantageMatrix",
    "AnalysisFrame",
    "ClarkeResult",
    "ExportMatrix",
    "FilterThresholds",
    "FitResult",
    "PanelDataset",
    "PeriodSpec",
    "ProductGiniTable",
    "ProximityMatrix",
    "RcaMatrix",
    "ShareMatrix",
    "Snapshot",
    "SnapshotConfig",
    "SpaceGraph",
    "TradeFlow",
    "WhatIfResult",
    "advantage",
    "backbone",
    "build_frame",
    "build_panel",
    "build_snapshot",
    "clarke_test",
    "eci",
    "entropy",
    "expected_gini",
    "fe_fit",
    "fitness",
    "hhi",
    "ols_fit",
    "parse_panel_tables",
    "parse_spec",
    "parse_trade_table",
    "pci",
    "pgi_table",
    "proximity",
    "rca",
    "semi_partial",
    "shares",
    "trim_advantage",
    "whatif",
]
