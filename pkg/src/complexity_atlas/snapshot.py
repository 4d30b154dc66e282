"""Snapshot builds: one deterministic directory of JSON/CSV per dataset.

A snapshot is the unit served by the CLI and the HTTP API. Builds are
deterministic: registries are sorted, floats are serialized at 12
significant digits, and JSON keys are sorted, so identical inputs yield
byte-identical artifact files and an identical content digest. The build
timestamp lives in metadata only and is excluded from the digest.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np

from . import complexity, inequality, matrix, productspace
from .econometrics import GOVERNANCE_COLUMNS, PanelDataset
from .errors import AtlasError, InputError, NotFoundError
from .ingest import (
    FilterThresholds,
    PeriodSpec,
    build_frame,
    load_periods,
    parse_panel_tables,
    parse_trade_table,
)
from .inequality import Contributor, PgiEntry, ProductGiniTable
from .registry import Registry

SIGNIFICANT_DIGITS = 12
METRICS = ("eci", "fitness", "entropy", "hhi")


def round_floats(obj: Any, digits: int = SIGNIFICANT_DIGITS) -> Any:
    """Recursively round floats to fixed significant digits (-0.0 -> 0.0)."""
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            raise AtlasError("non-finite value in serialized payload")
        if obj == 0.0:
            return 0.0
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    return obj


def canonical_json(obj: Any) -> str:
    """Deterministic JSON: sorted keys, compact separators, fixed floats."""
    return json.dumps(
        round_floats(obj),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    )


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass
class SnapshotConfig:
    trade: Path
    panel: dict[str, Path]
    periods: list[PeriodSpec]
    thresholds: FilterThresholds = field(default_factory=FilterThresholds)
    gini_dataset: str | None = None
    trade_schema: dict[str, str] | None = None
    year_range: tuple[int, int] | None = None
    proximity_threshold: float = 0.55
    pooled_proximity: bool = False
    output: Path = Path("snapshot")

    @classmethod
    def load(cls, path: str | Path) -> "SnapshotConfig":
        path = Path(path)
        raw = json.loads(path.read_text())
        base = path.parent

        def resolve(p: str) -> Path:
            candidate = Path(p)
            return candidate if candidate.is_absolute() else base / candidate

        panel_raw = raw.get("panel", {})
        if isinstance(panel_raw, list):
            panel = {Path(p).stem: resolve(p) for p in panel_raw}
        else:
            panel = {name: resolve(p) for name, p in panel_raw.items()}

        periods_raw = raw.get("periods")
        if isinstance(periods_raw, str):
            periods = load_periods(resolve(periods_raw).read_bytes())
        elif periods_raw is None:
            periods = load_periods(None)
        else:
            periods = load_periods(json.dumps(periods_raw))

        thresholds = FilterThresholds(**raw.get("thresholds", {}))
        ps = raw.get("productspace", {})
        year_range = raw.get("year_range")
        return cls(
            trade=resolve(raw["trade"]),
            panel=panel,
            periods=periods,
            thresholds=thresholds,
            gini_dataset=raw.get("gini_dataset"),
            trade_schema=raw.get("trade_schema"),
            year_range=tuple(year_range) if year_range else None,
            proximity_threshold=float(ps.get("threshold", 0.55)),
            pooled_proximity=bool(ps.get("pooled", False)),
            output=Path(raw.get("output", "snapshot")),
        )


@dataclass
class PeriodArtifacts:
    """All computed per-period payloads, as they are persisted."""

    period: PeriodSpec
    empty: bool
    registries: dict
    complexity: dict
    pgi: dict
    productspace: dict
    portfolios: dict
    panel: dict


class _ModuleContext:
    """Annotates any module error with the failing module and period."""

    def __init__(self, module: str, period: str):
        self.module = module
        self.period = period

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and isinstance(exc, Exception):
            raise AtlasError(
                f"[{self.module}/{self.period}] {exc}",
                code="build_error",
                module=self.module,
                period=self.period,
            ) from exc
        return False


def _score_payload(period: str, eci_res, pci_res, fit, ent, concentration) -> dict:
    country: dict[str, dict] = {}
    for c in fit.fitness:
        country[c] = {
            "eci": eci_res.scores.get(c),
            "fitness": fit.fitness[c],
            "entropy": ent[c],
            "hhi": concentration[c],
        }
    product = {p: {"pci": pci_res.scores.get(p)} for p in pci_res.scores}
    return {
        "period": period,
        "country": country,
        "product": product,
        "meta": {
            "eci_eigenvalue": eci_res.coupling.eigenvalue,
            "pci_eigenvalue": pci_res.coupling.eigenvalue,
            "eci_excluded": list(eci_res.excluded),
            "pci_excluded": list(pci_res.excluded),
            "fitness_iterations": fit.iterations,
            "fitness_converged": fit.converged,
        },
    }


def _pgi_payload(
    period: str, table: ProductGiniTable, pci_scores: dict | None = None
) -> dict:
    return {
        "period": period,
        "products": {
            p: {
                "pgi": e.pgi,
                "n_p": e.n_p,
                "contributors": [
                    {"country": c.country, "weight": c.weight, "gini": c.gini}
                    for c in e.contributors
                ],
            }
            for p, e in table.entries.items()
        },
        "excluded_products": list(table.excluded_products),
        # Read-only diagnostic: complex products tend to carry low PGIs.
        "pgi_pci_pearson_r": (
            inequality.pgi_pci_correlation(table, pci_scores)
            if pci_scores is not None
            else None
        ),
    }


def _pgi_csv(table: ProductGiniTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["product", "pgi", "n_p", "top5_contributors"])
    for p in sorted(table.entries):
        e = table.entries[p]
        top5 = ";".join(
            f"{c.country}:{round_floats(c.weight):.12g}:{round_floats(c.gini):.12g}"
            for c in e.contributors[:5]
        )
        writer.writerow(
            [p, f"{round_floats(e.pgi):.12g}", f"{round_floats(e.n_p):.12g}", top5]
        )
    return buf.getvalue()


def _edges_csv(graph: productspace.SpaceGraph) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "phi"])
    for e in graph.links:
        writer.writerow([e.source, e.target, f"{round_floats(e.phi):.12g}"])
    return buf.getvalue()


def _build_period(
    frame, config: SnapshotConfig, pooled_prox: productspace.ProximityMatrix | None
) -> PeriodArtifacts:
    pid = frame.period.id
    if frame.empty:
        return PeriodArtifacts(
            period=frame.period,
            empty=True,
            registries={"period": pid, "countries": [], "products": [], "empty": True},
            complexity={"period": pid, "country": {}, "product": {}, "meta": {}},
            pgi={
                "period": pid,
                "products": {},
                "excluded_products": [],
                "pgi_pci_pearson_r": None,
            },
            productspace={"period": pid, "nodes": [], "links": []},
            portfolios={"period": pid, "countries": {}},
            panel={"period": pid, "countries": {}},
        )

    with _ModuleContext("matrix", pid):
        rca_m = matrix.rca(frame.exports)
        adv = matrix.advantage(rca_m)
        adv, trim_report = matrix.trim_advantage(adv)
        x = frame.exports.restrict(adv.countries, adv.products)
        s = matrix.shares(x)

    with _ModuleContext("complexity", pid):
        eci_res = complexity.eci(adv)
        pci_res = complexity.pci(adv)
        fit = complexity.fitness(adv)
        ent = complexity.entropy(s)
        concentration = complexity.hhi(s)

    with _ModuleContext("inequality", pid):
        gini = {
            c: rec.gini
            for c, rec in frame.panel.items()
            if rec.gini is not None and c in adv.countries
        }
        table = inequality.pgi_table(adv, s, gini)
        portfolios: dict[str, dict] = {}
        for c in adv.countries:
            i = adv.countries.index(c)
            products = [
                {"product": p, "share": float(s.values[i, j])}
                for j, p in enumerate(adv.products)
                if adv.m[i, j]
            ]
            portfolios[c] = {
                "expected_gini": inequality.expected_gini(c, adv, s, table),
                "products": products,
            }

    with _ModuleContext("productspace", pid):
        if pooled_prox is not None:
            prox = pooled_prox.restrict(list(adv.products))
        else:
            prox = productspace.proximity(adv)
        graph = productspace.backbone(
            prox,
            threshold=config.proximity_threshold,
            sizes=x.product_world_trade(),
            pgi={p: e.pgi for p, e in table.entries.items()},
            pci=pci_res.scores,
        )

    panel_payload = {
        c: {
            "gini": rec.gini,
            "gini_by_dataset": rec.gini_by_dataset,
            "gdp_ppp_pc": rec.gdp_ppp_pc,
            "schooling": rec.schooling,
            "population": rec.population,
            "governance": rec.governance,
        }
        for c, rec in frame.panel.items()
        if c in adv.countries
    }

    registries = {
        "period": pid,
        "countries": list(adv.countries),
        "products": list(adv.products),
        "empty": False,
        "trim_report": trim_report,
        "rca_dropped": {
            "countries": list(rca_m.dropped_countries),
            "products": list(rca_m.dropped_products),
        },
    }
    return PeriodArtifacts(
        period=frame.period,
        empty=False,
        registries=registries,
        complexity=_score_payload(pid, eci_res, pci_res, fit, ent, concentration),
        pgi=_pgi_payload(pid, table, pci_res.scores),
        productspace={"period": pid, **graph.to_json_dict()},
        portfolios={"period": pid, "countries": portfolios},
        panel={"period": pid, "countries": panel_payload},
    )


def build_snapshot(config: SnapshotConfig, out: Path | None = None) -> "Snapshot":
    """Run the full pipeline and persist the snapshot directory."""
    out = Path(out) if out is not None else config.output

    input_digests: dict[str, str] = {}
    trade_bytes = config.trade.read_bytes()
    input_digests[config.trade.name] = _sha256(trade_bytes)
    panel_sources: dict[str, bytes] = {}
    for name, path in sorted(config.panel.items()):
        data = path.read_bytes()
        panel_sources[name] = data
        input_digests[path.name] = _sha256(data)

    with _ModuleContext("ingest", "*"):
        parsed = parse_trade_table(
            trade_bytes, schema=config.trade_schema, year_range=config.year_range
        )
        observations = parse_panel_tables(panel_sources)
        frame = build_frame(
            parsed.flows,
            observations,
            config.periods,
            thresholds=config.thresholds,
            gini_dataset=config.gini_dataset,
        )

    pooled_prox = None
    if config.pooled_proximity:
        with _ModuleContext("productspace", "pooled"):
            advs = []
            for p in config.periods:
                f = frame.frames[p.id]
                if f.empty:
                    continue
                adv, _ = matrix.trim_advantage(matrix.advantage(matrix.rca(f.exports)))
                advs.append(adv)
            pooled_prox = productspace.proximity(productspace.pooled_advantage(advs))

    artifacts = [
        _build_period(frame.frames[p.id], config, pooled_prox) for p in config.periods
    ]

    files: dict[str, bytes] = {}
    for art in artifacts:
        pid = art.period.id
        files[f"{pid}/registries.json"] = canonical_json(art.registries).encode()
        files[f"{pid}/complexity.json"] = canonical_json(art.complexity).encode()
        files[f"{pid}/pgi.json"] = canonical_json(art.pgi).encode()
        files[f"{pid}/productspace.json"] = canonical_json(art.productspace).encode()
        files[f"{pid}/portfolios.json"] = canonical_json(art.portfolios).encode()
        files[f"{pid}/panel.json"] = canonical_json(art.panel).encode()
        pgi_entries = {
            p: PgiEntry(
                e["pgi"],
                e["n_p"],
                [Contributor(c["country"], c["weight"], c["gini"]) for c in e["contributors"]],
            )
            for p, e in art.pgi["products"].items()
        }
        files[f"{pid}/pgi.csv"] = _pgi_csv(
            ProductGiniTable(pgi_entries, art.pgi["excluded_products"])
        ).encode()
        graph = productspace.SpaceGraph(
            nodes=[
                productspace.SpaceNode(n["id"], n["size"], n["pgi"], n["pci"])
                for n in art.productspace["nodes"]
            ],
            links=[
                productspace.SpaceEdge(e["source"], e["target"], e["phi"])
                for e in art.productspace["links"]
            ],
        )
        files[f"{pid}/productspace_edges.csv"] = _edges_csv(graph).encode()

    content_digest = _sha256(
        b"".join(name.encode() + b"\0" + files[name] for name in sorted(files))
    )
    exclusions = {
        p.id: {
            "country_filter": frame.frames[p.id].excluded_countries,
            "trade_rejections": [],
        }
        for p in config.periods
    }
    metadata = {
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "input_digests": input_digests,
        "content_digest": content_digest,
        "periods": [
            {
                "id": p.id,
                "start_year": p.start_year,
                "end_year": p.end_year,
                "empty": frame.frames[p.id].empty,
            }
            for p in config.periods
        ],
        "thresholds": {
            "min_population": config.thresholds.min_population,
            "min_exports": config.thresholds.min_exports,
        },
        "productspace": {
            "threshold": config.proximity_threshold,
            "pooled": config.pooled_proximity,
        },
        "gini_dataset": config.gini_dataset,
        "exclusions": exclusions,
        "trade_parse": {
            "counts": parsed.counts,
            "rejections": [
                {"row": r.row, "reason": r.reason} for r in parsed.rejections
            ],
        },
    }

    out.mkdir(parents=True, exist_ok=True)
    for name, data in files.items():
        path = out / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    # Timestamp is metadata-only: not part of the content digest.
    (out / "metadata.json").write_text(
        json.dumps(round_floats(metadata), sort_keys=True, indent=2) + "\n"
    )
    return Snapshot.load(out)


@dataclass
class PeriodData:
    spec: PeriodSpec
    empty: bool
    countries: list[str]
    products: list[str]
    complexity: dict
    pgi_table: ProductGiniTable
    pgi_payload: dict
    productspace: dict
    portfolios: dict
    panel: dict
    adv: matrix.AdvantageMatrix | None = None
    shares: matrix.ShareMatrix | None = None

    def basket_matrices(self):
        """Minimal advantage/share matrices reconstructed from portfolios.

        Only RCA cells carry shares; that is all the what-if and
        expected-gini paths read.
        """
        if self.adv is None:
            creg = Registry(self.countries)
            preg = Registry(self.products)
            m = np.zeros((len(creg), len(preg)), dtype=np.int64)
            sv = np.zeros((len(creg), len(preg)))
            for c, info in self.portfolios["countries"].items():
                i = creg.index(c)
                for item in info["products"]:
                    j = preg.index(item["product"])
                    m[i, j] = 1
                    sv[i, j] = item["share"]
            self.adv = matrix.AdvantageMatrix(creg, preg, m)
            self.shares = matrix.ShareMatrix(creg, preg, sv)
        return self.adv, self.shares


class Snapshot:
    """Loaded snapshot directory: immutable, shared by CLI and HTTP."""

    def __init__(self, root: Path, metadata: dict, periods: dict[str, PeriodData]):
        self.root = root
        self.metadata = metadata
        self.periods = periods

    @classmethod
    def load(cls, root: str | Path) -> "Snapshot":
        root = Path(root)
        meta_path = root / "metadata.json"
        if not meta_path.exists():
            raise InputError(f"no snapshot at {root} (missing metadata.json)")
        metadata = json.loads(meta_path.read_text())
        periods: dict[str, PeriodData] = {}
        for pmeta in metadata["periods"]:
            pid = pmeta["id"]
            pdir = root / pid
            reg = json.loads((pdir / "registries.json").read_text())
            pgi_payload = json.loads((pdir / "pgi.json").read_text())
            entries = {
                p: PgiEntry(
                    e["pgi"],
                    e["n_p"],
                    [
                        Contributor(c["country"], c["weight"], c["gini"])
                        for c in e["contributors"]
                    ],
                )
                for p, e in pgi_payload["products"].items()
            }
            periods[pid] = PeriodData(
                spec=PeriodSpec(pid, pmeta["start_year"], pmeta["end_year"]),
                empty=pmeta.get("empty", False),
                countries=reg["countries"],
                products=reg["products"],
                complexity=json.loads((pdir / "complexity.json").read_text()),
                pgi_table=ProductGiniTable(entries, pgi_payload["excluded_products"]),
                pgi_payload=pgi_payload,
                productspace=json.loads((pdir / "productspace.json").read_text()),
                portfolios=json.loads((pdir / "portfolios.json").read_text()),
                panel=json.loads((pdir / "panel.json").read_text()),
            )
        return cls(root, metadata, periods)

    def period(self, pid: str) -> PeriodData:
        if pid not in self.periods:
            raise NotFoundError(f"unknown period {pid!r}", code="period_not_found")
        return self.periods[pid]

    @property
    def content_digest(self) -> str:
        return self.metadata["content_digest"]


def build_panel(snapshot: Snapshot, dependent: str = "gini") -> PanelDataset:
    """Panel dataset over (country, period) rows from a loaded snapshot.

    Columns: eci/fitness/entropy/hhi, ln_gdp, ln_gdp_sq, schooling, ln_pop,
    the six governance scores, `gini` (the build's primary dataset) and one
    `gini_<tag>` column per ingested Gini dataset.
    """
    rows: list[tuple[str, str]] = []
    raw: list[dict[str, float]] = []
    tags: set[str] = set()
    for pid, pdata in snapshot.periods.items():
        for c in pdata.countries:
            tags.update(pdata.panel["countries"].get(c, {}).get("gini_by_dataset", {}))

    for pid, pdata in snapshot.periods.items():
        if pdata.empty:
            continue
        for c in pdata.countries:
            scores = pdata.complexity["country"].get(c, {})
            panel = pdata.panel["countries"].get(c, {})
            row: dict[str, float] = {}
            for metric in METRICS:
                row[metric] = _nan(scores.get(metric))
            gdp = panel.get("gdp_ppp_pc")
            if gdp is not None and gdp > 0:
                row["ln_gdp"] = math.log(gdp)
                row["ln_gdp_sq"] = math.log(gdp) ** 2
            else:
                row["ln_gdp"] = float("nan")
                row["ln_gdp_sq"] = float("nan")
            pop = panel.get("population")
            row["ln_pop"] = math.log(pop) if pop is not None and pop > 0 else float("nan")
            row["schooling"] = _nan(panel.get("schooling"))
            gov = panel.get("governance", {})
            for g in GOVERNANCE_COLUMNS:
                row[g] = _nan(gov.get(g))
            row["gini"] = _nan(panel.get("gini"))
            by_dataset = panel.get("gini_by_dataset", {})
            for tag in tags:
                row[f"gini_{tag}"] = _nan(by_dataset.get(tag))
            rows.append((c, pid))
            raw.append(row)

    if not rows:
        raise InputError("snapshot has no retained (country, period) rows")
    columns = {k: [r[k] for r in raw] for k in raw[0]}
    return PanelDataset(rows, columns, dependent)


def _nan(v) -> float:
    return float("nan") if v is None else float(v)


def build_panel_from_csv(source: bytes | str, dependent: str) -> PanelDataset:
    """Panel from a plain CSV with country,period,<numeric columns...>."""
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    reader = csv.DictReader(io.StringIO(source))
    if reader.fieldnames is None or reader.fieldnames[:2] != ["country", "period"]:
        raise InputError("panel CSV must start with country,period columns")
    rows: list[tuple[str, str]] = []
    data: dict[str, list[float]] = {k: [] for k in reader.fieldnames[2:]}
    for row in reader:
        rows.append((row["country"], row["period"]))
        for k in data:
            cell = (row.get(k) or "").strip()
            data[k].append(float(cell) if cell else float("nan"))
    return PanelDataset(rows, data, dependent)
