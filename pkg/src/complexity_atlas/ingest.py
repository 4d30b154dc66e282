"""Raw table parsing, sample filters, and decade-panel aggregation.

Trade rows are parsed into flows with per-row structured rejections (no
silent coercion); panel indicators are parsed from long-format CSVs with
the dataset tag taken from the source name. build_frame averages yearly
exports over each period's calendar years (absent trade counts as zero),
averages panel variables over available years only, and applies the
population / total-exports sample filter per period.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError, ValidationError
from .matrix import ExportMatrix
from .registry import Registry

DEFAULT_TRADE_SCHEMA = {
    "year": "year",
    "origin": "origin",
    "product": "sitc4",
    "value": "value_usd",
}

# Five default analysis windows; overridable via a periods config file.
DEFAULT_PERIODS = (
    ("1963-1969", 1963, 1969),
    ("1970-1979", 1970, 1979),
    ("1980-1989", 1980, 1989),
    ("1990-1999", 1990, 1999),
    ("2000-2008", 2000, 2008),
)

GOVERNANCE_VARS = (
    "rule_of_law",
    "corruption_control",
    "government_effectiveness",
    "political_stability",
    "regulatory_quality",
    "voice_accountability",
)


@dataclass(frozen=True)
class TradeFlow:
    year: int
    origin: str
    product: str
    value: float


@dataclass(frozen=True)
class Rejection:
    row: int  # 1-based data row number (header excluded)
    reason: str


@dataclass
class TradeParseResult:
    flows: list[TradeFlow]
    rejections: list[Rejection]

    @property
    def counts(self) -> dict:
        return {
            "rows": len(self.flows) + len(self.rejections),
            "flows": len(self.flows),
            "rejected": len(self.rejections),
        }


@dataclass(frozen=True)
class PeriodSpec:
    id: str
    start_year: int
    end_year: int

    def __post_init__(self):
        if self.start_year > self.end_year:
            raise ValidationError(
                f"period {self.id!r}: start {self.start_year} > end {self.end_year}"
            )

    @property
    def years(self) -> range:
        return range(self.start_year, self.end_year + 1)

    @property
    def n_years(self) -> int:
        return self.end_year - self.start_year + 1


def validate_periods(periods: Sequence[PeriodSpec]) -> None:
    taken: set[int] = set()
    for p in periods:
        overlap = taken & set(p.years)
        if overlap:
            raise ValidationError(
                f"period {p.id!r} overlaps an earlier period on year {min(overlap)}"
            )
        taken |= set(p.years)


def load_periods(source: str | bytes | None) -> list[PeriodSpec]:
    """Periods from a JSON list of {id, start, end}; None gives the defaults."""
    if source is None:
        periods = [PeriodSpec(i, s, e) for i, s, e in DEFAULT_PERIODS]
    else:
        raw = json.loads(source)
        periods = [
            PeriodSpec(str(item["id"]), int(item["start"]), int(item["end"]))
            for item in raw
        ]
    validate_periods(periods)
    return periods


@dataclass
class FilterThresholds:
    min_population: float = 1.5e6  # strictly-greater-than cut
    min_exports: float = 1e9  # on period-mean total exports, USD


@dataclass
class CountryPanelRecord:
    country: str
    period: str
    gini: float | None = None  # primary dataset, [0, 1]
    gini_by_dataset: dict[str, float] = field(default_factory=dict)
    gdp_ppp_pc: float | None = None
    schooling: float | None = None
    population: float | None = None
    governance: dict[str, float] = field(default_factory=dict)


@dataclass
class PeriodFrame:
    period: PeriodSpec
    exports: ExportMatrix
    panel: dict[str, CountryPanelRecord]
    excluded_countries: dict[str, str]  # code -> reason
    empty: bool = False


@dataclass
class AnalysisFrame:
    periods: list[PeriodSpec]
    frames: dict[str, PeriodFrame]


def _decode(source: bytes | str) -> io.StringIO:
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    return io.StringIO(source)


def parse_trade_table(
    source: bytes | str,
    schema: Mapping[str, str] | None = None,
    year_range: tuple[int, int] | None = None,
) -> TradeParseResult:
    """Parse a delimited trade table into flows plus per-row rejections.

    The schema maps the logical fields year/origin/product/value to column
    names. A missing column is a whole-file error; any bad cell rejects
    only its row, with the input order preserved across flows/rejections.
    """
    schema = dict(DEFAULT_TRADE_SCHEMA, **(schema or {}))
    reader = csv.DictReader(_decode(source))
    if reader.fieldnames is None:
        raise InputError("trade table has no header row")
    missing = [v for v in schema.values() if v not in reader.fieldnames]
    if missing:
        raise InputError(f"trade table is missing columns: {missing}")

    flows: list[TradeFlow] = []
    rejections: list[Rejection] = []
    for row_no, row in enumerate(reader, start=1):
        def reject(reason: str) -> None:
            rejections.append(Rejection(row_no, reason))

        try:
            year = int(row[schema["year"]].strip())
        except (ValueError, AttributeError):
            reject(f"malformed year {row[schema['year']]!r}")
            continue
        if year_range is not None and not year_range[0] <= year <= year_range[1]:
            reject(f"year {year} outside configured range {year_range}")
            continue
        origin = (row[schema["origin"]] or "").strip()
        if len(origin) != 3 or not origin.isalpha():
            reject(f"origin {origin!r} is not an ISO-3 code")
            continue
        product = (row[schema["product"]] or "").strip()
        if len(product) != 4:
            reject(f"product code {product!r} is not 4 characters")
            continue
        try:
            value = float(row[schema["value"]].strip())
        except (ValueError, AttributeError):
            reject(f"malformed value {row[schema['value']]!r}")
            continue
        if not np.isfinite(value):
            reject(f"non-finite value {value!r}")
            continue
        if value < 0:
            reject("negative value")
            continue
        flows.append(TradeFlow(year, origin.upper(), product, value))
    return TradeParseResult(flows, rejections)


def parse_panel_tables(sources: Mapping[str, bytes | str]) -> dict:
    """Parse named long-format indicator CSVs into yearly observations.

    Each source is `country,year,<var>[,<var>...]`. A column named `gini`
    is tagged by the source name (`gini:<source>`); Gini series on a 0-100
    scale (max > 1.5) are rescaled to [0, 1]. Conflicting duplicate values
    for the same (country, year, variable) raise an error naming them.

    Returns {(country, year): {variable: value}} with tagged gini keys.
    """
    observations: dict[tuple[str, int], dict[str, float]] = {}
    gini_keys: set[str] = set()
    for name, source in sorted(sources.items()):
        reader = csv.DictReader(_decode(source))
        if reader.fieldnames is None or len(reader.fieldnames) < 3:
            raise InputError(f"panel table {name!r} needs country,year,<variable>")
        head = [h.strip() for h in reader.fieldnames]
        if head[0] != "country" or head[1] != "year":
            raise InputError(
                f"panel table {name!r} must start with country,year columns"
            )
        for row_no, row in enumerate(reader, start=1):
            country = (row["country"] or "").strip().upper()
            try:
                year = int(row["year"].strip())
            except (ValueError, AttributeError):
                raise InputError(f"{name}:{row_no}: malformed year {row['year']!r}")
            cell = observations.setdefault((country, year), {})
            for var in head[2:]:
                raw = (row.get(var) or "").strip()
                if raw == "":
                    continue  # absent, not zero
                try:
                    value = float(raw)
                except ValueError:
                    raise InputError(f"{name}:{row_no}: malformed {var} {raw!r}")
                key = f"gini:{name}" if var == "gini" else var
                if key.startswith("gini:"):
                    gini_keys.add(key)
                if key in cell and cell[key] != value:
                    raise InputError(
                        f"conflicting duplicate for ({country}, {year}, {key}): "
                        f"{cell[key]} vs {value}"
                    )
                cell[key] = value

    _rescale_gini(observations, gini_keys)
    _validate_panel(observations)
    return observations


def _rescale_gini(observations: dict, gini_keys: Iterable[str]) -> None:
    for key in gini_keys:
        values = [cell[key] for cell in observations.values() if key in cell]
        if values and max(values) > 1.5:
            for cell in observations.values():
                if key in cell:
                    cell[key] = cell[key] / 100.0


def _validate_panel(observations: dict) -> None:
    for (country, year), cell in observations.items():
        for key, value in cell.items():
            if key.startswith("gini:") and not 0.0 <= value <= 1.0:
                raise InputError(
                    f"({country}, {year}) {key}={value} outside [0, 1] after scaling"
                )
            if key == "population" and value <= 0:
                raise InputError(f"({country}, {year}) population must be positive")
            if key in GOVERNANCE_VARS and not -3.0 <= value <= 3.0:
                raise InputError(
                    f"({country}, {year}) {key}={value} outside [-3, 3]"
                )


def _period_mean(
    observations: dict, country: str, period: PeriodSpec, key: str
) -> float | None:
    """Mean over the years with data inside the period; None when none."""
    values = [
        observations[(country, y)][key]
        for y in period.years
        if (country, y) in observations and key in observations[(country, y)]
    ]
    if not values:
        return None
    return float(sum(values) / len(values))


def build_frame(
    flows: Sequence[TradeFlow],
    observations: Mapping[tuple[str, int], Mapping[str, float]],
    periods: Sequence[PeriodSpec],
    thresholds: FilterThresholds | None = None,
    gini_dataset: str | None = None,
) -> AnalysisFrame:
    """Aggregate flows and indicators into one filtered frame per period.

    X_cp is the mean yearly export value over the period's calendar years,
    with absent years counting as zero. Countries enter a period's frame
    only when period-mean population and period-mean total exports both
    clear the thresholds; exclusions are reported per period, and a period
    with no surviving country yields an explicit empty frame.
    """
    thresholds = thresholds or FilterThresholds()
    validate_periods(list(periods))
    gini_tags = sorted(
        {k.split(":", 1)[1] for cell in observations.values() for k in cell if k.startswith("gini:")}
    )
    primary_tag = gini_dataset
    if primary_tag is None:
        for candidate in ("ehii", *gini_tags):
            if candidate in gini_tags:
                primary_tag = candidate
                break

    by_period: dict[str, dict[tuple[str, str], float]] = {p.id: {} for p in periods}
    for flow in flows:
        for p in periods:
            if p.start_year <= flow.year <= p.end_year:
                key = (flow.origin, flow.product)
                by_period[p.id][key] = by_period[p.id].get(key, 0.0) + flow.value
                break

    frames: dict[str, PeriodFrame] = {}
    for p in periods:
        sums = by_period[p.id]
        totals: dict[str, float] = {}
        for (c, _), v in sums.items():
            totals[c] = totals.get(c, 0.0) + v

        retained: list[str] = []
        excluded: dict[str, str] = {}
        for c in sorted(totals):
            population = _period_mean(observations, c, p, "population")
            mean_exports = totals[c] / p.n_years
            if population is None:
                excluded[c] = "no population data"
            elif population <= thresholds.min_population:
                excluded[c] = (
                    f"population {population:.6g} <= {thresholds.min_population:.6g}"
                )
            elif mean_exports <= thresholds.min_exports:
                excluded[c] = (
                    f"total exports {mean_exports:.6g} <= {thresholds.min_exports:.6g}"
                )
            else:
                retained.append(c)

        products = sorted({prod for (c, prod) in sums if c in set(retained)})
        countries = Registry(retained)
        preg = Registry(products)
        values = np.zeros((len(countries), len(preg)))
        for (c, prod), v in sums.items():
            if c in countries:
                values[countries.index(c), preg.index(prod)] = v / p.n_years
        exports = ExportMatrix(countries, preg, values)

        panel: dict[str, CountryPanelRecord] = {}
        for c in countries:
            ginis = {
                tag: g
                for tag in gini_tags
                if (g := _period_mean(observations, c, p, f"gini:{tag}")) is not None
            }
            panel[c] = CountryPanelRecord(
                country=c,
                period=p.id,
                gini=ginis.get(primary_tag) if primary_tag else None,
                gini_by_dataset=ginis,
                gdp_ppp_pc=_period_mean(observations, c, p, "gdp_ppp_pc"),
                schooling=_period_mean(observations, c, p, "schooling"),
                population=_period_mean(observations, c, p, "population"),
                governance={
                    v: g
                    for v in GOVERNANCE_VARS
                    if (g := _period_mean(observations, c, p, v)) is not None
                },
            )
        frames[p.id] = PeriodFrame(
            period=p,
            exports=exports,
            panel=panel,
            excluded_countries=excluded,
            empty=len(countries) == 0,
        )
    return AnalysisFrame(list(periods), frames)
