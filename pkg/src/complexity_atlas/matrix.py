"""Country x product matrix transforms.

Turns raw export values into revealed comparative advantage (RCA), the
binary advantage matrix M with its diversity/ubiquity marginals, and
row-normalized export shares.

Conventions:
- RCA_cp = (X_cp / sum_p' X_cp') / (sum_c' X_c'p / sum X)
- M_cp = 1 iff RCA_cp >= 1 (boundary inclusive)
- diversity k_c0 = row sum of M, ubiquity k_p0 = column sum of M
- s_cp = X_cp / sum_p' X_cp'
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyWorldTradeError
from .registry import Registry


@dataclass
class ExportMatrix:
    """Export values X_cp in USD over sorted country/product registries."""

    countries: Registry
    products: Registry
    values: np.ndarray  # shape (C, P), float64, >= 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.countries), len(self.products)):
            raise ValueError(
                f"matrix shape {self.values.shape} does not match registries "
                f"({len(self.countries)}, {len(self.products)})"
            )
        if np.any(self.values < 0):
            raise ValueError("export values must be non-negative")

    @classmethod
    def from_cells(cls, cells: dict[tuple[str, str], float]) -> "ExportMatrix":
        countries = Registry(c for c, _ in cells)
        products = Registry(p for _, p in cells)
        values = np.zeros((len(countries), len(products)))
        for (c, p), v in cells.items():
            values[countries.index(c), products.index(p)] += v
        return cls(countries, products, values)

    def restrict(self, countries=None, products=None) -> "ExportMatrix":
        """Submatrix on the given code subsets (None keeps everything)."""
        creg = self.countries if countries is None else self.countries.subset(countries)
        preg = self.products if products is None else self.products.subset(products)
        rows = [self.countries.index(c) for c in creg]
        cols = [self.products.index(p) for p in preg]
        return ExportMatrix(creg, preg, self.values[np.ix_(rows, cols)])

    def world_total(self) -> float:
        return float(self.values.sum())

    def product_world_trade(self) -> dict[str, float]:
        totals = self.values.sum(axis=0)
        return {p: float(totals[j]) for j, p in enumerate(self.products)}

    def to_triplets(self) -> dict:
        """Sparse wire format {rows, cols, entries:[[i,j,v],...]}, sorted indices."""
        entries = []
        rows, cols = np.nonzero(self.values)
        for i, j in zip(rows.tolist(), cols.tolist()):
            entries.append([i, j, float(self.values[i, j])])
        return {
            "rows": list(self.countries),
            "cols": list(self.products),
            "entries": entries,
        }

    @classmethod
    def from_triplets(cls, payload: dict) -> "ExportMatrix":
        countries = Registry(payload["rows"])
        products = Registry(payload["cols"])
        if list(countries) != list(payload["rows"]) or list(products) != list(payload["cols"]):
            raise ValueError("triplet registries must be sorted")
        values = np.zeros((len(countries), len(products)))
        for i, j, v in payload["entries"]:
            values[i, j] = v
        return cls(countries, products, values)


@dataclass
class RcaMatrix:
    countries: Registry
    products: Registry
    values: np.ndarray
    dropped_countries: tuple[str, ...] = ()
    dropped_products: tuple[str, ...] = ()


@dataclass
class AdvantageMatrix:
    countries: Registry
    products: Registry
    m: np.ndarray  # binary, shape (C, P)
    diversity: np.ndarray = field(init=False)  # k_c0, per country
    ubiquity: np.ndarray = field(init=False)  # k_p0, per product

    def __post_init__(self):
        self.m = np.asarray(self.m)
        if not np.isin(self.m, (0, 1)).all():
            raise ValueError("advantage matrix entries must be 0 or 1")
        self.m = self.m.astype(np.int64)
        self.diversity = self.m.sum(axis=1)
        self.ubiquity = self.m.sum(axis=0)

    def diversity_of(self, country: str) -> int:
        return int(self.diversity[self.countries.index(country)])

    def ubiquity_of(self, product: str) -> int:
        return int(self.ubiquity[self.products.index(product)])


@dataclass
class ShareMatrix:
    """Rows s_cp sum to 1 for every retained country."""

    countries: Registry
    products: Registry
    values: np.ndarray
    dropped_countries: tuple[str, ...] = ()


def rca(x: ExportMatrix) -> RcaMatrix:
    """Revealed comparative advantage of every retained country/product cell.

    Countries and products with zero total trade are dropped and reported;
    the remaining world defines all denominators.
    """
    if x.world_total() <= 0:
        raise EmptyWorldTradeError("empty world trade: all export values are zero")

    row_tot = x.values.sum(axis=1)
    col_tot = x.values.sum(axis=0)
    drop_c = tuple(c for i, c in enumerate(x.countries) if row_tot[i] == 0)
    drop_p = tuple(p for j, p in enumerate(x.products) if col_tot[j] == 0)
    if drop_c or drop_p:
        x = x.restrict(
            countries=[c for c in x.countries if c not in set(drop_c)],
            products=[p for p in x.products if p not in set(drop_p)],
        )
        row_tot = x.values.sum(axis=1)
        col_tot = x.values.sum(axis=0)

    world = x.values.sum()
    num = x.values / row_tot[:, None]
    den = col_tot / world
    values = num / den[None, :]
    return RcaMatrix(x.countries, x.products, values, drop_c, drop_p)


def advantage(r: RcaMatrix, threshold: float = 1.0) -> AdvantageMatrix:
    """Binarize RCA at the (inclusive) threshold."""
    if not np.isfinite(r.values).all():
        raise ValueError("RCA matrix contains non-finite values")
    m = (r.values >= threshold).astype(np.int64)
    return AdvantageMatrix(r.countries, r.products, m)


def trim_advantage(adv: AdvantageMatrix) -> tuple[AdvantageMatrix, dict]:
    """Drop zero-diversity countries and zero-ubiquity products.

    Required before the coupling-matrix construction, which divides by both
    marginals. A single pass suffices: an all-zero row cannot contribute to
    any column sum and vice versa. Returns the trimmed matrix plus a report
    of removed codes for snapshot metadata.
    """
    keep_c = adv.diversity > 0
    keep_p = adv.ubiquity > 0
    report = {
        "countries_removed": [c for i, c in enumerate(adv.countries) if not keep_c[i]],
        "products_removed": [p for j, p in enumerate(adv.products) if not keep_p[j]],
    }
    if keep_c.all() and keep_p.all():
        return adv, report
    creg = Registry(c for i, c in enumerate(adv.countries) if keep_c[i])
    preg = Registry(p for j, p in enumerate(adv.products) if keep_p[j])
    m = adv.m[np.ix_(keep_c.nonzero()[0], keep_p.nonzero()[0])]
    return AdvantageMatrix(creg, preg, m), report


def shares(x: ExportMatrix) -> ShareMatrix:
    """Row-normalized export shares; zero-total rows are dropped with a report."""
    row_tot = x.values.sum(axis=1)
    drop_c = tuple(c for i, c in enumerate(x.countries) if row_tot[i] == 0)
    if drop_c:
        x = x.restrict(countries=[c for c in x.countries if c not in set(drop_c)])
        row_tot = x.values.sum(axis=1)
    values = x.values / row_tot[:, None]
    return ShareMatrix(x.countries, x.products, values, drop_c)
