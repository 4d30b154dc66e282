"""Product-level inequality: PGI, expected country Gini, what-if edits.

The Product Gini Index of product p is the weighted average of its
RCA-exporters' Gini coefficients, weighted by the share the product
represents in each exporter's basket:

    PGI_p = (1/N_p) * sum_c M_cp s_cp Gini_c,   N_p = sum_c M_cp s_cp

with both sums restricted to countries that have Gini data. The expected
Gini of a country is the dual: the N-weighted average of the PGIs in its
RCA basket. What-if scenarios re-evaluate that average after adding or
removing products while holding the PGI table fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .errors import ValidationError
from .matrix import AdvantageMatrix, ShareMatrix


class Contributor(NamedTuple):
    country: str
    weight: float  # M_cp * s_cp
    gini: float


@dataclass
class PgiEntry:
    pgi: float
    n_p: float
    contributors: list[Contributor]  # sorted by weight descending


@dataclass
class ProductGiniTable:
    entries: dict[str, PgiEntry]
    excluded_products: list[str] = field(default_factory=list)  # exporters lack Gini

    def __contains__(self, product: str) -> bool:
        return product in self.entries

    def pgi(self, product: str) -> float:
        return self.entries[product].pgi


class BasketEdit(NamedTuple):
    product: str
    share: float  # weight used in the scenario basket (pre-normalization)


@dataclass
class WhatIfResult:
    country: str
    baseline: float
    scenario: float
    delta: float
    added: list[BasketEdit]
    removed: list[str]


def pgi_table(
    adv: AdvantageMatrix, s: ShareMatrix, gini: Mapping[str, float]
) -> ProductGiniTable:
    """Weighted-average Gini per product over its RCA exporters.

    Countries without a Gini value are left out of both the numerator and
    the normalizer. Products whose exporters all lack Gini data are
    excluded and listed in the report.
    """
    if adv.countries != s.countries or adv.products != s.products:
        raise ValidationError("advantage and share matrices must share registries")
    entries: dict[str, PgiEntry] = {}
    excluded: list[str] = []
    covered = [c for c in adv.countries if c in gini and gini[c] is not None]
    cov_idx = [adv.countries.index(c) for c in covered]
    for j, product in enumerate(adv.products):
        contributors = []
        for c, i in zip(covered, cov_idx):
            if adv.m[i, j]:
                weight = float(adv.m[i, j] * s.values[i, j])
                contributors.append(Contributor(c, weight, float(gini[c])))
        n_p = sum(w for _, w, _ in contributors)
        if n_p == 0:
            excluded.append(product)
            continue
        value = sum(w * g for _, w, g in contributors) / n_p
        # The weighted mean provably lies within the contributor Gini range;
        # clamp away the last-ulp float noise so the bound holds exactly.
        ginis = [g for _, _, g in contributors]
        value = min(max(value, min(ginis)), max(ginis))
        contributors.sort(key=lambda t: (-t.weight, t.country))
        entries[product] = PgiEntry(value, n_p, contributors)
    return ProductGiniTable(entries, excluded)


def expected_gini(
    country: str, adv: AdvantageMatrix, s: ShareMatrix, table: ProductGiniTable
) -> float | None:
    """N-weighted mean PGI of the country's RCA basket; None when empty."""
    i = adv.countries.index(country)
    num = 0.0
    den = 0.0
    for j, product in enumerate(adv.products):
        if adv.m[i, j] and product in table.entries:
            w = float(s.values[i, j])
            num += w * table.entries[product].pgi
            den += w
    if den == 0:
        return None
    return num / den


def whatif(
    country: str,
    add: Sequence[str] | Mapping[str, float],
    remove: Sequence[str],
    adv: AdvantageMatrix,
    s: ShareMatrix,
    table: ProductGiniTable,
) -> WhatIfResult:
    """Expected-Gini change from editing a country's RCA basket.

    Added products get a hypothetical weight equal to the world-mean
    contributor weight of that product (N_p / number of contributors)
    unless `add` maps products to explicit shares. Weights are renormalized
    over the scenario basket; the PGI table is held fixed.
    """
    if country not in adv.countries:
        raise ValidationError(f"unknown country {country!r}", country=country)
    add_shares: dict[str, float | None]
    if isinstance(add, Mapping):
        add_shares = dict(add)
    else:
        add_shares = {p: None for p in add}
    removed = list(remove)
    overlap = set(add_shares) & set(removed)
    if overlap:
        raise ValidationError(
            f"products cannot be both added and removed: {sorted(overlap)}",
            products=sorted(overlap),
        )

    i = adv.countries.index(country)
    current = {
        p: float(s.values[i, j]) for j, p in enumerate(adv.products) if adv.m[i, j]
    }
    for p in add_shares:
        if p not in adv.products:
            raise ValidationError(f"unknown product {p!r}", product=p)
        if p in current:
            raise ValidationError(
                f"product {p!r} is already in the country's RCA basket", product=p
            )
        if p not in table.entries:
            raise ValidationError(
                f"product {p!r} has no PGI (no Gini-covered exporters)", product=p
            )
    for p in removed:
        if p not in current:
            raise ValidationError(
                f"product {p!r} is not in the country's RCA basket", product=p
            )

    baseline = expected_gini(country, adv, s, table)
    if baseline is None:
        raise ValidationError(
            f"country {country!r} has no RCA product with a PGI", country=country
        )

    added: list[BasketEdit] = []
    scenario_weights: dict[str, float] = {
        p: w for p, w in current.items() if p not in set(removed)
    }
    for p in sorted(add_shares):
        share = add_shares[p]
        if share is None:
            entry = table.entries[p]
            share = entry.n_p / len(entry.contributors)
        scenario_weights[p] = float(share)
        added.append(BasketEdit(p, float(share)))

    basket = sorted(
        (p, w) for p, w in scenario_weights.items() if p in table.entries
    )
    total = sum(w for _, w in basket)
    if not basket or total == 0:
        raise ValidationError("scenario basket is empty", country=country)
    # Accumulation order matches expected_gini (sorted product codes) so a
    # no-op edit set reproduces the baseline float exactly.
    scenario = sum(w * table.entries[p].pgi for p, w in basket) / total
    return WhatIfResult(
        country=country,
        baseline=baseline,
        scenario=scenario,
        delta=scenario - baseline,
        added=added,
        removed=sorted(removed),
    )


def pgi_pci_correlation(
    table: ProductGiniTable, pci_scores: Mapping[str, float | None]
) -> float | None:
    """Pearson r between PGI and PCI over products carrying both (diagnostic)."""
    pairs = [
        (entry.pgi, pci_scores[p])
        for p, entry in table.entries.items()
        if pci_scores.get(p) is not None
    ]
    if len(pairs) < 2:
        return None
    x = np.array([a for a, _ in pairs])
    y = np.array([b for _, b in pairs])
    sx = x.std()
    sy = y.std()
    if sx == 0 or sy == 0:
        return None
    return float(((x - x.mean()) * (y - y.mean())).mean() / (sx * sy))
