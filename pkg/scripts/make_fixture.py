#!/usr/bin/env python3
"""Generate the bundled synthetic dataset and its frozen expected values.

Twelve retained economies (plus one too small to pass the population
filter) trade twenty products over two periods. Countries are arranged on
a complexity gradient: machinery-heavy exporters sit at the top with low
income inequality, commodity concentrators at the bottom with high
inequality, and one country (HHX) shifts from commodities into machinery
between the periods.

Numbers are chosen so the pipeline arithmetic is exact in IEEE doubles:
- every yearly export value is an integer multiple of 2^20 USD,
- every retained country's total is exactly 2^31 USD per year,
- every Gini is a multiple of 1/256.
Expected RCA / M / diversity / PGI / expected-Gini values are computed
here with plain loops, independent of the analytics package, and frozen
into expected_values.json for the acceptance suite.
"""

from __future__ import annotations

import json
import math
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "fixture"

UNIT = 2**20  # USD per allocation unit
BUDGET = 2**11  # units per country-year => row total 2^31 USD

COMMODITIES = ["0100", "0200", "0300", "0400", "0500", "0600", "0700", "0800", "0900", "1000"]
MACHINERY = ["7100", "7200", "7300", "7400", "7500", "7600", "7700", "7800", "7900", "8000"]
PRODUCTS = COMMODITIES + MACHINERY

# Countries ordered by complexity tier (most complex first).
TIERS = ["AAX", "BBX", "CCX", "DDX", "EEX", "FFX", "GGX", "HHX", "IIX", "JJX", "KKX", "LLX"]
SMALL = "MMX"  # population below the 1.5M filter

PERIODS = [
    {"id": "2000-2004", "start": 2000, "end": 2004},
    {"id": "2005-2008", "start": 2005, "end": 2008},
]

# Diversification set and machinery budget fraction per tier and period.
def product_set(country: str, period: str) -> list[str]:
    r = TIERS.index(country)
    n_mach = [10, 9, 7, 5, 4, 3, 2, 1, 0, 0, 0, 0][r]
    n_comm = [10, 10, 10, 10, 10, 10, 10, 10, 10, 8, 6, 3][r]
    if period == "2005-2008":
        if country == "HHX":  # the structural-shift economy
            n_mach, n_comm = 4, 10
        if country == "JJX":
            n_comm = 7
        if country == "KKX":
            n_comm = 7
    return COMMODITIES[:n_comm] + MACHINERY[:n_mach]


def machinery_fraction(country: str, period: str) -> float:
    r = TIERS.index(country)
    psi = [0.80, 0.75, 0.70, 0.65, 0.55, 0.45, 0.30, 0.15, 0.0, 0.0, 0.0, 0.0][r]
    if period == "2005-2008" and country == "HHX":
        psi = 0.55
    return psi


# Gini levels on the 1/256 grid, rising along the complexity gradient.
GINI_STEPS = {
    "2000-2004": [70, 76, 85, 90, 99, 104, 113, 120, 128, 137, 146, 152],
    # HHX (index 7) drops 12 steps after its shift into machinery.
    "2005-2008": [71, 75, 86, 91, 98, 105, 112, 108, 129, 138, 145, 153],
}

POPULATION = {
    "AAX": 84.0e6, "BBX": 9.5e6, "CCX": 52.0e6, "DDX": 23.0e6,
    "EEX": 47.5e6, "FFX": 14.0e6, "GGX": 31.0e6, "HHX": 27.0e6,
    "IIX": 105.0e6, "JJX": 18.5e6, "KKX": 7.2e6, "LLX": 11.8e6,
    SMALL: 1.0e6,
}


def allocate_units(country: str, period: str, rng: random.Random) -> dict[str, int]:
    """Integer units per product, summing exactly to BUDGET."""
    prods = product_set(country, period)
    psi = machinery_fraction(country, period)
    mach = [p for p in prods if p in MACHINERY]
    comm = [p for p in prods if p in COMMODITIES]
    weights: dict[str, float] = {}
    for p in comm:
        weights[p] = (1.0 - psi) / len(comm) * rng.uniform(0.6, 1.4)
    for p in mach:
        weights[p] = psi / len(mach) * rng.uniform(0.6, 1.4)
    total = sum(weights.values())
    raw = {p: BUDGET * w / total for p, w in weights.items()}
    units = {p: max(1, int(raw[p])) for p in prods}
    # Distribute the remainder to the largest fractional parts.
    leftover = BUDGET - sum(units.values())
    order = sorted(prods, key=lambda p: (-(raw[p] - int(raw[p])), p))
    i = 0
    while leftover != 0:
        p = order[i % len(order)]
        step = 1 if leftover > 0 else -1
        if units[p] + step >= 1:
            units[p] += step
            leftover -= step
        i += 1
    assert sum(units.values()) == BUDGET
    return units


def build_allocations() -> dict[str, dict[str, dict[str, int]]]:
    rng = random.Random(20231115)
    allocations: dict[str, dict[str, dict[str, int]]] = {}
    for period in PERIODS:
        pid = period["id"]
        allocations[pid] = {}
        for country in TIERS + [SMALL]:
            if country == SMALL:
                # Mid-tier commodity profile; filtered out by population.
                prods = COMMODITIES[:6]
                units = {p: BUDGET // 6 for p in prods}
                units[prods[0]] += BUDGET - sum(units.values())
                allocations[pid][country] = units
            else:
                allocations[pid][country] = allocate_units(country, pid, rng)
    return allocations


def expected_tables(allocations: dict) -> dict:
    """Independent plain-loop evaluation of RCA, M, marginals, PGI, EG."""
    expected: dict[str, dict] = {}
    for period in PERIODS:
        pid = period["id"]
        retained = TIERS  # MMX fails the population filter
        # Yearly value equals the period-mean value by construction.
        x = {
            c: {p: float(units * UNIT) for p, units in allocations[pid][c].items()}
            for c in retained
        }
        products = sorted({p for c in retained for p in x[c]})
        row_tot = {c: sum(x[c][p] for p in sorted(x[c])) for c in retained}
        col_tot = {
            p: sum(x[c].get(p, 0.0) for c in sorted(retained)) for p in products
        }
        world = sum(row_tot[c] for c in sorted(retained))
        for c in retained:
            assert row_tot[c] == float(2**31), (c, row_tot[c])

        rca = {
            c: {
                p: (x[c][p] / row_tot[c]) / (col_tot[p] / world)
                for p in sorted(x[c])
                if x[c][p] > 0
            }
            for c in retained
        }
        m = {c: sorted(p for p, v in rca[c].items() if v >= 1.0) for c in retained}
        diversity = {c: len(m[c]) for c in retained}
        ubiquity = {
            p: sum(1 for c in retained if p in m[c]) for p in products
        }
        assert all(d > 0 for d in diversity.values())
        assert all(u > 0 for u in ubiquity.values())

        gini = {
            c: GINI_STEPS[pid][TIERS.index(c)] / 256.0 for c in retained
        }
        shares = {c: {p: x[c][p] / row_tot[c] for p in x[c]} for c in retained}

        pgi: dict[str, float] = {}
        n_p: dict[str, float] = {}
        for p in products:
            num = 0.0
            den = 0.0
            for c in sorted(retained):
                if p in m[c]:
                    num += shares[c][p] * gini[c]
                    den += shares[c][p]
            if den > 0:
                pgi[p] = num / den
                n_p[p] = den

        eg: dict[str, float] = {}
        for c in sorted(retained):
            num = 0.0
            den = 0.0
            for p in m[c]:
                if p in pgi:
                    num += shares[c][p] * pgi[p]
                    den += shares[c][p]
            if den > 0:
                eg[c] = num / den

        # Connectivity of the co-export graph (plain BFS).
        seen = {retained[0]}
        stack = [retained[0]]
        while stack:
            cur = stack.pop()
            for other in retained:
                if other not in seen and set(m[cur]) & set(m[other]):
                    seen.add(other)
                    stack.append(other)
        assert seen == set(retained), "fixture co-export graph must be connected"

        expected[pid] = {
            "countries": sorted(retained),
            "products": products,
            "rca": {c: rca[c] for c in sorted(retained)},
            "m": {c: m[c] for c in sorted(retained)},
            "diversity": {c: diversity[c] for c in sorted(retained)},
            "ubiquity": ubiquity,
            "gini": {c: gini[c] for c in sorted(retained)},
            "pgi": pgi,
            "n_p": n_p,
            "expected_gini": eg,
        }
    return expected


def write_files(allocations: dict, expected: dict) -> None:
    OUT.mkdir(parents=True, exist_ok=True)

    lines = ["year,origin,sitc4,value_usd"]
    for period in PERIODS:
        pid = period["id"]
        for year in range(period["start"], period["end"] + 1):
            for country in sorted(allocations[pid]):
                for p in sorted(allocations[pid][country]):
                    value = allocations[pid][country][p] * UNIT
                    lines.append(f"{year},{country},{p},{value}")
    (OUT / "trade.csv").write_text("\n".join(lines) + "\n")

    rng = random.Random(77)
    gdp_noise = {c: rng.uniform(-0.55, 0.55) for c in TIERS}
    lines = ["country,year,gini"]
    for period in PERIODS:
        pid = period["id"]
        for c in TIERS:
            lines.append(
                f"{c},{period['start']},{GINI_STEPS[pid][TIERS.index(c)] / 256.0!r}"
            )
    (OUT / "ehii.csv").write_text("\n".join(lines) + "\n")

    lines = ["country,year,gdp_ppp_pc,schooling,population"]
    for period in PERIODS:
        for c in TIERS + [SMALL]:
            r = TIERS.index(c) if c in TIERS else 7
            gdp = 40000.0 * math.exp(-0.16 * r + gdp_noise.get(c, 0.0))
            schooling = max(1.0, 11.5 - 0.55 * r + rng.uniform(-0.8, 0.8))
            lines.append(
                f"{c},{period['start']},{gdp:.2f},{schooling:.2f},"
                f"{POPULATION[c]:.0f}"
            )
    (OUT / "wdi.csv").write_text("\n".join(lines) + "\n")

    gov_vars = [
        "rule_of_law",
        "corruption_control",
        "government_effectiveness",
        "political_stability",
        "regulatory_quality",
        "voice_accountability",
    ]
    lines = ["country,year," + ",".join(gov_vars)]
    for c in TIERS:
        r = TIERS.index(c)
        vals = [
            f"{max(-2.5, min(2.5, 1.8 - 0.3 * r + rng.uniform(-0.4, 0.4))):.3f}"
            for _ in gov_vars
        ]
        lines.append(f"{c},2005," + ",".join(vals))
    (OUT / "governance.csv").write_text("\n".join(lines) + "\n")

    (OUT / "periods.json").write_text(json.dumps(PERIODS, indent=2) + "\n")
    (OUT / "config.json").write_text(
        json.dumps(
            {
                "trade": "trade.csv",
                "panel": {
                    "ehii": "ehii.csv",
                    "wdi": "wdi.csv",
                    "governance": "governance.csv",
                },
                "periods": "periods.json",
                "gini_dataset": "ehii",
                "productspace": {"threshold": 0.55, "pooled": False},
                "output": "snapshot",
            },
            indent=2,
        )
        + "\n"
    )
    (OUT / "expected_values.json").write_text(json.dumps(expected, indent=2) + "\n")


def main() -> None:
    allocations = build_allocations()
    expected = expected_tables(allocations)
    write_files(allocations, expected)
    for pid, table in expected.items():
        n_m = sum(len(v) for v in table["m"].values())
        print(
            f"{pid}: {len(table['countries'])} countries, "
            f"{len(table['products'])} products, {n_m} RCA cells, "
            f"{len(table['pgi'])} PGIs"
        )
    print(f"fixture written to {OUT}")


if __name__ == "__main__":
    main()
