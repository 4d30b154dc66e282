"""Read-only queries over a loaded snapshot.

This is the single source of truth for response payloads: the CLI prints
them and the HTTP layer returns them, both through canonical_json, so the
two surfaces are byte-identical for the same query.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .. import inequality
from ..errors import NotFoundError, ValidationError
from ..snapshot import METRICS, Snapshot


def periods(snap: Snapshot) -> dict:
    return {
        "periods": [
            {
                "id": p["id"],
                "start_year": p["start_year"],
                "end_year": p["end_year"],
                "empty": p["empty"],
            }
            for p in snap.metadata["periods"]
        ],
        "content_digest": snap.content_digest,
    }


def rankings(snap: Snapshot, period: str, metric: str) -> dict:
    if metric not in METRICS:
        raise ValidationError(
            f"unknown metric {metric!r}; choose one of {', '.join(METRICS)}",
            metric=metric,
        )
    pdata = snap.period(period)
    scored = []
    unranked = []
    for c in pdata.countries:
        value = pdata.complexity["country"].get(c, {}).get(metric)
        if value is None:
            unranked.append(c)
        else:
            scored.append((c, value))
    # Descending by value; ties broken by country code.
    scored.sort(key=lambda t: (-t[1], t[0]))
    entries = [
        {"rank": i + 1, "country": c, metric: v} for i, (c, v) in enumerate(scored)
    ]
    return {
        "period": period,
        "metric": metric,
        "entries": entries,
        "unranked": unranked,
    }


def pgi(snap: Snapshot, period: str, top: int = 5) -> dict:
    pdata = snap.period(period)
    products = []
    for p in sorted(pdata.pgi_table.entries):
        entry = pdata.pgi_table.entries[p]
        products.append(
            {
                "product": p,
                "pgi": entry.pgi,
                "n_p": entry.n_p,
                "top_contributors": [
                    {"country": c.country, "weight": c.weight, "gini": c.gini}
                    for c in entry.contributors[:top]
                ],
            }
        )
    return {
        "period": period,
        "products": products,
        "excluded_products": list(pdata.pgi_table.excluded_products),
    }


def productspace(snap: Snapshot, period: str) -> dict:
    pdata = snap.period(period)
    return {
        "period": period,
        "nodes": pdata.productspace["nodes"],
        "links": pdata.productspace["links"],
    }


def country(snap: Snapshot, period: str, code: str) -> dict:
    pdata = snap.period(period)
    if code not in pdata.portfolios["countries"]:
        raise NotFoundError(
            f"country {code!r} is not in period {period!r}",
            code="country_not_found",
            country=code,
            period=period,
        )
    info = pdata.portfolios["countries"][code]
    scores = pdata.complexity["country"].get(code, {})
    panel = pdata.panel["countries"].get(code, {})
    return {
        "period": period,
        "country": code,
        "portfolio": info["products"],
        "expected_gini": info["expected_gini"],
        "scores": {m: scores.get(m) for m in METRICS},
        "gini": panel.get("gini"),
    }


def whatif(
    snap: Snapshot,
    period: str,
    code: str,
    add: Sequence[str] | Mapping[str, float],
    remove: Sequence[str],
) -> dict:
    pdata = snap.period(period)
    if code not in pdata.portfolios["countries"]:
        raise NotFoundError(
            f"country {code!r} is not in period {period!r}",
            code="country_not_found",
            country=code,
            period=period,
        )
    adv, shares = pdata.basket_matrices()
    result = inequality.whatif(code, add, remove, adv, shares, pdata.pgi_table)
    return {
        "period": period,
        "country": code,
        "baseline": result.baseline,
        "scenario": result.scenario,
        "delta": result.delta,
        "added": [{"product": p, "share": s} for p, s in result.added],
        "removed": result.removed,
    }
