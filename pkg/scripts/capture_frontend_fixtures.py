#!/usr/bin/env python3
"""Capture service responses from the bundled snapshot for frontend tests.

Builds the fixture snapshot, runs the FastAPI app in-process, and saves
the exact response bytes the explorer consumes. The vitest suite mocks
fetch with these files, so the UI tests run against genuine served
payloads without needing a live server.
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from complexity_atlas.service import create_app
from complexity_atlas.snapshot import SnapshotConfig, build_snapshot

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "frontend" / "tests" / "fixtures"

PERIOD = "2000-2004"
COUNTRY = "LLX"  # commodity concentrator with a small basket
ADD_PRODUCT = "7100"  # machinery, not in LLX's basket


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    config = SnapshotConfig.load(ROOT / "data" / "fixture" / "config.json")
    with tempfile.TemporaryDirectory() as tmp:
        snap = build_snapshot(config, out=Path(tmp) / "snapshot")
        client = TestClient(create_app(snap))

        def save(name: str, response) -> None:
            assert response.status_code == 200, (name, response.status_code)
            (OUT / name).write_bytes(response.content)

        save("periods.json", client.get("/periods"))
        save(
            "rankings.json",
            client.get("/rankings", params={"period": PERIOD, "metric": "eci"}),
        )
        save(
            "productspace.json",
            client.get("/productspace", params={"period": PERIOD}),
        )
        save(
            "country.json",
            client.get(f"/country/{COUNTRY}", params={"period": PERIOD}),
        )

        portfolio = client.get(
            f"/country/{COUNTRY}", params={"period": PERIOD}
        ).json()["portfolio"]
        pgi_rows = client.get("/pgi", params={"period": PERIOD}).json()["products"]
        pgi = {row["product"]: row["pgi"] for row in pgi_rows}
        remove_top = max(
            (item["product"] for item in portfolio), key=lambda p: pgi[p]
        )

        save(
            "whatif_add.json",
            client.post(
                "/whatif",
                json={
                    "country": COUNTRY,
                    "period": PERIOD,
                    "add": [ADD_PRODUCT],
                    "remove": [],
                },
            ),
        )
        save(
            "whatif_empty.json",
            client.post(
                "/whatif",
                json={"country": COUNTRY, "period": PERIOD, "add": [], "remove": []},
            ),
        )
        save(
            "whatif_remove_top.json",
            client.post(
                "/whatif",
                json={
                    "country": COUNTRY,
                    "period": PERIOD,
                    "add": [],
                    "remove": [remove_top],
                },
            ),
        )

        (OUT / "manifest.json").write_text(
            json.dumps(
                {
                    "period": PERIOD,
                    "country": COUNTRY,
                    "add_product": ADD_PRODUCT,
                    "remove_top_product": remove_top,
                    "content_digest": snap.content_digest,
                },
                indent=2,
            )
            + "\n"
        )
    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()
