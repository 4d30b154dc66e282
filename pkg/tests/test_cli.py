import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from complexity_atlas.cli import main

FIXTURE = Path(__file__).parent.parent / "data" / "fixture"


@pytest.fixture(scope="module")
def snapshot_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli_snap")
    runner = CliRunner()
    result = runner.invoke(
        main, ["build", "-c", str(FIXTURE / "config.json"), "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    return out


class TestBuild:
    def test_reports_digest(self, snapshot_dir):
        assert (snapshot_dir / "metadata.json").exists()

    def test_missing_config_fails(self):
        result = CliRunner().invoke(main, ["build", "-c", "nope.json"])
        assert result.exit_code != 0


class TestRank:
    def test_json_output(self, snapshot_dir):
        result = CliRunner().invoke(
            main,
            ["rank", "--snapshot", str(snapshot_dir), "--period", "2000-2004",
             "--metric", "eci"],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["metric"] == "eci"
        assert payload["entries"][0]["rank"] == 1

    def test_table_output(self, snapshot_dir):
        result = CliRunner().invoke(
            main,
            ["rank", "--snapshot", str(snapshot_dir), "--period", "2000-2004",
             "--format", "table"],
        )
        assert result.exit_code == 0
        assert "rank" in result.output

    def test_unknown_period_fails_cleanly(self, snapshot_dir):
        result = CliRunner().invoke(
            main, ["rank", "--snapshot", str(snapshot_dir), "--period", "x"]
        )
        assert result.exit_code == 1
        assert "period_not_found" in result.output


class TestPgi:
    def test_json(self, snapshot_dir):
        result = CliRunner().invoke(
            main, ["pgi", "--snapshot", str(snapshot_dir), "--period", "2000-2004"]
        )
        assert result.exit_code == 0
        assert len(json.loads(result.output)["products"]) == 20

    def test_csv(self, snapshot_dir):
        result = CliRunner().invoke(
            main,
            ["pgi", "--snapshot", str(snapshot_dir), "--period", "2000-2004",
             "--format", "csv"],
        )
        assert result.exit_code == 0
        assert result.output.startswith("product,pgi,n_p,top5_contributors")


class TestRegress:
    def test_table_from_snapshot(self, snapshot_dir):
        result = CliRunner().invoke(
            main,
            ["regress", "--panel", str(snapshot_dir),
             "--spec", "gini ~ eci + ln_gdp + ln_gdp_sq"],
        )
        assert result.exit_code == 0, result.output
        assert "Dependent variable: gini" in result.output
        assert "eci" in result.output

    def test_json_from_snapshot(self, snapshot_dir):
        result = CliRunner().invoke(
            main,
            ["regress", "--panel", str(snapshot_dir), "--spec", "gini ~ eci",
             "--json"],
        )
        payload = json.loads(result.output)
        assert payload["dependent"] == "gini"
        assert "eci" in payload["coefficients"]

    def test_fixed_effects(self, snapshot_dir):
        result = CliRunner().invoke(
            main,
            ["regress", "--panel", str(snapshot_dir), "--spec", "gini ~ eci",
             "--fe", "--json"],
        )
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["fixed_effects"] is True

    def test_csv_panel_source(self, tmp_path):
        csv = tmp_path / "panel.csv"
        rows = ["country,period,y,x"]
        rng_vals = [(i, 2.0 * i + 1.0) for i in range(12)]
        for i, (x, y) in enumerate(rng_vals):
            rows.append(f"C{i:02d},t0,{y},{x}")
        csv.write_text("\n".join(rows) + "\n")
        result = CliRunner().invoke(
            main, ["regress", "--panel", str(csv), "--spec", "y ~ x", "--json"]
        )
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["coefficients"]["x"] == pytest.approx(2.0)


class TestClarke:
    def test_clarke_prefers_eci(self, snapshot_dir):
        result = CliRunner().invoke(
            main,
            ["clarke", "--panel", str(snapshot_dir),
             "--m1", "gini ~ eci", "--m2", "gini ~ ln_gdp", "--json"],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["preferred"] == "model1"
        assert payload["r2_model1"] > payload["r2_model2"]

    def test_human_output(self, snapshot_dir):
        result = CliRunner().invoke(
            main,
            ["clarke", "--panel", str(snapshot_dir),
             "--m1", "gini ~ eci", "--m2", "gini ~ hhi"],
        )
        assert result.exit_code == 0
        assert "Clarke: B =" in result.output


class TestServe:
    def test_help_lists_options(self):
        result = CliRunner().invoke(main, ["serve", "--help"])
        assert result.exit_code == 0
        assert "--port" in result.output


class TestParity:
    def test_cli_json_matches_http(self, snapshot_dir):
        from fastapi.testclient import TestClient

        from complexity_atlas.service import create_app

        cli_out = CliRunner().invoke(
            main,
            ["rank", "--snapshot", str(snapshot_dir), "--period", "2005-2008",
             "--metric", "fitness"],
        ).output.rstrip("\n")
        client = TestClient(create_app(snapshot_dir))
        http = client.get(
            "/rankings", params={"period": "2005-2008", "metric": "fitness"}
        )
        assert cli_out.encode() == http.content
