"""Command-line client: snapshot builds, queries, regressions, serving.

Query subcommands print exactly the canonical JSON the HTTP API returns
for the same request, so scripted consumers can treat the two surfaces
interchangeably.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import econometrics
from .errors import AtlasError
from .service import queries
from .snapshot import (
    Snapshot,
    SnapshotConfig,
    build_panel,
    build_panel_from_csv,
    build_snapshot,
    canonical_json,
)


def _fail(exc: AtlasError) -> None:
    click.echo(f"error [{exc.code}]: {exc}", err=True)
    sys.exit(1)


def _load_snapshot(path: str) -> Snapshot:
    try:
        return Snapshot.load(path)
    except AtlasError as exc:
        _fail(exc)


def _load_panel(source: str, dependent: str) -> econometrics.PanelDataset:
    p = Path(source)
    if p.is_dir():
        return build_panel(Snapshot.load(p), dependent)
    return build_panel_from_csv(p.read_bytes(), dependent)


@click.group()
def main():
    """Economic-complexity and inequality analytics."""


@main.command()
@click.option("-c", "--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None, help="Override output dir.")
def build(config_path: str, out: str | None):
    """Build a snapshot directory from a build config."""
    try:
        config = SnapshotConfig.load(config_path)
        snap = build_snapshot(config, out=Path(out) if out else None)
    except AtlasError as exc:
        _fail(exc)
    click.echo(f"snapshot written to {snap.root} (digest {snap.content_digest[:16]})")


@main.command()
@click.option("--snapshot", "snapshot_dir", default="snapshot", type=click.Path())
@click.option("--period", required=True)
@click.option("--metric", default="eci", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json")
def rank(snapshot_dir: str, period: str, metric: str, fmt: str):
    """Country ranking for a period and metric."""
    snap = _load_snapshot(snapshot_dir)
    try:
        payload = queries.rankings(snap, period, metric)
    except AtlasError as exc:
        _fail(exc)
    if fmt == "json":
        click.echo(canonical_json(payload))
    else:
        click.echo(f"rank  country  {metric}")
        for e in payload["entries"]:
            click.echo(f"{e['rank']:>4}  {e['country']:<7}  {e[metric]: .4f}")


@main.command()
@click.option("--snapshot", "snapshot_dir", default="snapshot", type=click.Path())
@click.option("--period", required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def pgi(snapshot_dir: str, period: str, fmt: str):
    """Product Gini table for a period."""
    snap = _load_snapshot(snapshot_dir)
    try:
        payload = queries.pgi(snap, period)
    except AtlasError as exc:
        _fail(exc)
    if fmt == "json":
        click.echo(canonical_json(payload))
    else:
        click.echo((snap.root / period / "pgi.csv").read_text(), nl=False)


@main.command()
@click.option("--snapshot", "snapshot_dir", default="snapshot", type=click.Path())
@click.option("--period", required=True)
def productspace(snapshot_dir: str, period: str):
    """Product-space backbone graph for a period."""
    snap = _load_snapshot(snapshot_dir)
    try:
        payload = queries.productspace(snap, period)
    except AtlasError as exc:
        _fail(exc)
    click.echo(canonical_json(payload))


@main.command()
@click.option("--spec", "spec_text", required=True, help='e.g. "gini ~ eci + ln_gdp"')
@click.option("--panel", "panel_src", required=True, type=click.Path(exists=True),
              help="Snapshot dir or panel CSV (country,period,columns...).")
@click.option("--fe", is_flag=True, help="Country fixed effects (within estimator).")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def regress(spec_text: str, panel_src: str, fe: bool, as_json: bool):
    """Pooled OLS or fixed-effects regression from a model spec."""
    try:
        model = econometrics.parse_spec(spec_text)
        data = _load_panel(panel_src, model.dependent)
        fit = (
            econometrics.fe_fit(data, model.regressors)
            if fe
            else econometrics.ols_fit(data, model.regressors)
        )
    except AtlasError as exc:
        _fail(exc)
    if as_json:
        click.echo(canonical_json(fit.to_dict()))
    else:
        click.echo(econometrics.format_fit_table([fit]))


@main.command()
@click.option("--m1", required=True, help="Model 1 spec.")
@click.option("--m2", required=True, help="Model 2 spec.")
@click.option("--panel", "panel_src", required=True, type=click.Path(exists=True))
@click.option("--fe", is_flag=True, help="Fit both models with fixed effects.")
@click.option("--no-schwarz", is_flag=True, help="Skip the Schwarz correction.")
@click.option("--json", "as_json", is_flag=True)
def clarke(m1: str, m2: str, panel_src: str, fe: bool, no_schwarz: bool, as_json: bool):
    """Clarke sign test between two non-nested models on a common sample."""
    try:
        spec1 = econometrics.parse_spec(m1)
        spec2 = econometrics.parse_spec(m2)
        if spec1.dependent != spec2.dependent:
            raise AtlasError("both models must share the dependent variable")
        data = _load_panel(panel_src, spec1.dependent)
        # Common estimation sample: rows complete for both specifications.
        both = tuple(dict.fromkeys(spec1.regressors + spec2.regressors))
        mask = data.complete_rows(both)
        common = econometrics.PanelDataset(
            [r for r, keep in zip(data.rows, mask) if keep],
            {k: v[mask] for k, v in data.columns.items()},
            data.dependent,
        )
        fitter = econometrics.fe_fit if fe else econometrics.ols_fit
        fit1 = fitter(common, spec1.regressors)
        fit2 = fitter(common, spec2.regressors)
        result = econometrics.clarke_test(fit1, fit2, schwarz=not no_schwarz)
    except AtlasError as exc:
        _fail(exc)
    if as_json:
        click.echo(
            canonical_json(
                {
                    "model1": spec1.formula,
                    "model2": spec2.formula,
                    "r2_model1": fit1.r2,
                    "r2_model2": fit2.r2,
                    **result.to_dict(),
                }
            )
        )
    else:
        share = 100.0 * result.b_statistic / result.n if result.n else 0.0
        verdict = {
            "model1": f"Model 1 is preferred ({spec1.formula})",
            "model2": f"Model 2 is preferred ({spec2.formula})",
            "neither": "Neither model is significantly preferred",
        }[result.preferred]
        click.echo(f"Model 1: {spec1.formula}  (R2 {fit1.r2:.3f})")
        click.echo(f"Model 2: {spec2.formula}  (R2 {fit2.r2:.3f})")
        click.echo(
            f"Clarke: B = {result.b_statistic} of {result.n} ({share:.0f}%), "
            f"p = {result.p_value:.3g}"
        )
        click.echo(verdict)


@main.command()
@click.option("--snapshot", "snapshot_dir", default="snapshot", type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(snapshot_dir: str, host: str, port: int):
    """Serve the snapshot over HTTP (read-only plus /whatif)."""
    import uvicorn

    from .service import create_app

    app = create_app(_load_snapshot(snapshot_dir))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
