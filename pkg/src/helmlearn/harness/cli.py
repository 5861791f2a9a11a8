"""Command-line entry points.

The CLI is a thin client over the library: each subcommand parses flags,
builds a config, and delegates to the runners in `runner`. Usage errors
exit with status 2; validation failures (dimension mismatches, bad files)
exit with status 1 and a message on stderr.
"""

from __future__ import annotations

import csv
import json
import time
from pathlib import Path

import click
import numpy as np

from ..analytics import estimate_rho
from ..geometry import PointSet
from ..solver import apply_coefficients, field_from_sources, load_operator
from .config import load_config
from .runner import (
    atomic_write_text,
    canonical_json,
    learn_and_save,
    run_case,
    run_mfs_benchmark,
    run_sweep,
    unit_circle_samples,
)


@click.group()
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.pass_context
def main(ctx, seed):
    """Learned boundary-to-solution operators for the 2D Helmholtz equation."""
    ctx.ensure_object(dict)
    ctx.obj["seed"] = seed


def _load(ctx, config_path, set_overrides):
    overrides = list(set_overrides)
    if ctx.obj.get("seed") is not None:
        overrides.append(f"seed={ctx.obj['seed']}")
    try:
        return load_config(config_path, overrides)
    except (ValueError, KeyError, OSError) as exc:
        raise click.ClickException(f"invalid config: {exc}") from None


_SET_OPTION = click.option(
    "--set", "set_overrides", multiple=True, metavar="SECTION.KEY=VALUE",
    help="Override a config field, e.g. --set problem.alpha=1e-10.",
)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--output", "output_path", default=None, type=click.Path(),
              help="Operator file to write (default: <output dir>/operator.json).")
@click.option("--collocation-csv", default=None, type=click.Path(),
              help="Also dump the collocation points (sampling locations) as CSV.")
@_SET_OPTION
@click.pass_context
def learn(ctx, config_path, output_path, collocation_csv, set_overrides):
    """Learn the operator for a problem config and serialize it."""
    config = _load(ctx, config_path, set_overrides)
    path = Path(output_path) if output_path else config.output_dir / "operator.json"
    op = learn_and_save(config, path)
    if collocation_csv:
        op.collocation.to_csv(collocation_csv)
    click.echo(
        f"learned {op.w.shape[0]}x{op.w.shape[1]} operator "
        f"(k={op.k:g}, alpha={op.alpha:g}) in {op.learn_seconds:.4f}s -> {path}"
    )


def _read_complex_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header[:2]] != ["re", "im"]:
            raise click.ClickException(
                f"{path}: expected header re,im, got {','.join(header)}"
            )
        values = [complex(float(row[0]), float(row[1])) for row in reader if row]
    return np.array(values, dtype=complex)


@main.command()
@click.option("--operator", "operator_path", required=True, type=click.Path(exists=True))
@click.option("--boundary", "boundary_path", required=True, type=click.Path(exists=True),
              help="CSV of boundary data (columns re,im) at the collocation points.")
@click.option("--queries", "queries_path", default=None, type=click.Path(exists=True),
              help="CSV of query points (columns x,y) to evaluate the field at.")
@click.option("--output-dir", default="out", type=click.Path())
def solve(operator_path, boundary_path, queries_path, output_dir):
    """Apply a serialized operator to new boundary data."""
    t0 = time.perf_counter()
    try:
        op = load_operator(operator_path)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"cannot load operator: {exc}") from None
    load_s = time.perf_counter() - t0

    f = _read_complex_csv(boundary_path)
    n = op.w.shape[1]
    if f.shape[0] != n:
        raise click.ClickException(
            f"boundary data has {f.shape[0]} values but the operator expects "
            f"{n} collocation values"
        )
    t0 = time.perf_counter()
    coeffs = apply_coefficients(op, f)
    apply_s = time.perf_counter() - t0

    out = Path(output_dir)
    atomic_write_text(
        out / "coefficients.csv",
        "re,im\n" + "\n".join(
            f"{float(c.real)!r},{float(c.imag)!r}" for c in coeffs
        ) + "\n",
    )
    timings = {"load_seconds": load_s, "apply_seconds": apply_s}

    if queries_path:
        queries = PointSet.from_csv(queries_path, role="query")
        t0 = time.perf_counter()
        values = field_from_sources(op.sources, op.k, coeffs, queries.points)
        timings["eval_seconds"] = time.perf_counter() - t0
        atomic_write_text(
            out / "solution.csv",
            "x,y,re,im\n" + "\n".join(
                f"{float(x)!r},{float(y)!r},{float(v.real)!r},{float(v.imag)!r}"
                for (x, y), v in zip(queries.points, values)
            ) + "\n",
        )
    atomic_write_text(
        out / "solve_timings.json",
        json.dumps({k: round(v, 9) for k, v in timings.items()}, sort_keys=True) + "\n",
    )
    click.echo(f"applied operator in {apply_s:.6f}s -> {out}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--name", default="case", help="Artifact name prefix.")
@_SET_OPTION
@click.pass_context
def case(ctx, config_path, name, set_overrides):
    """Run one experiment case: learn, apply, compare, report."""
    config = _load(ctx, config_path, set_overrides)
    try:
        record = run_case(config, name=name)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    r = record.report
    click.echo(
        f"{name}: 2-norm {r.two_norm:.6e}  inf-norm {r.inf_norm:.6e}  "
        f"({r.point_count} points, learn {r.learn_seconds:.4f}s, "
        f"apply {r.apply_seconds:.6f}s)"
    )
    click.echo(f"report: {record.artifacts['report']}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--name", default="sweep")
@_SET_OPTION
@click.pass_context
def sweep(ctx, config_path, name, set_overrides):
    """Run a parameter sweep of learned-operator cases and fit the decay."""
    config = _load(ctx, config_path, set_overrides)
    try:
        records, fit = run_sweep(config, name=name)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    for rec in records:
        snap = rec.config_snapshot
        click.echo(
            f"  {snap['parameter']}={snap['value']}: "
            f"2-norm {rec.report.two_norm:.6e}"
        )
    if fit:
        click.echo(f"fitted log10 rate {fit.rate:.5f} (r^2 {fit.r_squared:.4f})")
    else:
        click.echo("not enough usable samples for a rate fit")


@main.command("estimate-rho")
@click.option("--samples", "samples_path", default=None, type=click.Path(exists=True),
              help="CSV of unit-circle samples (columns re,im).")
@click.option("--config", "config_path", default=None, type=click.Path(exists=True),
              help="Config with an [exact_field] to sample on the unit circle.")
@click.option("--count", default=256, show_default=True,
              help="Sample count when sampling from a config (power of two).")
@click.option("--output", "output_path", default=None, type=click.Path())
@_SET_OPTION
@click.pass_context
def estimate_rho_cmd(ctx, samples_path, config_path, count, output_path, set_overrides):
    """Estimate the analytic-continuation radius from boundary samples."""
    if (samples_path is None) == (config_path is None):
        raise click.UsageError("provide exactly one of --samples or --config")
    if samples_path:
        samples = _read_complex_csv(samples_path)
    else:
        config = _load(ctx, config_path, set_overrides)
        samples = unit_circle_samples(config, count)
    try:
        fit, rho = estimate_rho(samples)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    doc = {"rho_estimate": rho, "fit": fit.to_dict(), "count": len(samples)}
    if output_path:
        atomic_write_text(Path(output_path), canonical_json(doc) + "\n")
    click.echo(f"rho estimate {rho:.6f} (rate {fit.rate:.5f}, r^2 {fit.r_squared:.4f})")


@main.command("bench-mfs")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--name", default="mfs")
@_SET_OPTION
@click.pass_context
def bench_mfs(ctx, config_path, name, set_overrides):
    """Sweep the classical direct fit and fit its boundary-error decay."""
    config = _load(ctx, config_path, set_overrides)
    try:
        rows, fit = run_mfs_benchmark(config, name=name)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    for row in rows:
        click.echo(
            f"  M={row['param']}: boundary L2 {row['boundary_l2']:.6e}  "
            f"M*|mu|^2 {row['param'] * row['mu_norm_sq']:.4e}"
        )
    if fit:
        click.echo(f"fitted log10 rate {fit.rate:.5f} (r^2 {fit.r_squared:.4f})")
    else:
        click.echo("not enough usable samples for a rate fit")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service (learn once, solve many)."""
    import uvicorn

    from ..service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
