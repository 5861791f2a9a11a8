"""Case and sweep runners with deterministic artifact emission.

Reports are split into a deterministic part (report.json: config echo and
error norms, floats printed at 17 significant digits, keys sorted) and a
timing part (timings.json: wall-clock breakdown), so identical config and
seed produce byte-identical report files. All files are written atomically
(temp file + rename). Operator application is timed at two granularities:
`apply_seconds` is the coefficient product W f, `eval_seconds` the full
field evaluation over the query grid.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..analytics import (
    DecayFit,
    ErrorReport,
    boundary_l2_error,
    error_report,
    fit_decay,
    trim_error_plateau,
)
from ..geometry import collocation_points, interior_grid
from ..solver import (
    LearnedOperator,
    apply_coefficients,
    assemble_training_matrix,
    boundary_trace,
    default_alpha,
    field_from_sources,
    learn,
    load_operator,
    mfs_direct_fit,
    save_operator,
)
from .config import ExperimentConfig

_FLOOR_MULTIPLIER = 100.0


@dataclass(frozen=True)
class RunRecord:
    config_snapshot: dict
    report: ErrorReport
    artifacts: dict
    wall: dict


# ---------------------------------------------------------------------------
# Deterministic serialization helpers
# ---------------------------------------------------------------------------
def canonical_json(obj) -> str:
    """JSON with sorted keys and floats at 17 significant digits."""
    return _canon(obj)


def _canon(obj) -> str:
    if isinstance(obj, dict):
        items = sorted(obj.items())
        body = ",".join(f"{json.dumps(str(k))}:{_canon(v)}" for k, v in items)
        return "{" + body + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_canon(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x} in report")
        return format(x, ".17g")
    if isinstance(obj, (str, Path)):
        return json.dumps(str(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def atomic_write_text(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _field_csv(points, numeric, exact) -> str:
    lines = ["x,y,re_num,im_num,re_exact,im_exact,abs_err"]
    err = np.abs(numeric - exact)
    for (x, y), un, ue, e in zip(points, numeric, exact, err):
        lines.append(
            ",".join(
                repr(float(v))
                for v in (x, y, un.real, un.imag, ue.real, ue.imag, e)
            )
        )
    return "\n".join(lines) + "\n"


def _problem_snapshot(config: ExperimentConfig, problem) -> dict:
    return {
        "k": problem.k,
        "curve": config.problem.get("curve", "flower"),
        "curve_params": {
            k: v for k, v in config.problem.items()
            if k in ("a", "b", "n_petals", "radius")
        },
        "n_collocation": problem.n_collocation,
        "m_sources": problem.m_sources,
        "source_radius": problem.source_radius,
        "alpha": problem.alpha,
        "spacing": problem.spacing,
    }


# ---------------------------------------------------------------------------
# Runners
# ---------------------------------------------------------------------------
def run_case(
    config: ExperimentConfig,
    operator: LearnedOperator | None = None,
    name: str = "case",
) -> RunRecord:
    """Learn (or load) the operator, apply it to the configured boundary
    data, compare against the exact field on the query grid, and write the
    field CSV plus report/timings JSON."""
    problem = config.make_problem()
    wall: dict[str, float] = {}

    if operator is None:
        if config.operator_path is not None:
            t0 = time.perf_counter()
            operator = load_operator(config.operator_path)
            wall["load_seconds"] = time.perf_counter() - t0
        else:
            operator = learn(problem)
    if operator.w.shape[1] != problem.n_collocation:
        raise ValueError(
            f"operator has {operator.w.shape[1]} collocation points, config "
            f"says {problem.n_collocation}"
        )
    wall["learn_seconds"] = operator.learn_seconds

    t0 = time.perf_counter()
    grid = interior_grid(
        problem.curve,
        int(config.grid.get("target_count", 2000)),
        float(config.grid.get("margin", 0.0)),
    )
    wall["grid_seconds"] = time.perf_counter() - t0

    field = config.make_field()
    f = boundary_trace(field, operator.collocation)

    t0 = time.perf_counter()
    coeffs = apply_coefficients(operator, f)
    wall["apply_seconds"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    numeric = field_from_sources(operator.sources, operator.k, coeffs, grid.points)
    wall["eval_seconds"] = time.perf_counter() - t0

    exact = field.evaluate(grid.points)
    report = error_report(
        exact, numeric,
        learn_seconds=wall["learn_seconds"],
        apply_seconds=wall["apply_seconds"],
    )

    out = Path(config.output_dir)
    snapshot = {
        "seed": config.seed,
        "problem": _problem_snapshot(config, problem),
        "exact_field": config.exact_field,
        "grid": {
            "target_count": int(config.grid.get("target_count", 2000)),
            "margin": float(config.grid.get("margin", 0.0)),
            "actual_count": len(grid),
        },
    }
    report_doc = {
        "config": snapshot,
        "results": {
            "two_norm": report.two_norm,
            "inf_norm": report.inf_norm,
            "rms": report.rms,
            "point_count": report.point_count,
        },
    }
    artifacts = {
        "report": out / f"{name}_report.json",
        "timings": out / f"{name}_timings.json",
        "field": out / f"{name}_field.csv",
    }
    atomic_write_text(artifacts["report"], canonical_json(report_doc) + "\n")
    atomic_write_text(
        artifacts["timings"],
        json.dumps({k: round(v, 9) for k, v in wall.items()}, sort_keys=True) + "\n",
    )
    atomic_write_text(artifacts["field"], _field_csv(grid.points, numeric, exact))
    return RunRecord(
        config_snapshot=snapshot, report=report, artifacts=artifacts, wall=wall
    )


def _sweep_alpha(config: ExperimentConfig, param: str, value, n_collocation: int):
    """Per-value regularization: swept explicitly, config-resolved, or the
    floored auto rule max(m n R^(-2m), floor)."""
    sweep = config.sweep or {}
    rule = sweep.get("alpha_rule", "config")
    if param == "alpha":
        return float(value)
    m = int(value) if param == "m_sources" else int(config.problem["m_sources"])
    r = float(value) if param == "source_radius" else float(
        config.problem["source_radius"]
    )
    if rule == "auto":
        floor = float(sweep.get("alpha_floor", 1e-14))
        return max(default_alpha(m, n_collocation, r), floor)
    if rule == "config":
        return config.resolve_alpha(m_sources=m, n_collocation=n_collocation)
    raise ValueError(f"unknown alpha_rule {rule!r}")


def run_sweep(config: ExperimentConfig, name: str = "sweep") -> tuple[list[RunRecord], DecayFit | None]:
    """One learned-operator case per sweep value, then a decay-rate fit.

    The exact field and query grid are shared across values (the curve does
    not change under the sweepable parameters).
    """
    if config.sweep is None:
        raise ValueError("config has no [sweep] section")
    param = config.sweep["parameter"]
    values = config.sweep["values"]
    curve = config.make_curve()
    field = config.make_field()
    grid = interior_grid(
        curve,
        int(config.grid.get("target_count", 2000)),
        float(config.grid.get("margin", 0.0)),
    )
    exact = field.evaluate(grid.points)

    records = []
    samples = []
    floors = []
    rows = []
    for value in values:
        n_coll = int(value) if param == "n_collocation" else int(
            config.problem["n_collocation"]
        )
        alpha = _sweep_alpha(config, param, value, n_coll)
        problem = config.make_problem(**{param: value, "alpha": alpha})
        op = learn(problem)
        f = boundary_trace(field, op.collocation)
        t0 = time.perf_counter()
        coeffs = apply_coefficients(op, f)
        apply_s = time.perf_counter() - t0
        t0 = time.perf_counter()
        numeric = field_from_sources(op.sources, op.k, coeffs, grid.points)
        eval_s = time.perf_counter() - t0
        report = error_report(exact, numeric, op.learn_seconds, apply_s)
        records.append(
            RunRecord(
                config_snapshot={"parameter": param, "value": value, "alpha": alpha},
                report=report,
                artifacts={},
                wall={
                    "learn_seconds": op.learn_seconds,
                    "apply_seconds": apply_s,
                    "eval_seconds": eval_s,
                },
            )
        )
        samples.append((float(value), report.two_norm))
        floors.append(_FLOOR_MULTIPLIER * alpha * float(np.linalg.norm(f)))
        rows.append(
            f"{value!r},{report.two_norm!r},{report.inf_norm!r},"
            f"{report.learn_seconds!r},{report.apply_seconds!r}"
        )

    fit = _fit_filtered(samples, floors)
    out = Path(config.output_dir)
    atomic_write_text(
        out / f"{name}.csv",
        "param,two_norm,inf_norm,learn_s,apply_s\n" + "\n".join(rows) + "\n",
    )
    fit_doc = {"parameter": param, "fit": fit.to_dict() if fit else None}
    atomic_write_text(out / f"{name}_fit.json", canonical_json(fit_doc) + "\n")
    return records, fit


def _fit_filtered(samples, floors) -> DecayFit | None:
    """Rate fit on samples above the regularization floor and before the
    roundoff plateau."""
    above = [s for s, fl in zip(samples, floors) if s[1] >= fl]
    kept = trim_error_plateau(above)
    if len(kept) < 4:
        return None
    return fit_decay(kept)


def run_mfs_benchmark(
    config: ExperimentConfig, name: str = "mfs", eval_points: int = 1024
) -> tuple[list[dict], DecayFit | None]:
    """Classical direct-fit sweep over the source count.

    Errors are measured on a dense boundary sampling in the arc-length
    weighted L2 norm (the natural norm for boundary-error decay) and the
    rate is fitted on those values; plain 2-norm and the squared
    coefficient norm are recorded alongside.
    """
    if config.sweep is None or config.sweep["parameter"] != "m_sources":
        raise ValueError("MFS benchmark needs a [sweep] over m_sources")
    curve = config.make_curve()
    field = config.make_field()
    dense = collocation_points(curve, eval_points)
    exact_b = field.evaluate(dense.points)

    rows = []
    samples = []
    floors = []
    for value in config.sweep["values"]:
        n_coll = int(config.problem["n_collocation"])
        alpha = _sweep_alpha(config, "m_sources", value, n_coll)
        problem = config.make_problem(m_sources=int(value), alpha=alpha)
        colloc = problem.collocation()
        sources = problem.sources()
        f = boundary_trace(field, colloc)
        t0 = time.perf_counter()
        v = assemble_training_matrix(problem, colloc, sources)
        mu = mfs_direct_fit(problem, f, v)
        fit_s = time.perf_counter() - t0
        t0 = time.perf_counter()
        numeric = field_from_sources(sources, problem.k, mu, dense.points)
        eval_s = time.perf_counter() - t0
        b_l2 = boundary_l2_error(exact_b, numeric, dense.weights)
        report = error_report(exact_b, numeric, fit_s, eval_s)
        mu_sq = float(np.linalg.norm(mu) ** 2)
        rows.append(
            {
                "param": int(value),
                "two_norm": report.two_norm,
                "inf_norm": report.inf_norm,
                "boundary_l2": b_l2,
                "mu_norm_sq": mu_sq,
                "alpha": alpha,
                "learn_s": fit_s,
                "apply_s": eval_s,
            }
        )
        samples.append((float(value), b_l2))
        floors.append(_FLOOR_MULTIPLIER * alpha * float(np.linalg.norm(f)))

    fit = _fit_filtered(samples, floors)
    out = Path(config.output_dir)
    header = "param,two_norm,inf_norm,boundary_l2,mu_norm_sq,learn_s,apply_s"
    atomic_write_text(
        out / f"{name}.csv",
        header + "\n" + "\n".join(
            f"{r['param']},{r['two_norm']!r},{r['inf_norm']!r},{r['boundary_l2']!r},"
            f"{r['mu_norm_sq']!r},{r['learn_s']!r},{r['apply_s']!r}"
            for r in rows
        ) + "\n",
    )
    fit_doc = {"parameter": "m_sources", "fit": fit.to_dict() if fit else None}
    atomic_write_text(out / f"{name}_fit.json", canonical_json(fit_doc) + "\n")
    return rows, fit


def learn_and_save(config: ExperimentConfig, path) -> LearnedOperator:
    op = learn(config.make_problem())
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    save_operator(op, path)
    return op


def unit_circle_samples(config: ExperimentConfig, count: int) -> np.ndarray:
    """Exact-field samples at `count` equal angles on the unit circle."""
    field = config.make_field()
    t = 2.0 * np.pi * np.arange(count) / count
    return field.evaluate(np.stack([np.cos(t), np.sin(t)], axis=1))
