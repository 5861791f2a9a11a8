"""Experiment configuration: TOML parsing, validation, overrides.

A config file mirrors the problem / exact-field / grid structure:

    seed = 0
    [problem]
    k = 184.79956641688574
    curve = "flower"
    a = 0.5
    b = 0.1
    n_petals = 6
    n_collocation = 288
    m_sources = 288
    source_radius = 1.07
    alpha = 1e-12            # or "auto" for m*n*R^(-2m)
    [exact_field]
    kind = "plane_product"
    [grid]
    target_count = 37500
    margin = 0.0
    [output]
    dir = "out/case1"

An optional [sweep] section names one problem parameter and the strictly
increasing list of values to run. The environment variable
HELMLEARN_OUTPUT_DIR overrides the output directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from ..fields import ExactField, field_from_spec
from ..geometry import BoundaryCurve, circle_curve, flower_curve
from ..solver import WaveProblem, default_alpha

OUTPUT_DIR_ENV = "HELMLEARN_OUTPUT_DIR"

SWEEPABLE = ("m_sources", "n_collocation", "source_radius", "alpha")


@dataclass(frozen=True)
class ExperimentConfig:
    problem: dict
    exact_field: dict | None
    grid: dict
    sweep: dict | None
    output_dir: Path
    seed: int
    operator_path: Path | None = None
    raw: dict = field(default_factory=dict)

    def make_curve(self) -> BoundaryCurve:
        kind = self.problem.get("curve", "flower")
        if kind == "flower":
            return flower_curve(
                self.problem["a"], self.problem["b"], self.problem["n_petals"]
            )
        if kind == "circle":
            return circle_curve(self.problem["radius"])
        raise ValueError(f"unknown curve kind {kind!r}")

    def resolve_alpha(self, m_sources=None, n_collocation=None) -> float:
        m = int(m_sources if m_sources is not None else self.problem["m_sources"])
        n = int(
            n_collocation if n_collocation is not None else self.problem["n_collocation"]
        )
        alpha = self.problem.get("alpha", "auto")
        if alpha == "auto":
            return default_alpha(m, n, float(self.problem["source_radius"]))
        return float(alpha)

    def make_problem(self, **overrides) -> WaveProblem:
        p = dict(self.problem)
        p.update(overrides)
        alpha = p.get("alpha", "auto")
        if alpha == "auto":
            alpha = default_alpha(
                int(p["m_sources"]), int(p["n_collocation"]), float(p["source_radius"])
            )
        return WaveProblem(
            k=float(p["k"]),
            curve=self.make_curve(),
            n_collocation=int(p["n_collocation"]),
            m_sources=int(p["m_sources"]),
            source_radius=float(p["source_radius"]),
            alpha=float(alpha),
            spacing=p.get("spacing", "parameter"),
        )

    def make_field(self) -> ExactField:
        if self.exact_field is None:
            raise ValueError("config has no [exact_field] section")
        return field_from_spec(self.exact_field, float(self.problem["k"]))


def _coerce(text: str):
    lowered = text.strip().lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def apply_overrides(doc: dict, overrides: list[str]) -> None:
    """Apply CLI overrides of the form section.key=value (in place)."""
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"override {item!r} is not of the form section.key=value")
        dotted, value = item.split("=", 1)
        parts = dotted.strip().split(".")
        node = doc
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ValueError(f"cannot override through non-table {part!r}")
        node[parts[-1]] = _coerce(value)


def load_config(path, overrides: list[str] | None = None) -> ExperimentConfig:
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    if overrides:
        apply_overrides(doc, overrides)
    return config_from_dict(doc, base_dir=Path(path).resolve().parent)


def config_from_dict(doc: dict, base_dir: Path | None = None) -> ExperimentConfig:
    problem = dict(doc.get("problem") or {})
    for key in ("k", "n_collocation", "m_sources", "source_radius"):
        if key not in problem:
            raise ValueError(f"[problem] section is missing {key!r}")
    sweep = doc.get("sweep")
    if sweep is not None:
        sweep = dict(sweep)
        if sweep.get("parameter") not in SWEEPABLE:
            raise ValueError(
                f"sweep parameter must be one of {SWEEPABLE}, "
                f"got {sweep.get('parameter')!r}"
            )
        values = list(sweep.get("values", []))
        if len(values) < 4:
            raise ValueError("sweep needs at least 4 values")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        sweep["values"] = values
    out = Path(os.environ.get(OUTPUT_DIR_ENV) or (doc.get("output") or {}).get("dir", "out"))
    if base_dir is not None and not out.is_absolute():
        out = base_dir / out
    grid = dict(doc.get("grid") or {"target_count": 2000, "margin": 0.0})
    operator_path = (doc.get("problem") or {}).get("operator_path")
    return ExperimentConfig(
        problem=problem,
        exact_field=dict(doc["exact_field"]) if doc.get("exact_field") else None,
        grid=grid,
        sweep=sweep,
        output_dir=out,
        seed=int(doc.get("seed", 0)),
        operator_path=Path(operator_path) if operator_path else None,
        raw=doc,
    )
