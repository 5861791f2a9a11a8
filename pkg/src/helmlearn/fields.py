"""Closed-form Helmholtz fields used as exact solutions and boundary data.

Each field is a callable on (n, 2) point arrays returning complex values,
satisfies Delta u + k^2 u = 0 away from its singular points, and exposes
those singular points so traces can be guarded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .specfun import phi_2d_block

_NO_SINGULARITIES = np.zeros((0, 2))


@dataclass(frozen=True)
class PlaneProduct:
    """u(x, y) = sin(k x / sqrt 2) sin(k y / sqrt 2); entire."""

    k: float

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        c = self.k / np.sqrt(2.0)
        return (np.sin(c * points[:, 0]) * np.sin(c * points[:, 1])).astype(complex)

    @property
    def singular_points(self) -> np.ndarray:
        return _NO_SINGULARITIES


@dataclass(frozen=True)
class PointSource:
    """Fundamental solution centered at `location`."""

    location: tuple[float, float]
    k: float

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        src = np.asarray(self.location, dtype=float).reshape(1, 2)
        return phi_2d_block(src, np.asarray(points, dtype=float), self.k)[:, 0]

    @property
    def singular_points(self) -> np.ndarray:
        return np.asarray(self.location, dtype=float).reshape(1, 2)


@dataclass(frozen=True)
class Dipole:
    """Difference of two fundamental solutions."""

    location_pos: tuple[float, float]
    location_neg: tuple[float, float]
    k: float

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        srcs = np.stack(
            [np.asarray(self.location_pos, float), np.asarray(self.location_neg, float)]
        )
        block = phi_2d_block(srcs, np.asarray(points, dtype=float), self.k)
        return block[:, 0] - block[:, 1]

    @property
    def singular_points(self) -> np.ndarray:
        return np.stack(
            [np.asarray(self.location_pos, float), np.asarray(self.location_neg, float)]
        )


@dataclass(frozen=True)
class PlaneWave:
    """u(x) = exp(i k d . x) for a unit direction d; entire."""

    direction: tuple[float, float]
    k: float

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        d = np.asarray(self.direction, dtype=float)
        norm = np.hypot(d[0], d[1])
        if norm == 0.0:
            raise ValueError("plane wave direction must be nonzero")
        d = d / norm
        points = np.asarray(points, dtype=float)
        return np.exp(1j * self.k * (points @ d))

    @property
    def singular_points(self) -> np.ndarray:
        return _NO_SINGULARITIES


ExactField = PlaneProduct | PointSource | Dipole | PlaneWave


def field_from_spec(spec: dict, k: float) -> ExactField:
    """Build a field from a config mapping, e.g. {"kind": "point_source", ...}."""
    kind = spec.get("kind")
    if kind == "plane_product":
        return PlaneProduct(k=k)
    if kind == "point_source":
        return PointSource(location=tuple(spec["location"]), k=k)
    if kind == "dipole":
        return Dipole(
            location_pos=tuple(spec["location_pos"]),
            location_neg=tuple(spec["location_neg"]),
            k=k,
        )
    if kind == "plane_wave":
        return PlaneWave(direction=tuple(spec["direction"]), k=k)
    raise ValueError(f"unknown exact field kind {kind!r}")
