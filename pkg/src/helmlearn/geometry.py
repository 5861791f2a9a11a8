"""Boundary curves, collocation/source layouts, and interior query grids.

Domains are star-shaped about the origin and described by a positive radius
function rho(t) on [0, 2*pi), so the boundary point at parameter t is
(rho(t) cos t, rho(t) sin t). That covers circles, the petaled test domain
rho(t) = a - b cos(n t), and user-supplied radius functions, and makes the
inside test a radial comparison.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class BoundaryCurve:
    """Closed star-shaped boundary with radius function rho(t) > 0."""

    kind: str
    radius: Callable[[np.ndarray], np.ndarray]
    radius_deriv: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)

    def points(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        r = self.radius(t)
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)

    def speed(self, t: np.ndarray) -> np.ndarray:
        """|gamma'(t)| = sqrt(rho^2 + rho'^2)."""
        t = np.asarray(t, dtype=float)
        return np.hypot(self.radius(t), self.radius_deriv(t))

    def max_radius(self) -> float:
        t = np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False)
        return float(np.max(self.radius(t)))

    def arc_length(self, t0: float, t1: float) -> float:
        """Arc length over [t0, t1] by 16-point Gauss-Legendre quadrature."""
        half = 0.5 * (t1 - t0)
        mid = 0.5 * (t0 + t1)
        return float(half * np.sum(_GL_WEIGHTS * self.speed(mid + half * _GL_NODES)))

    def total_arc_length(self, panels: int = 256) -> float:
        edges = np.linspace(0.0, 2.0 * np.pi, panels + 1)
        return sum(self.arc_length(a, b) for a, b in zip(edges[:-1], edges[1:]))

    def area(self) -> float:
        """Enclosed area, (1/2) integral of rho(t)^2 dt."""
        t = np.linspace(0.0, 2.0 * np.pi, 8192, endpoint=False)
        return float(0.5 * np.mean(self.radius(t) ** 2) * 2.0 * np.pi)


def circle_curve(radius: float) -> BoundaryCurve:
    if radius <= 0.0:
        raise ValueError(f"circle radius must be positive, got {radius}")
    r = float(radius)
    return BoundaryCurve(
        kind="circle",
        radius=lambda t: np.full_like(np.asarray(t, dtype=float), r),
        radius_deriv=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        params={"radius": r},
    )


def flower_curve(a: float, b: float, n_petals: int) -> BoundaryCurve:
    """Petaled boundary rho(t) = a - b cos(n t); requires a > b >= 0."""
    if b < 0.0:
        raise ValueError(f"petal amplitude b must be nonnegative, got {b}")
    if a <= b:
        raise ValueError(
            f"flower curve needs a > b for a positive radius, got a={a}, b={b}"
        )
    if n_petals < 1:
        raise ValueError(f"petal count must be positive, got {n_petals}")
    a, b, n = float(a), float(b), int(n_petals)
    if b == 0.0:
        return circle_curve(a)
    return BoundaryCurve(
        kind="flower",
        radius=lambda t: a - b * np.cos(n * np.asarray(t, dtype=float)),
        radius_deriv=lambda t: b * n * np.sin(n * np.asarray(t, dtype=float)),
        params={"a": a, "b": b, "n_petals": n},
    )


def curve_from_radius(radius, radius_deriv, params=None) -> BoundaryCurve:
    """Custom star-shaped curve from rho(t) and rho'(t) callables."""
    curve = BoundaryCurve(
        kind="custom",
        radius=radius,
        radius_deriv=radius_deriv,
        params=dict(params or {}),
    )
    t = np.linspace(0.0, 2.0 * np.pi, 1024, endpoint=False)
    if np.any(curve.radius(t) <= 0.0):
        raise ValueError("custom radius function must be strictly positive")
    return curve


@dataclass(frozen=True)
class PointSet:
    """An ordered set of 2D points with a role tag.

    Collocation sets carry per-point arc-length weights (the length of the
    boundary cell centered on each point); other roles have no weights.
    """

    points: np.ndarray
    role: str
    weights: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must be (n, 2), got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        object.__setattr__(self, "points", pts)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (len(pts),):
                raise ValueError("weights must match point count")
            if np.any(w <= 0.0):
                raise ValueError("weights must be positive")
            object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.points)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            if self.weights is None:
                writer.writerow(["x", "y"])
                for x, y in self.points:
                    writer.writerow([repr(float(x)), repr(float(y))])
            else:
                writer.writerow(["x", "y", "weight"])
                for (x, y), w in zip(self.points, self.weights):
                    writer.writerow([repr(float(x)), repr(float(y)), repr(float(w))])

    @classmethod
    def from_csv(cls, path, role: str = "query") -> "PointSet":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            has_weight = len(header) >= 3 and header[2].strip() == "weight"
            pts, wts = [], []
            for row in reader:
                if not row:
                    continue
                pts.append((float(row[0]), float(row[1])))
                if has_weight:
                    wts.append(float(row[2]))
        return cls(
            points=np.array(pts, dtype=float).reshape(-1, 2),
            role=role,
            weights=np.array(wts) if has_weight else None,
        )


def collocation_points(
    curve: BoundaryCurve, n: int, spacing: str = "parameter"
) -> PointSet:
    """n boundary sample points with arc-length cell weights.

    With the default equal-parameter spacing the points sit at
    t_j = 2 pi j / n and the weight of point j is the arc length of
    [t_j - pi/n, t_j + pi/n]. Equal-arclength spacing places the points at
    equal arc-length intervals instead (cells are then uniform).
    """
    if n < 8:
        raise ValueError(f"need at least 8 collocation points, got {n}")
    if spacing == "parameter":
        t = 2.0 * np.pi * np.arange(n) / n
        half = np.pi / n
        weights = np.array(
            [curve.arc_length(tj - half, tj + half) for tj in t]
        )
    elif spacing == "arclength":
        t = _equal_arclength_parameters(curve, n)
        weights = np.full(n, curve.total_arc_length() / n)
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    return PointSet(points=curve.points(t), role="collocation", weights=weights)


def _equal_arclength_parameters(curve: BoundaryCurve, n: int) -> np.ndarray:
    dense = 64 * n
    t = np.linspace(0.0, 2.0 * np.pi, dense + 1)
    speed = curve.speed(t)
    # cumulative trapezoid of |gamma'|
    s = np.concatenate(
        [[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(t))]
    )
    targets = s[-1] * np.arange(n) / n
    return np.interp(targets, s, t)


def source_points(radius: float, m: int) -> PointSet:
    """m points equally spaced on the circle of the given radius."""
    if m < 2:
        raise ValueError(f"need at least 2 source points, got {m}")
    if radius <= 1.0:
        warnings.warn(
            f"source radius {radius} does not enclose the unit disk; "
            "operator assembly will reject it if it does not enclose the "
            "boundary curve",
            stacklevel=2,
        )
    phi = 2.0 * np.pi * np.arange(m) / m
    pts = radius * np.stack([np.cos(phi), np.sin(phi)], axis=1)
    return PointSet(points=pts, role="source")


def interior_grid(
    curve: BoundaryCurve, target_count: int, margin: float = 0.0
) -> PointSet:
    """Uniform Cartesian lattice clipped to r < (1 - margin) rho(theta).

    The lattice pitch is calibrated from the enclosed area so the point
    count lands within 5% of `target_count` (best-effort for very small
    targets where lattice granularity dominates).
    """
    if target_count < 1:
        raise ValueError("target_count must be positive")
    if not 0.0 <= margin < 1.0:
        raise ValueError(f"margin must be in [0, 1), got {margin}")
    shrink = 1.0 - margin
    area = curve.area() * shrink * shrink
    rmax = curve.max_radius() * shrink
    pitch = math.sqrt(area / target_count)
    best = None
    for _ in range(12):
        pts = _lattice_inside(curve, pitch, rmax, shrink)
        count = len(pts)
        if best is None or abs(count - target_count) < abs(len(best) - target_count):
            best = pts
        if count == 0:
            pitch *= 0.5
            continue
        if abs(count - target_count) <= 0.04 * target_count:
            break
        pitch *= math.sqrt(count / target_count)
    return PointSet(points=best, role="query")


def _lattice_inside(curve, pitch, rmax, shrink):
    half = int(math.ceil(rmax / pitch)) + 1
    coords = (np.arange(-half, half + 1) + 0.5) * pitch
    gx, gy = np.meshgrid(coords, coords)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    r = np.hypot(pts[:, 0], pts[:, 1])
    theta = np.arctan2(pts[:, 1], pts[:, 0])
    return pts[r < shrink * curve.radius(theta)]
