"""Learned boundary-to-solution operators and the classical direct fit.

The training matrix V holds fundamental solutions sampled at boundary
collocation points: V[j, i] = (i/4) H_0^(1)(k |x_hat_i - x_j|) for sources
x_hat_i on a circle enclosing the domain. Learning is one regularized
dual solve, W = V* (V V* + alpha I)^(-1); applying the operator to new
boundary data f costs one W f product plus one source-row dot per query
point. The classical single-fit alternative (coefficients from the primal
solve for one fixed f) is kept as a baseline.
"""

from __future__ import annotations

import base64
import json
import math
import time
from dataclasses import dataclass, replace

import numpy as np

from .geometry import BoundaryCurve, PointSet, collocation_points, source_points
from .tikhonov import (
    accum_matmul,
    as_complex_vector,
    learn_operator_matrix,
    tikhonov_primal,
)
from .specfun import phi_2d_block

_EVAL_CHUNK = 8192
_ALPHA_FLOOR = 1e-15
_SOURCE_CIRCLE_TOL = 1e-12

OPERATOR_FORMAT = "helmlearn-operator"
OPERATOR_VERSION = 1


def default_alpha(m_sources: int, n_collocation: int, source_radius: float) -> float:
    """Regularization default m * n * R^(-2m), floored against underflow."""
    log_alpha = math.log(float(m_sources) * float(n_collocation)) \
        - 2.0 * m_sources * math.log(source_radius)
    return max(math.exp(log_alpha), _ALPHA_FLOOR)


@dataclass(frozen=True)
class WaveProblem:
    """One Dirichlet Helmholtz problem plus its discretization parameters."""

    k: float
    curve: BoundaryCurve
    n_collocation: int
    m_sources: int
    source_radius: float
    alpha: float
    spacing: str = "parameter"

    def __post_init__(self):
        if not (self.k > 0.0 and math.isfinite(self.k)):
            raise ValueError(f"wavenumber k must be positive, got {self.k}")
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        rmax = self.curve.max_radius()
        if self.source_radius <= rmax:
            raise ValueError(
                f"source radius {self.source_radius} must exceed the "
                f"circumscribing curve radius {rmax:.6g}"
            )

    def with_alpha(self, alpha: float) -> "WaveProblem":
        return replace(self, alpha=alpha)

    def collocation(self) -> PointSet:
        return collocation_points(self.curve, self.n_collocation, self.spacing)

    def sources(self) -> PointSet:
        return source_points(self.source_radius, self.m_sources)


@dataclass(frozen=True)
class LearnedOperator:
    """The learned map W plus everything needed to apply it."""

    w: np.ndarray                # (m_sources, n_collocation)
    sources: PointSet
    collocation: PointSet
    k: float
    alpha: float
    learn_seconds: float

    def __post_init__(self):
        if self.w.shape != (len(self.sources), len(self.collocation)):
            raise ValueError(
                f"W shape {self.w.shape} inconsistent with "
                f"{len(self.sources)} sources x {len(self.collocation)} collocation"
            )

    @property
    def source_radius(self) -> float:
        return float(np.hypot(*self.sources.points[0]))


def assemble_training_matrix(
    problem: WaveProblem,
    collocation: PointSet | None = None,
    sources: PointSet | None = None,
) -> np.ndarray:
    """V with rows indexed by collocation points, columns by sources."""
    collocation = collocation if collocation is not None else problem.collocation()
    sources = sources if sources is not None else problem.sources()
    return phi_2d_block(sources.points, collocation.points, problem.k)


def learn(problem: WaveProblem) -> LearnedOperator:
    """Assemble the training matrix and factor it into the operator W."""
    colloc = problem.collocation()
    sources = problem.sources()
    start = time.perf_counter()
    v = assemble_training_matrix(problem, colloc, sources)
    w = learn_operator_matrix(v, problem.alpha)
    elapsed = time.perf_counter() - start
    return LearnedOperator(
        w=w,
        sources=sources,
        collocation=colloc,
        k=problem.k,
        alpha=problem.alpha,
        learn_seconds=elapsed,
    )


def _reject_on_source_circle(points: np.ndarray, radius: float) -> None:
    r = np.hypot(points[:, 0], points[:, 1])
    if np.any(np.abs(r - radius) <= _SOURCE_CIRCLE_TOL * max(radius, 1.0)):
        raise ValueError(
            "evaluation point lies on the source circle where the "
            "fundamental-solution basis is singular"
        )


def evaluate_row(op: LearnedOperator, x) -> np.ndarray:
    """Source-basis row b_x = (phi(x_hat_1, x), ..., phi(x_hat_M, x))."""
    pt = np.asarray(x, dtype=float).reshape(1, 2)
    _reject_on_source_circle(pt, op.source_radius)
    return phi_2d_block(op.sources.points, pt, op.k)[0]


def field_from_sources(
    sources: PointSet, k: float, coefficients: np.ndarray, points: np.ndarray
) -> np.ndarray:
    """Evaluate sum_i c_i phi(x_hat_i, x) on `points`, chunked for memory."""
    coefficients = as_complex_vector(coefficients, "coefficients")
    points = np.asarray(points, dtype=float)
    out = np.empty(len(points), dtype=complex)
    for lo in range(0, len(points), _EVAL_CHUNK):
        chunk = points[lo:lo + _EVAL_CHUNK]
        out[lo:lo + _EVAL_CHUNK] = accum_matmul(
            phi_2d_block(sources.points, chunk, k), coefficients
        )
    return out


def apply_coefficients(op: LearnedOperator, f: np.ndarray) -> np.ndarray:
    """One operator application: source coefficients c = W f."""
    f = as_complex_vector(f, "boundary data")
    if f.shape[0] != op.w.shape[1]:
        raise ValueError(
            f"boundary data length {f.shape[0]} does not match the operator's "
            f"{op.w.shape[1]} collocation points"
        )
    return accum_matmul(op.w, f)


def apply(op: LearnedOperator, f: np.ndarray, queries) -> np.ndarray:
    """Predicted field at query points for boundary data f.

    Computes W f once, then one source-row dot product per query.
    """
    pts = queries.points if isinstance(queries, PointSet) else np.asarray(queries, float)
    _reject_on_source_circle(pts, op.source_radius)
    coeffs = apply_coefficients(op, f)
    return field_from_sources(op.sources, op.k, coeffs, pts)


def mfs_direct_fit(
    problem: WaveProblem, f: np.ndarray, v: np.ndarray | None = None
) -> np.ndarray:
    """Classical one-shot fit: coefficients mu from the primal solve.

    The fitted field at any x is the dot of the source row b_x with mu;
    use `field_from_sources` to evaluate it.
    """
    if v is None:
        v = assemble_training_matrix(problem)
    f = as_complex_vector(f, "boundary data")
    if f.shape[0] != v.shape[0]:
        raise ValueError(
            f"boundary data length {f.shape[0]} does not match {v.shape[0]} "
            "collocation points"
        )
    return tikhonov_primal(v, f, problem.alpha)


def boundary_trace(field, collocation: PointSet) -> np.ndarray:
    """Sample a field at the collocation points: f_j = field(x_j)."""
    singular = field.singular_points
    if len(singular):
        d = np.hypot(
            collocation.points[:, None, 0] - singular[None, :, 0],
            collocation.points[:, None, 1] - singular[None, :, 1],
        )
        if np.min(d) <= 1e-9:
            raise ValueError("field singularity lies on the boundary")
    values = field.evaluate(collocation.points)
    if not np.all(np.isfinite(values.view(float))):
        raise ValueError("boundary trace has non-finite values")
    return values


# ---------------------------------------------------------------------------
# Serialization: JSON container, W as little-endian float64 re/im interleaved
# ---------------------------------------------------------------------------
def operator_to_json_dict(op: LearnedOperator) -> dict:
    w_le = np.ascontiguousarray(op.w, dtype="<c16")
    return {
        "format": OPERATOR_FORMAT,
        "version": OPERATOR_VERSION,
        "k": op.k,
        "alpha": op.alpha,
        "m_sources": len(op.sources),
        "n_collocation": len(op.collocation),
        "learn_seconds": op.learn_seconds,
        "sources": {
            "x": op.sources.points[:, 0].tolist(),
            "y": op.sources.points[:, 1].tolist(),
        },
        "collocation": {
            "x": op.collocation.points[:, 0].tolist(),
            "y": op.collocation.points[:, 1].tolist(),
            "weight": op.collocation.weights.tolist(),
        },
        "w": base64.b64encode(w_le.tobytes()).decode("ascii"),
    }


def operator_from_json_dict(doc: dict) -> LearnedOperator:
    if doc.get("format") != OPERATOR_FORMAT:
        raise ValueError(f"not a serialized operator: format={doc.get('format')!r}")
    m = int(doc["m_sources"])
    n = int(doc["n_collocation"])
    raw = base64.b64decode(doc["w"])
    if len(raw) != m * n * 16:
        raise ValueError(
            f"operator payload has {len(raw)} bytes, expected {m * n * 16}"
        )
    w = np.frombuffer(raw, dtype="<c16").reshape(m, n).astype(complex)
    sources = PointSet(
        points=np.stack(
            [np.asarray(doc["sources"]["x"]), np.asarray(doc["sources"]["y"])], axis=1
        ),
        role="source",
    )
    collocation = PointSet(
        points=np.stack(
            [np.asarray(doc["collocation"]["x"]), np.asarray(doc["collocation"]["y"])],
            axis=1,
        ),
        role="collocation",
        weights=np.asarray(doc["collocation"]["weight"]),
    )
    return LearnedOperator(
        w=w,
        sources=sources,
        collocation=collocation,
        k=float(doc["k"]),
        alpha=float(doc["alpha"]),
        learn_seconds=float(doc.get("learn_seconds", 0.0)),
    )


def save_operator(op: LearnedOperator, path) -> None:
    with open(path, "w") as fh:
        json.dump(operator_to_json_dict(op), fh)


def load_operator(path) -> LearnedOperator:
    with open(path) as fh:
        return operator_from_json_dict(json.load(fh))
