"""Error reports, convergence-rate fits, and the Fourier-decay radius probe.

Error norms follow the raw-Euclidean convention (plain 2-norm over all
query points, no averaging); RMS and the arc-length-weighted boundary L2
norm are provided alongside for boundary-style reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Sequence

import numpy as np

from .specfun import bessel_j, hankel1


@dataclass(frozen=True)
class ErrorReport:
    """Norms of (numeric - exact) over a query-point set, plus timings."""

    two_norm: float
    inf_norm: float
    rms: float
    point_count: int
    learn_seconds: float = 0.0
    apply_seconds: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DecayFit:
    """Least-squares line through (parameter, log10 error)."""

    rate: float
    intercept: float
    r_squared: float
    window: tuple[float, float]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        return d


def error_report(
    exact: np.ndarray,
    numeric: np.ndarray,
    learn_seconds: float = 0.0,
    apply_seconds: float = 0.0,
) -> ErrorReport:
    exact = np.asarray(exact, dtype=complex)
    numeric = np.asarray(numeric, dtype=complex)
    if exact.shape != numeric.shape:
        raise ValueError(
            f"length mismatch: exact {exact.shape}, numeric {numeric.shape}"
        )
    err = np.abs(numeric - exact)
    n = err.size
    two = float(np.linalg.norm(err))
    return ErrorReport(
        two_norm=two,
        inf_norm=float(err.max()) if n else 0.0,
        rms=two / math.sqrt(n) if n else 0.0,
        point_count=n,
        learn_seconds=learn_seconds,
        apply_seconds=apply_seconds,
    )


def boundary_l2_error(
    exact: np.ndarray, numeric: np.ndarray, weights: np.ndarray
) -> float:
    """Arc-length-weighted boundary L2 norm of the error."""
    err2 = np.abs(np.asarray(numeric) - np.asarray(exact)) ** 2
    return float(math.sqrt(np.sum(np.asarray(weights) * err2)))


def fit_decay(samples: Sequence[tuple[float, float]]) -> DecayFit:
    """Fit log10(error) = rate * parameter + intercept.

    Callers must pre-filter samples down to the regime where the error is
    data-limited (see `filter_above_floor` and `trim_error_plateau`).
    """
    if len(samples) < 4:
        raise ValueError(f"need at least 4 samples to fit a rate, got {len(samples)}")
    params = np.array([float(p) for p, _ in samples])
    errors = np.array([float(e) for _, e in samples])
    if np.any(errors <= 0.0):
        raise ValueError("errors must be positive")
    logs = np.log10(errors)
    rate, intercept = np.polyfit(params, logs, 1)
    predicted = rate * params + intercept
    ss_res = float(np.sum((logs - predicted) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res < 1e-20 else 0.0
    else:
        r2 = max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return DecayFit(
        rate=float(rate),
        intercept=float(intercept),
        r_squared=r2,
        window=(float(params.min()), float(params.max())),
    )


def filter_above_floor(
    samples: Sequence[tuple[float, float]],
    alpha: float | Sequence[float],
    data_norm: float,
    multiplier: float = 100.0,
) -> list[tuple[float, float]]:
    """Drop samples where regularization bias dominates: error < mult*alpha*||f||."""
    alphas = (
        [float(alpha)] * len(samples)
        if np.isscalar(alpha)
        else [float(a) for a in alpha]
    )
    return [
        (p, e)
        for (p, e), a in zip(samples, alphas)
        if e >= multiplier * a * data_norm
    ]


def trim_error_plateau(
    samples: Sequence[tuple[float, float]], improvement: float = 0.9
) -> list[tuple[float, float]]:
    """Keep the leading run of decaying errors; cut where decay stalls.

    In double precision the attainable error bottoms out at a roundoff
    plateau well above alpha * ||f||, so rate fits must stop at the first
    sample that fails to improve on its predecessor by the given factor.
    """
    kept = []
    for param, err in samples:
        if kept and err > improvement * kept[-1][1]:
            break
        kept.append((param, err))
    return kept


def estimate_rho(samples: np.ndarray) -> tuple[DecayFit, float]:
    """Continuation-radius estimate from equiangular unit-circle samples.

    Fits log10 |c_m| against |m| over the mid-band |m| in [n/8, n/4] of the
    discrete Fourier coefficients (both signs) and returns (fit, 10^-rate).
    Raises when the whole band sits below 1e-14 of the peak coefficient:
    decay that fast cannot be fitted (entire field or numerically zero).
    """
    samples = np.asarray(samples, dtype=complex)
    n = samples.shape[0]
    if samples.ndim != 1 or n < 64:
        raise ValueError("need a 1-D array of at least 64 samples")
    if n & (n - 1):
        raise ValueError(f"sample count must be a power of two, got {n}")
    coeffs = np.fft.fft(samples) / n
    peak = float(np.abs(coeffs).max())
    if peak == 0.0:
        raise ValueError("samples are identically zero")
    lo, hi = n // 8, n // 4
    orders, values = [], []
    floor = 1e-14 * peak
    for m in range(lo, hi + 1):
        for c in (coeffs[m], coeffs[-m]):
            mag = abs(c)
            if mag > floor:
                orders.append(float(m))
                values.append(mag)
    if len(values) < 4:
        raise ValueError(
            "Fourier coefficients in the fitting band are below the noise "
            "floor; decay is too fast to fit"
        )
    fit = fit_decay(list(zip(orders, values)))
    return fit, float(10.0 ** (-fit.rate))


def spectral_s(m: int, k: float, rho: float, r: float) -> complex:
    """Convolution symbol (pi i / 2) H_|m|(k rho) J_|m|(k r).

    Even in m (integer-order reflection leaves the product unchanged), so
    negative orders are folded to |m|. Decays like rho^-|m| up to an
    algebraic factor, which is what makes the mid-band Fourier fit of
    `estimate_rho` meaningful.
    """
    if rho <= 1.0:
        raise ValueError(f"rho must exceed 1, got {rho}")
    if not 0.0 < r <= 1.0:
        raise ValueError(f"r must lie in (0, 1], got {r}")
    order = abs(int(m))
    return 0.5j * math.pi * hankel1(order, k * rho) * bessel_j(order, k * r)
