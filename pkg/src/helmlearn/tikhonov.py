"""Dense complex Tikhonov solvers for the boundary-data regression.

The regression min ||a V - b||^2 + alpha ||a||^2 (and its primal twin
min ||f - V c||^2 + alpha ||c||^2) is solved through a shifted Gram
matrix (V V* + alpha I or V* V + alpha I) factored by Cholesky; the
push-through identity

    V* (V V* + alpha I)^(-1) = (V* V + alpha I)^(-1) V*

lets one factorization serve both forms. Vector solves pick the smaller
Gram side; the operator matrix W is always computed in the push-through
form with V* as the right-hand side (see `learn_operator_matrix` for the
cancellation argument). alpha = 0 is rejected: the shifted Gram must be
positive definite for the minimizer to be unique.

Matrix products with inner dimension >= 4096 are accumulated in chunks
combined by compensated (Neumaier) summation, since long oscillatory dot
products are the accuracy bottleneck at high wavenumber.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

_ACCUMULATE_THRESHOLD = 4096
_ACCUMULATE_CHUNK = 2048


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got {a.ndim}-D")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError(f"{name} has non-finite entries")
    return a


def as_complex_vector(v, name: str = "vector") -> np.ndarray:
    v = np.ascontiguousarray(v, dtype=complex)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got {v.ndim}-D")
    if not np.all(np.isfinite(v.view(float))):
        raise ValueError(f"{name} has non-finite entries")
    return v


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha <= 0.0:
        raise ValueError(
            f"regularization parameter must be positive, got {alpha}"
        )
    return alpha


def accum_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a @ b with compensated chunk accumulation for long inner dimensions."""
    inner = a.shape[-1]
    if inner < _ACCUMULATE_THRESHOLD:
        return a @ b
    total = None
    comp = None
    for lo in range(0, inner, _ACCUMULATE_CHUNK):
        part = a[..., lo:lo + _ACCUMULATE_CHUNK] @ b[lo:lo + _ACCUMULATE_CHUNK]
        if total is None:
            total = part
            comp = np.zeros_like(part)
        else:
            new = total + part
            lost = np.where(
                np.abs(total) >= np.abs(part),
                (total - new) + part,
                (part - new) + total,
            )
            comp = comp + lost
            total = new
    return total + comp


def hermitian_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A X = B for Hermitian positive definite A by Cholesky.

    Raises numpy.linalg.LinAlgError when a non-positive-definite pivot is
    met (for the shifted Gram matrices here that signals alpha too small
    for the conditioning of V).
    """
    a = as_complex_matrix(a, "A")
    b = as_complex_matrix(b, "B") if np.ndim(b) == 2 else as_complex_vector(b, "B")
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"A must be square, got {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"B has {b.shape[0]} rows, A is {a.shape[0]} x {a.shape[1]}")
    scale = np.linalg.norm(a)
    if scale > 0 and np.linalg.norm(a - a.conj().T) > 1e-12 * scale:
        raise ValueError("A is not Hermitian within 1e-12")
    try:
        factor = scipy.linalg.cho_factor(a, lower=False, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"Cholesky failed ({exc}); matrix is not positive definite"
        ) from None
    return scipy.linalg.cho_solve(factor, b, check_finite=False)


def _gram_plus_shift(v: np.ndarray, alpha: float, side: str) -> np.ndarray:
    if side == "rows":  # V V* , n x n
        g = accum_matmul(v, v.conj().T)
    else:  # V* V , m x m
        g = accum_matmul(v.conj().T, v)
    g[np.diag_indices_from(g)] += alpha
    return g


def tikhonov_dual(v: np.ndarray, b: np.ndarray, alpha: float) -> np.ndarray:
    """Row-form minimizer a* = b V* (V V* + alpha I)^(-1).

    `v` is (n, m), `b` has length m; the result has length n and is the
    unique minimizer of ||a V - b||^2 + alpha ||a||^2.
    """
    v = as_complex_matrix(v, "V")
    b = as_complex_vector(b, "b")
    alpha = _check_alpha(alpha)
    n, m = v.shape
    if b.shape[0] != m:
        raise ValueError(f"b has length {b.shape[0]}, expected {m}")
    if n <= m:
        g = _gram_plus_shift(v, alpha, "rows")
        y = accum_matmul(b, v.conj().T)
        return hermitian_solve(g, y.conj()).conj()
    g = _gram_plus_shift(v, alpha, "cols")
    return accum_matmul(v, hermitian_solve(g, b.conj())).conj()


def tikhonov_primal(v: np.ndarray, f: np.ndarray, alpha: float) -> np.ndarray:
    """Column-form minimizer c* = (V* V + alpha I)^(-1) V* f.

    `v` is (n, m), `f` has length n; the result has length m and is the
    unique minimizer of ||f - V c||^2 + alpha ||c||^2.
    """
    v = as_complex_matrix(v, "V")
    f = as_complex_vector(f, "f")
    alpha = _check_alpha(alpha)
    n, m = v.shape
    if f.shape[0] != n:
        raise ValueError(f"f has length {f.shape[0]}, expected {n}")
    # tie-break m == n toward the rows Gram so every solver form shares one
    # factorization (keeps the dual and primal pipelines consistent)
    if m < n:
        g = _gram_plus_shift(v, alpha, "cols")
        return hermitian_solve(g, accum_matmul(v.conj().T, f))
    g = _gram_plus_shift(v, alpha, "rows")
    return accum_matmul(v.conj().T, hermitian_solve(g, f))


def learn_operator_matrix(v: np.ndarray, alpha: float) -> np.ndarray:
    """W = V* (V V* + alpha I)^(-1), so tikhonov_dual(V, b, alpha) == b W.

    Always computed in the push-through form (V* V + alpha I)^(-1) V*,
    never as V* times an explicit inverse: the inverse has norm ~ 1/alpha
    in the directions the V* product then cancels, which costs ~6 digits
    at the alpha values used here. With V* on the right-hand side the
    small singular directions enter sigma-weighted and the cancellation
    never materializes.
    """
    v = as_complex_matrix(v, "V")
    alpha = _check_alpha(alpha)
    g = _gram_plus_shift(v, alpha, "cols")
    # C layout so a serialized round trip applies bitwise identically
    return np.ascontiguousarray(hermitian_solve(g, v.conj().T))
