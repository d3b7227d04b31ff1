"""Dense matrix exponential by scaling and squaring.

The kernel is a truncated Taylor series evaluated by Horner's scheme on the
scaled matrix A/2**s, followed by s repeated squarings.  The series order is
chosen a priori from the geometric tail bound

    || exp(B) - T_m(B) ||  <=  theta**(m+1) / (m+1)!  *  1 / (1 - theta/(m+2))

for ||B||_1 <= theta, with the budget tightened by a factor 2**(s+2) to absorb
error doubling through the squaring stage.  This keeps the series truncation
error below the requested tolerance for any input whose norm is representable;
inputs whose 1-norm overflows are rejected because no scaling can then meet
the tolerance.
"""

import numpy as np

__all__ = ["expm", "ExpmError"]

_THETA = 0.5
_MAX_ORDER = 64


class ExpmError(ValueError):
    """Raised when the exponential cannot be computed to tolerance."""


def _series_order(theta, budget):
    """Smallest Taylor order whose a-priori tail bound is below budget."""
    term = 1.0
    for m in range(_MAX_ORDER):
        term *= theta / (m + 1)
        tail = term / (1.0 - theta / (m + 2))
        if tail <= budget:
            return m + 1
    return None


def expm(a, tol=1e-13):
    """Return exp(a) for a square complex matrix.

    Parameters
    ----------
    a : (n, n) array_like
        Square matrix with finite entries.
    tol : float
        A-priori bound on the series-truncation error of the result.

    Raises
    ------
    ExpmError
        If the input is not square, has non-finite entries, or its norm
        overflows so the tolerance cannot be met.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ExpmError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ExpmError("matrix has non-finite entries")
    if tol <= 0.0:
        raise ExpmError("tol must be positive")

    n = a.shape[0]
    eye = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a, 1)
    if not np.isfinite(norm):
        raise ExpmError("matrix 1-norm overflows; tolerance unreachable")
    if norm == 0.0:
        return eye.copy()

    s = max(0, int(np.ceil(np.log2(norm / _THETA))))
    budget = tol / (2.0 ** (s + 2))
    if budget <= 0.0 or not np.isfinite(budget):
        raise ExpmError(f"scaling by 2**{s} leaves no error budget for tol={tol}")
    order = _series_order(_THETA, budget)
    if order is None:
        raise ExpmError(f"series order cap exceeded for tol={tol}")

    b = a / (2.0**s)
    # Horner evaluation of sum_{k<=order} B^k / k!
    result = eye + b / order
    for k in range(order - 1, 0, -1):
        result = eye + (b @ result) / k
    for _ in range(s):
        result = result @ result
    return result
