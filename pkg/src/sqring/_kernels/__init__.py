"""Hot-kernel dispatch: compiled Wigner kernel with a pure-numpy fallback.

The displaced-parity Wigner evaluation is the one loop in the package that
dominates runtime (every phase-space grid point applies a displacement to
the state).  At import time the Cython extension is preferred; when it is
missing the batched numpy implementation in :mod:`._fallback` is used.

Both backends compute the same factorization.  With K = a+ - a and
D_i = diag(i^n), the matrix i K equals D_i T D_i^H where T is the real
symmetric tridiagonal with off-diagonal sqrt(n); diagonalizing T = Q L Q^T
(Q real orthogonal) gives, for beta = t e^{i theta},

    D(-beta) = R(theta) D_i Q e^{i t L} Q^T D_i^H R(-theta),

and the outer unit-modulus diagonals R(theta) D_i drop out of the parity
sum, leaving only the theta -> theta + pi/2 shift on the input phases.
Everything heavy is then real-matrix arithmetic.
"""

import math
import os
from functools import lru_cache

import numpy as np

try:
    from . import _wigner_cy as _compiled
except ImportError:  # extension not built
    _compiled = None

from . import _fallback

BACKEND = "cython" if _compiled is not None else "python"

__all__ = ["BACKEND", "thread_count", "wigner_grid"]


def thread_count() -> int:
    """Parallelism cap from SQR_THREADS (0 or unset = auto)."""
    try:
        n = int(os.environ.get("SQR_THREADS", "0"))
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


@lru_cache(maxsize=8)
def _displacement_eigensystem(dim: int):
    """Eigensystem of the real tridiagonal form of the displacement generator."""
    t = np.zeros((dim, dim))
    off = np.sqrt(np.arange(1, dim, dtype=float))
    t[np.arange(dim - 1), np.arange(1, dim)] = off
    t[np.arange(1, dim), np.arange(dim - 1)] = off
    lam, q = np.linalg.eigh(t)
    q = np.ascontiguousarray(q)
    qt = np.ascontiguousarray(q.T)
    return np.ascontiguousarray(lam), q, qt


def wigner_grid(amplitudes, t, theta, prefactor, backend=None):
    """Parity-weighted displaced-state norms over flattened grid points.

    Returns prefactor * sum_n (-1)^n |(D(-beta_j) psi)_n|^2 for each j,
    beta_j = t_j e^{i theta_j}.  ``backend`` forces 'cython' or 'python';
    default uses the selected one.
    """
    psi = np.ascontiguousarray(amplitudes, dtype=complex)
    t = np.ascontiguousarray(t, dtype=float)
    theta = np.ascontiguousarray(theta, dtype=float) + 0.5 * math.pi
    lam, q, qt = _displacement_eigensystem(psi.shape[0])

    if backend is None:
        backend = BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel requested but not built")
        return _compiled.wigner_grid(
            lam, q, qt, psi, t, theta, float(prefactor), thread_count()
        )
    if backend == "python":
        return _fallback.wigner_grid(lam, q, qt, psi, t, theta, float(prefactor))
    raise ValueError(f"unknown backend {backend!r}")
