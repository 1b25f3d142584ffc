"""Pure-python kernel backend: LAPACK (via numpy) behind the same contract
as the compiled Jacobi kernels.

Used when the compiled extension is not built, or when forced with
``DESCENTLAB_BACKEND=python``.  LAPACK does not expose its internal
iteration counts, so ``sweeps`` is reported as 0 and convergence failures
carry ``sweeps=None``.
"""

import numpy as np

from .errors import ConvergenceError

BACKEND_NAME = "python"


def _dtype_for(arr):
    return np.complex128 if np.iscomplexobj(arr) else np.float64


def svd_factor(a):
    """Thin SVD factors ``(u, s, v, sweeps)`` with ``s`` nonincreasing."""
    arr = np.asarray(a, dtype=_dtype_for(a))
    try:
        u, s, vh = np.linalg.svd(arr, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        m, n = arr.shape
        raise ConvergenceError(
            f"LAPACK SVD did not converge for a {m}x{n} matrix: {exc}",
            sweeps=None,
        ) from exc
    return u, s, vh.conj().T, 0


def eigh_values(a):
    """Eigenvalues of a Hermitian array, ascending: ``(w, sweeps)``."""
    arr = np.asarray(a, dtype=_dtype_for(a))
    try:
        w = np.linalg.eigvalsh(arr)
    except np.linalg.LinAlgError as exc:
        n = arr.shape[0]
        raise ConvergenceError(
            f"LAPACK eigenvalue solve failed for a {n}x{n} matrix: {exc}",
            sweeps=None,
        ) from exc
    return w, 0
