"""Minimal dense linear algebra over real and complex matrices.

Matrices are plain 2-d numpy arrays (float64 or complex128); every public
operation validates shape and rejects NaN/Inf entries on the way in.  The
factorization work is delegated to the active kernel backend (compiled
Jacobi sweeps or the LAPACK fallback, see :mod:`descentlab.backend`); the
contracts below hold under either.

Conventions
-----------
* ``svd`` returns thin factors: ``a == u @ diag(s) @ v.conj().T`` with
  ``s`` nonincreasing and ``u``/``v`` having orthonormal columns.
* The numerical rank counts singular values above
  ``max(rows, cols) * eps * s[0]``, the standard spectral cutoff.
* ``min_norm_solve`` returns the least-norm least-squares solution, i.e.
  the Moore-Penrose pseudoinverse applied to the right-hand side.
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import ConvergenceError

__all__ = [
    "SvdResult",
    "ConvergenceError",
    "svd",
    "pseudoinverse",
    "min_norm_solve",
    "hermitian_eigenvalues",
    "projection_onto_rowspace",
]

_EPS = float(np.finfo(np.float64).eps)

# Relative Frobenius asymmetry tolerated before an input is rejected as
# non-Hermitian.
_HERMITIAN_RTOL = 1e-10


def _as_matrix(a, op):
    """Validate and coerce ``a`` to a nonempty, finite, 2-d float64/complex128 array."""
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise ValueError(f"{op}: expected a 2-d matrix, got ndim={arr.ndim}")
    if arr.size == 0:
        raise ValueError(f"{op}: matrix is empty (shape {arr.shape})")
    dtype = np.complex128 if np.iscomplexobj(arr) else np.float64
    arr = np.asarray(arr, dtype=dtype)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{op}: matrix contains NaN or Inf entries")
    return arr


def _as_vector(y, length, op):
    vec = np.asarray(y)
    if vec.ndim != 1:
        raise ValueError(f"{op}: expected a 1-d vector, got ndim={vec.ndim}")
    if vec.shape[0] != length:
        raise ValueError(f"{op}: vector has {vec.shape[0]} entries, expected {length}")
    dtype = np.complex128 if np.iscomplexobj(vec) else np.float64
    vec = np.asarray(vec, dtype=dtype)
    if not np.all(np.isfinite(vec)):
        raise ValueError(f"{op}: vector contains NaN or Inf entries")
    return vec


def rank_cutoff(shape, leading_singular_value):
    """Spectral cutoff below which singular values count as zero."""
    return max(shape) * _EPS * leading_singular_value


def _complete_orthonormal(q):
    """Replace (near-)zero columns of ``q`` with unit vectors orthogonal to the rest.

    Deterministic: each missing direction is the best standard basis vector
    after projecting out the established columns, Gram-Schmidt applied twice.
    """
    norms = np.linalg.norm(q, axis=0)
    missing = np.flatnonzero(norms < 0.5)
    if missing.size == 0:
        return q
    q = q.copy()
    m = q.shape[0]
    basis = np.eye(m, dtype=q.dtype)
    for col in missing:
        others = np.delete(np.arange(q.shape[1]), col)
        established = q[:, others]
        best = None
        best_norm = -1.0
        for cand in range(m):
            w = basis[:, cand] - established @ (established.conj().T @ basis[:, cand])
            w = w - established @ (established.conj().T @ w)
            wn = np.linalg.norm(w)
            if wn > best_norm:
                best_norm = wn
                best = w
        q[:, col] = best / best_norm
    return q


@dataclass(frozen=True, eq=False)
class SvdResult:
    """Thin singular value decomposition with a numerical rank.

    ``u`` is (rows, k), ``v`` is (cols, k), ``singular_values`` has length
    k = min(rows, cols) sorted nonincreasing, and
    ``u @ diag(singular_values) @ v.conj().T`` reconstructs the input.
    """

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray
    rank: int

    def reconstruct(self):
        return (self.u * self.singular_values) @ self.v.conj().T


def svd(a):
    """Singular value decomposition of a nonempty matrix.

    Deterministic for a fixed input and backend.  Raises
    :class:`ConvergenceError` (carrying the sweep count) if the iterative
    kernel hits its sweep cap.
    """
    arr = _as_matrix(a, "svd")
    u, s, v, _ = backend.active().svd_factor(arr)
    u = _complete_orthonormal(u)
    v = _complete_orthonormal(v)
    cutoff = rank_cutoff(arr.shape, s[0] if s.size else 0.0)
    rank = int(np.count_nonzero(s > cutoff))
    return SvdResult(u=u, singular_values=s, v=v, rank=rank)


def pseudoinverse(a):
    """Moore-Penrose pseudoinverse, built from the SVD with the rank cutoff."""
    res = svd(a)
    r = res.rank
    if r == 0:
        return np.zeros((res.v.shape[0], res.u.shape[0]), dtype=res.u.dtype)
    return (res.v[:, :r] / res.singular_values[:r]) @ res.u[:, :r].conj().T


def min_norm_solve(a, y):
    """Least-norm solution of ``min ||a x - y||``.

    Among all least-squares minimizers this returns the one of smallest
    Euclidean norm.  When the numerical rank equals the number of rows the
    system is interpolated: ``||a x - y|| <= 1e-8 ||y||``.
    """
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise ValueError(f"min_norm_solve: expected a 2-d matrix, got ndim={arr.ndim}")
    rows, cols = arr.shape
    vec = _as_vector(y, rows, "min_norm_solve")
    if cols == 0:
        return np.zeros(0, dtype=vec.dtype)
    res = svd(arr)
    r = res.rank
    if r == 0:
        dtype = np.result_type(res.u.dtype, vec.dtype)
        return np.zeros(cols, dtype=dtype)
    coef = (res.u[:, :r].conj().T @ vec) / res.singular_values[:r]
    return res.v[:, :r] @ coef


def hermitian_eigenvalues(a):
    """Eigenvalues of a Hermitian matrix, real and nondecreasing.

    The input must be Hermitian within a relative Frobenius tolerance of
    1e-10; it is symmetrized before the solve so that both kernel backends
    see an exactly Hermitian operand.
    """
    arr = _as_matrix(a, "hermitian_eigenvalues")
    rows, cols = arr.shape
    if rows != cols:
        raise ValueError(f"hermitian_eigenvalues: matrix is {rows}x{cols}, not square")
    scale = np.linalg.norm(arr)
    asym = np.linalg.norm(arr - arr.conj().T)
    if asym > _HERMITIAN_RTOL * scale:
        raise ValueError(
            "hermitian_eigenvalues: input is not Hermitian "
            f"(relative asymmetry {asym / scale:.3e})"
        )
    herm = (arr + arr.conj().T) / 2.0
    w, _ = backend.active().eigh_values(herm)
    return np.asarray(w, dtype=np.float64)


def projection_onto_rowspace(a):
    """Orthogonal projection onto the row space of ``a``.

    Returns the cols-by-cols matrix ``pinv(a) @ a``; idempotent and
    Hermitian within rounding.
    """
    res = svd(_as_matrix(a, "projection_onto_rowspace"))
    vr = res.v[:, : res.rank]
    return vr @ vr.conj().T
