# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel backend: cyclic Jacobi sweeps for the SVD and for
Hermitian eigenvalues, in float64 and complex128.

One-sided Jacobi orthogonalizes the columns of the (tall) working matrix
with plane rotations and accumulates the right factor exactly as a product
of rotations; the Hermitian solver is the classical two-sided Jacobi
iteration, eigenvalues only.  Both use a fixed cyclic pivot order, so
results are bit-reproducible for a given input on a given platform.
"""

import numpy as np

from descentlab.errors import ConvergenceError

from libc.math cimport fabs, sqrt

BACKEND_NAME = "compiled"

# Sweep cap: SWEEP_FACTOR * max(rows, cols).  Jacobi normally converges in
# well under 20 sweeps; the cap exists to bound runtime on adversarial input.
SWEEP_FACTOR = 100

# Column pair (i, j) is rotated while |a_i . a_j| > PAIR_TOL * |a_i| |a_j|.
PAIR_TOL = 1e-13

# Off-diagonal entries below OFFDIAG_TOL * frobenius(A) count as annihilated.
OFFDIAG_TOL = 1e-14

# Columns whose norm falls below FLUSH_TOL * frobenius(A) are rounding
# residue of the null space; they are set to exact zero so the sweep
# terminates instead of grinding them down through the denormal range.
FLUSH_TOL = 1e-120

ctypedef double complex cdouble

ctypedef fused scalar:
    double
    cdouble


cdef inline double _abs2(cdouble z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double _safe_tangent(double app, double aqq, double habs) nogil:
    """Tangent of the Jacobi angle from the 2x2 Gram data, overflow safe."""
    cdef double tau, t
    if fabs(aqq - app) > 2e10 * habs:
        # asymptotic small angle; the full formula differs by O(t^3)
        return habs / (aqq - app)
    tau = (aqq - app) / (2.0 * habs)
    if tau >= 0:
        t = 1.0 / (tau + sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
    return t


cdef int _onesided_jacobi(scalar[::1, :] a, scalar[::1, :] v,
                          int max_sweeps, double tol, double flush) nogil:
    """Orthogonalize the columns of ``a`` in place; accumulate rotations in ``v``.

    ``flush`` is the absolute column-norm floor below which a column is
    zeroed.  Returns the number of sweeps used, or -1 if the cap was
    reached with rotations still pending.
    """
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t i, j, k
    cdef int sweep
    cdef bint rotated
    cdef double app, aqq, habs, t, c, s
    cdef double flush2 = flush * flush
    cdef scalar g, x, y, phase

    for sweep in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                app = 0.0
                aqq = 0.0
                g = 0
                for k in range(m):
                    x = a[k, i]
                    y = a[k, j]
                    if scalar is double:
                        app += x * x
                        aqq += y * y
                        g += x * y
                    else:
                        app += _abs2(x)
                        aqq += _abs2(y)
                        g += x.conjugate() * y
                if app <= flush2:
                    for k in range(m):
                        a[k, i] = 0
                    continue
                if aqq <= flush2:
                    for k in range(m):
                        a[k, j] = 0
                    continue
                if scalar is double:
                    habs = fabs(g)
                else:
                    habs = sqrt(_abs2(g))
                if habs <= tol * sqrt(app * aqq):
                    continue
                rotated = True
                # Absorb the phase of the Gram entry into column j, then
                # apply the real rotation that annihilates it.
                if scalar is double:
                    phase = 1.0 if g >= 0 else -1.0
                else:
                    phase = g / habs
                t = _safe_tangent(app, aqq, habs)
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(m):
                    x = a[k, i]
                    if scalar is double:
                        y = a[k, j] * phase
                    else:
                        y = a[k, j] * phase.conjugate()
                    a[k, i] = c * x - s * y
                    a[k, j] = s * x + c * y
                for k in range(n):
                    x = v[k, i]
                    if scalar is double:
                        y = v[k, j] * phase
                    else:
                        y = v[k, j] * phase.conjugate()
                    v[k, i] = c * x - s * y
                    v[k, j] = s * x + c * y
        if not rotated:
            return sweep + 1
    return -1


cdef int _hermitian_jacobi(scalar[::1, :] a, int max_sweeps, double thresh) nogil:
    """Diagonalize Hermitian ``a`` in place (values only).

    Returns sweeps used, or -1 on hitting the cap.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef bint rotated
    cdef double app, aqq, habs, t, c, s
    cdef scalar apq, phase, x, y

    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if scalar is double:
                    habs = fabs(apq)
                else:
                    habs = sqrt(_abs2(apq))
                if habs <= thresh:
                    continue
                rotated = True
                if scalar is double:
                    app = a[p, p]
                    aqq = a[q, q]
                    phase = 1.0 if apq >= 0 else -1.0
                else:
                    app = a[p, p].real
                    aqq = a[q, q].real
                    phase = apq / habs
                t = _safe_tangent(app, aqq, habs)
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    if k == p or k == q:
                        continue
                    x = a[k, p]
                    if scalar is double:
                        y = a[k, q] * phase
                    else:
                        y = a[k, q] * phase.conjugate()
                    a[k, p] = c * x - s * y
                    a[k, q] = s * x + c * y
                    if scalar is double:
                        a[p, k] = a[k, p]
                        a[q, k] = a[k, q]
                    else:
                        a[p, k] = a[k, p].conjugate()
                        a[q, k] = a[k, q].conjugate()
                a[p, p] = app - t * habs
                a[q, q] = aqq + t * habs
                a[p, q] = 0
                a[q, p] = 0
        if not rotated:
            return sweep + 1
    return -1


def _svd_sweeps_f64(double[::1, :] a, double[::1, :] v, int cap, double tol,
                    double flush):
    return _onesided_jacobi(a, v, cap, tol, flush)


def _svd_sweeps_c128(cdouble[::1, :] a, cdouble[::1, :] v, int cap, double tol,
                     double flush):
    return _onesided_jacobi(a, v, cap, tol, flush)


def _eigh_sweeps_f64(double[::1, :] a, int cap, double thresh):
    return _hermitian_jacobi(a, cap, thresh)


def _eigh_sweeps_c128(cdouble[::1, :] a, int cap, double thresh):
    return _hermitian_jacobi(a, cap, thresh)


def svd_factor(a):
    """Thin SVD factors of a 2-d array via one-sided Jacobi.

    Returns ``(u, s, v, sweeps)`` with ``s`` nonincreasing, ``u`` (m, k) and
    ``v`` (n, k) for k = min(m, n).  Columns of ``u``/``v`` that belong to
    exactly zero singular values are left as zero vectors; callers complete
    them to an orthonormal set if they need one.
    """
    arr = np.asarray(a)
    is_complex = np.iscomplexobj(arr)
    dtype = np.complex128 if is_complex else np.float64
    m, n = arr.shape
    wide = n > m
    src = arr.conj().T if wide else arr
    work = np.array(src, dtype=dtype, order="F", copy=True)
    cols = work.shape[1]
    acc = np.eye(cols, dtype=dtype, order="F")
    cap = SWEEP_FACTOR * max(m, n)
    flush = FLUSH_TOL * float(np.linalg.norm(arr))
    if is_complex:
        sweeps = _svd_sweeps_c128(work, acc, cap, PAIR_TOL, flush)
    else:
        sweeps = _svd_sweeps_f64(work, acc, cap, PAIR_TOL, flush)
    if sweeps < 0:
        raise ConvergenceError(
            f"one-sided Jacobi SVD did not converge within {cap} sweeps "
            f"for a {m}x{n} matrix",
            sweeps=cap,
        )
    norms = np.linalg.norm(work, axis=0)
    order = np.argsort(-norms, kind="stable")
    s = norms[order]
    left = work[:, order]
    nz = s > 0
    left[:, nz] /= s[nz]
    right = acc[:, order]
    if wide:
        # a^H = left * diag(s) * right^H, hence a = right * diag(s) * left^H.
        return right, s, left, sweeps
    return left, s, right, sweeps


def eigh_values(a):
    """Eigenvalues of a Hermitian 2-d array, ascending, via Jacobi sweeps.

    Returns ``(w, sweeps)``.  The input is assumed Hermitian; only its
    upper/lower consistency within rounding is required.
    """
    arr = np.asarray(a)
    is_complex = np.iscomplexobj(arr)
    dtype = np.complex128 if is_complex else np.float64
    n = arr.shape[0]
    work = np.array(arr, dtype=dtype, order="F", copy=True)
    thresh = OFFDIAG_TOL * float(np.linalg.norm(arr))
    cap = SWEEP_FACTOR * max(n, 1)
    if is_complex:
        sweeps = _eigh_sweeps_c128(work, cap, thresh)
    else:
        sweeps = _eigh_sweeps_f64(work, cap, thresh)
    if sweeps < 0:
        raise ConvergenceError(
            f"Jacobi eigenvalue iteration did not converge within {cap} "
            f"sweeps for a {n}x{n} matrix",
            sweeps=cap,
        )
    w = np.sort(np.real(np.diagonal(work)))
    return w, sweeps
