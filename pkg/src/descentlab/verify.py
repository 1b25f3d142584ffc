"""Self-check suites behind the ``verify`` CLI subcommand.

Each check cross-validates one layer against an independent route: the
pseudoinverse against the Moore-Penrose axioms, the DFT submatrices
against their algebraic identities, and the closed-form risks against
seeded Monte Carlo.  Returns (name, passed, detail) triples.
"""

import numpy as np

from . import fourier, gaussian, linalg
from .seeding import STREAM_BETA, substream
from .subsets import FeatureSet, random_subset

__all__ = ["run_checks", "pseudoinverse_violation"]


def _random_matrix(rng, rows, cols, rank, complex_entries):
    left = rng.standard_normal((rows, rank))
    right = rng.standard_normal((rank, cols))
    if complex_entries:
        left = left + 1j * rng.standard_normal((rows, rank))
        right = right + 1j * rng.standard_normal((rank, cols))
    return left @ right


def pseudoinverse_violation(a):
    """Worst relative violation of the four Moore-Penrose axioms for ``a``."""
    pinv = linalg.pseudoinverse(a)
    scale = max(np.linalg.norm(a), 1e-30)
    pscale = max(np.linalg.norm(pinv), 1e-30)
    left = a @ pinv
    right = pinv @ a
    return max(
        np.linalg.norm(a @ right - a) / scale,
        np.linalg.norm(pinv @ left - pinv) / pscale,
        np.linalg.norm(left.conj().T - left) / max(np.linalg.norm(left), 1e-30),
        np.linalg.norm(right.conj().T - right) / max(np.linalg.norm(right), 1e-30),
    )


def _check_pseudoinverse_axioms(seed):
    rng = substream(seed, 2, 0)
    worst = 0.0
    for _ in range(20):
        rows = int(rng.integers(1, 40))
        cols = int(rng.integers(1, 40))
        rank = int(rng.integers(0, min(rows, cols) + 1))
        a = _random_matrix(rng, rows, cols, max(rank, 1), bool(rng.integers(0, 2)))
        if rank == 0:
            a = np.zeros_like(a)
        worst = max(worst, pseudoinverse_violation(a))
    ok = worst <= 1e-8
    return "pseudoinverse axioms", ok, f"max relative violation {worst:.2e}"


def _check_dft_identities(seed):
    rng = substream(seed, 2, 1)
    worst_unitary = 0.0
    rank_failures = 0
    worst_complement = 0.0
    worst_trace = 0.0
    for D in (8, 16):
        f = fourier.dft_matrix(D)
        worst_unitary = max(
            worst_unitary, np.linalg.norm(f @ f.conj().T - np.eye(D)) / np.linalg.norm(np.eye(D))
        )
        for _ in range(25):
            na = int(rng.integers(1, D + 1))
            nb = int(rng.integers(1, D + 1))
            # contiguous rows give a true Vandermonde block: provably full rank
            start = int(rng.integers(0, D - na + 1))
            contiguous = FeatureSet(tuple(range(start + 1, start + na + 1)))
            cols = random_subset(rng, D, nb)
            if linalg.svd(fourier.submatrix(f, contiguous, cols)).rank != min(na, nb):
                rank_failures += 1
            rows = random_subset(rng, D, na)
            inside = fourier.submatrix(f, rows, cols)
            outside = fourier.submatrix(f, rows, cols.complement(D))
            gram = inside @ inside.conj().T + outside @ outside.conj().T
            worst_complement = max(
                worst_complement, np.linalg.norm(gram - np.eye(na)) / np.linalg.norm(np.eye(na))
            )
            # trace identity presumes full row rank; arbitrary subsets can be
            # exactly singular, so skip those draws
            if nb >= na and linalg.svd(inside).rank == na:
                proj = linalg.pseudoinverse(inside) @ inside
                worst_trace = max(
                    worst_trace, abs(np.trace(proj.conj().T @ proj).real - na)
                )
    ok = (
        worst_unitary <= 1e-10
        and rank_failures == 0
        and worst_complement <= 1e-10
        and worst_trace <= 1e-8
    )
    detail = (
        f"unitarity {worst_unitary:.2e}, rank failures {rank_failures}, "
        f"complement {worst_complement:.2e}, trace {worst_trace:.2e}"
    )
    return "dft identities", ok, detail


def _check_gaussian_agreement(seed, trials):
    D, n = 30, 12
    rng = substream(seed, STREAM_BETA)
    g = rng.standard_normal(D)
    beta = g / np.linalg.norm(g)
    failures = []
    for sigma in (0.0, 0.5):
        spec = gaussian.GaussianSpec(D, n, sigma, beta)
        for p in (4, 8, 18, 30):
            subset = FeatureSet.first(p)
            norms = gaussian.split_norms(beta, subset)
            theory = gaussian.noisy_risk(norms, sigma, n, p)
            mean, stderr = gaussian.monte_carlo_risk(spec, subset, trials, seed)
            if abs(mean - theory.value) > 3 * max(stderr, 1e-12):
                failures.append((sigma, p, mean, theory.value, stderr))
    ok = not failures
    detail = "all points within 3 stderr" if ok else f"failed points: {failures}"
    return "gaussian closed form vs monte carlo", ok, detail


def _check_fourier_agreement(seed, draws=4000):
    D, n = 16, 4
    rng = substream(seed, 2, 2)
    failures = []
    compared = 0
    for _ in range(10):
        p = int(rng.integers(n, D + 1))
        s_rows = random_subset(rng, D, n)
        t_cols = random_subset(rng, D, p)
        theory = fourier.conditional_risk(s_rows, t_cols, D)
        if theory.is_divergent:
            continue  # pole of the eigenvalue form; nothing finite to compare
        design = fourier.submatrix(fourier.dft_matrix(D), s_rows, t_cols)
        pinv = linalg.pseudoinverse(design)
        betas = (rng.standard_normal((draws, D)) + 1j * rng.standard_normal((draws, D)))
        betas *= np.sqrt(1.0 / (2.0 * D))
        mus = betas @ fourier.dft_matrix(D).T
        fitted = (pinv @ mus[:, s_rows.zero_based].T).T
        errs = np.sum(np.abs(betas) ** 2, axis=1)
        errs -= np.sum(np.abs(betas[:, t_cols.zero_based]) ** 2, axis=1)
        errs += np.sum(np.abs(betas[:, t_cols.zero_based] - fitted) ** 2, axis=1)
        mean = float(np.mean(errs))
        stderr = float(np.std(errs, ddof=1) / np.sqrt(draws))
        if abs(mean - theory.value) > 3 * max(stderr, 1e-12):
            failures.append((p, mean, theory.value, stderr))
        compared += 1
    ok = not failures and compared >= 7
    detail = (
        f"{compared} pairs within 3 stderr" if ok else f"failed pairs: {failures}"
    )
    return "fourier eigenvalue form vs monte carlo", ok, detail


def _check_prescient_tail(_seed):
    value = gaussian.prescient_risk(10**6, 40)
    ok = (not value.is_divergent) and 0 < gaussian.BASEL - value.value < 1e-3
    return (
        "prescient tail limit",
        ok,
        f"risk at p=1e6 is {value.value:.9f} (limit {gaussian.BASEL:.9f})",
    )


def run_checks(seed, trials=2000):
    """Run all verification suites; returns a list of (name, ok, detail)."""
    return [
        _check_pseudoinverse_axioms(seed),
        _check_dft_identities(seed),
        _check_gaussian_agreement(seed, trials),
        _check_fourier_agreement(seed),
        _check_prescient_tail(seed),
    ]
