"""Random-submatrix regression on the discrete Fourier transform matrix.

The observations are entries of mu = F beta (or mu = F diag(t) beta for a
decaying spectrum t) on a random row set S of size n; the fit uses a
column set T of size p, least-norm on F_{S,T}, zero off T.  Every
submatrix of F has full rank min(|rows|, |cols|), so for p >= n the fit
interpolates.

For isotropic random beta with E[beta beta^H] = I/D, the expected
parameter error given (S, T) has a closed eigenvalue form driven by the
spectrum of F_{S,T^c} F_{S,T^c}^H (``conditional_risk``), and a
large-D limit in the sampling ratios (``asymptotic_risk``).  The decaying
spectrum variant scores coefficients by the weighted error
sum_j t_j^2 |beta_j - beta_hat_j|^2 with T fixed to {1, ..., p}.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .linalg import hermitian_eigenvalues, min_norm_solve
from .risk import DIVERGENT, RiskValue, finite_risk
from .seeding import STREAM_BETA, STREAM_TRIAL, substream
from .subsets import FeatureSet, random_subset

__all__ = [
    "BetaModel",
    "Spectrum",
    "FourierSpec",
    "POLE_TOL",
    "dft_matrix",
    "submatrix",
    "spectrum_weights",
    "weighted_risk",
    "fit_fourier",
    "risk_from_eigenvalues",
    "conditional_risk",
    "asymptotic_risk",
    "sample_beta",
    "draw_subsets",
    "monte_carlo_risk",
]

# Eigenvalues of F_{S,T^c} F_{S,T^c}^H this close to 1 make 1/(1 - lambda)
# numerically meaningless; the conditional risk is reported as DIVERGENT.
POLE_TOL = 1e-10


class BetaModel(Enum):
    UNIT_SPHERE_REAL = "unit-sphere-real"
    ISOTROPIC_COMPLEX = "isotropic-complex"


class Spectrum(Enum):
    FLAT = "flat"
    DECAY_INV_SQUARE = "decay-inv-square"


@dataclass(frozen=True)
class FourierSpec:
    """Problem instance: ambient dimension D, row-set size n, and the model
    for beta and for the feature spectrum.  ``p`` is optional because curve
    sweeps vary it per call."""

    D: int
    n: int
    p: int | None = None
    beta_model: BetaModel = BetaModel.UNIT_SPHERE_REAL
    spectrum: Spectrum = Spectrum.FLAT

    def __post_init__(self):
        if self.D < 1:
            raise ValueError(f"D must be >= 1, got {self.D}")
        if not 1 <= self.n <= self.D:
            raise ValueError(f"n must lie in [1, {self.D}], got {self.n}")
        if self.p is not None and not 0 <= self.p <= self.D:
            raise ValueError(f"p must lie in [0, {self.D}], got {self.p}")


@lru_cache(maxsize=4)
def _dft_cached(D):
    # Exponents reduced mod D and looked up in a table of the D-th roots,
    # so every entry is an exactly evaluated root of unity over sqrt(D).
    roots = np.array(
        [cmath.exp(-2j * cmath.pi * k / D) for k in range(D)], dtype=np.complex128
    )
    idx = np.arange(D, dtype=np.int64)
    table = roots[np.mod(np.outer(idx, idx), D)] / math.sqrt(D)
    table.setflags(write=False)
    return table


def dft_matrix(D):
    """The unitary D-by-D DFT matrix: entry (i, j) is w^((i-1)(j-1))/sqrt(D)
    with w = exp(-2 pi i / D).  Cached and returned read-only."""
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    return _dft_cached(int(D))


def submatrix(matrix, rows: FeatureSet, cols: FeatureSet):
    """Submatrix with the given 1-based row and column index sets."""
    return matrix[np.ix_(rows.zero_based, cols.zero_based)]


def spectrum_weights(D, kind: Spectrum):
    """Squared spectrum weights t_i^2 of length D.

    DECAY_INV_SQUARE: t_i^2 = i^-2 normalized to sum to 1 (strictly
    decreasing).  FLAT: all ones.
    """
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    if kind is Spectrum.FLAT:
        return np.ones(D, dtype=np.float64)
    raw = 1.0 / np.arange(1, D + 1, dtype=np.float64) ** 2
    return raw / raw.sum()


def weighted_risk(beta, beta_hat, t_sq):
    """sum_j t_j^2 |beta_j - beta_hat_j|^2."""
    beta = np.asarray(beta)
    beta_hat = np.asarray(beta_hat)
    t_sq = np.asarray(t_sq, dtype=np.float64)
    if not (beta.shape == beta_hat.shape == t_sq.shape):
        raise ValueError(
            f"length mismatch: beta {beta.shape}, beta_hat {beta_hat.shape}, "
            f"weights {t_sq.shape}"
        )
    diff = beta - beta_hat
    return float(np.sum(t_sq * np.abs(diff) ** 2))


def _observations(spec: FourierSpec, beta):
    f = dft_matrix(spec.D)
    t = np.sqrt(spectrum_weights(spec.D, spec.spectrum))
    return f @ (t * beta)


def fit_fourier(spec: FourierSpec, s_rows: FeatureSet, t_cols: FeatureSet, beta):
    """Least-norm fit of the observed rows; returns the full complex
    coefficient vector (zero off ``t_cols``).

    The regression runs on the spectrum-weighted features: design column j
    is t_j times the DFT column, matching the feature scaling under which
    the responses mu = F diag(t) beta were generated.  The coefficients
    therefore estimate beta itself; observing everything (p = n = D)
    recovers beta exactly.  Under the flat spectrum the weights are all
    one and the design is the bare DFT submatrix.
    """
    beta = np.asarray(beta)
    if beta.shape != (spec.D,):
        raise ValueError(f"beta must have shape ({spec.D},), got {beta.shape}")
    s_rows.validate_within(spec.D)
    t_cols.validate_within(spec.D)
    if len(s_rows) != spec.n:
        raise ValueError(f"|S| = {len(s_rows)} but spec.n = {spec.n}")
    mu = _observations(spec, beta)
    beta_hat = np.zeros(spec.D, dtype=np.complex128)
    if t_cols.p:
        design = submatrix(dft_matrix(spec.D), s_rows, t_cols)
        if spec.spectrum is not Spectrum.FLAT:
            t = np.sqrt(spectrum_weights(spec.D, spec.spectrum))
            design = design * t[t_cols.zero_based]
        beta_hat[t_cols.zero_based] = min_norm_solve(design, mu[s_rows.zero_based])
    return beta_hat


def risk_from_eigenvalues(lams, n, D) -> RiskValue:
    """Conditional expected parameter error from the eigenvalues of
    F_{S,T^c} F_{S,T^c}^H: ``1 - 2n/D + (1/D) sum_i 1/(1 - lambda_i)``.

    Any eigenvalue within POLE_TOL of 1 makes the value DIVERGENT.
    """
    lams = np.asarray(lams, dtype=np.float64)
    if np.any(lams >= 1.0 - POLE_TOL):
        return DIVERGENT
    return finite_risk(1.0 - 2.0 * n / D + float(np.sum(1.0 / (1.0 - lams))) / D)


def conditional_risk(s_rows: FeatureSet, t_cols: FeatureSet, D: int) -> RiskValue:
    """Expected parameter error given (S, T), over isotropic beta with
    E[beta beta^H] = I/D.  Requires p >= n."""
    n, p = len(s_rows), len(t_cols)
    if p < n:
        raise ValueError(f"conditional risk needs |T| >= |S|, got p={p} < n={n}")
    s_rows.validate_within(D)
    t_cols.validate_within(D)
    f = dft_matrix(D)
    comp = t_cols.complement(D)
    if comp.p == 0:
        lams = np.zeros(n)
    else:
        block = submatrix(f, s_rows, comp)
        lams = hermitian_eigenvalues(block @ block.conj().T)
    return risk_from_eigenvalues(lams, n, D)


def asymptotic_risk(rho_n, rho_p):
    """Large-D limit of the expected parameter error at sampling ratios
    rho_n = n/D and rho_p = p/D:

        1 - rho_n * (2 - (1 - rho_n) / (rho_p - rho_n))

    The Gram matrix of a random n-by-p submatrix of the unitary DFT has
    the limiting spectrum of a product of two free projections with
    traces rho_n and rho_p, whose mean inverse eigenvalue is
    ``(1 - rho_n) / (rho_p - rho_n)``; that inverse moment drives the
    formula, which coincides with the Gaussian random-selection limit.

    Defined for 0 < rho_n < rho_p <= 1; strictly decreasing in rho_p and
    unbounded as rho_p approaches rho_n from above.
    """
    if not 0 < rho_n < 1:
        raise ValueError(f"rho_n must lie in (0, 1), got {rho_n}")
    if not rho_n < rho_p <= 1:
        raise ValueError(f"rho_p must lie in ({rho_n}, 1], got {rho_p}")
    return 1.0 - rho_n * (2.0 - (1.0 - rho_n) / (rho_p - rho_n))


def sample_beta(spec: FourierSpec, rng):
    """Draw beta per the spec's model: a real unit-sphere point, or complex
    entries with E[beta beta^H] = I/D."""
    if spec.beta_model is BetaModel.UNIT_SPHERE_REAL:
        g = rng.standard_normal(spec.D)
        return g / np.linalg.norm(g)
    scale = math.sqrt(1.0 / (2.0 * spec.D))
    return scale * (rng.standard_normal(spec.D) + 1j * rng.standard_normal(spec.D))


def draw_subsets(spec: FourierSpec, p: int, repeat: int, master_seed):
    """The (S, T) pair for one repeat index, deterministically from the
    master seed.

    T comes from the prefix of a per-repeat permutation (FLAT spectrum) or
    is the fixed prefix {1, ..., p} (decaying spectrum); S is an
    independent uniform subset of size n.  The per-repeat streams do not
    depend on p, so a sweep reuses the same S (and a nested T) at every p:
    common random numbers across the curve.
    """
    if spec.spectrum is Spectrum.FLAT:
        t_cols = random_subset(substream(master_seed, STREAM_TRIAL, repeat, 0), spec.D, p)
    else:
        t_cols = FeatureSet.first(p)
    s_rows = random_subset(substream(master_seed, STREAM_TRIAL, repeat, 1), spec.D, spec.n)
    return s_rows, t_cols


def monte_carlo_risk(spec: FourierSpec, p: int, repeats: int, master_seed, beta=None):
    """Empirical risk at one p, averaged over ``repeats`` draws of (S, T).

    FLAT spectrum: requires p >= n and averages ||beta - beta_hat||^2.
    Decaying spectrum: T = {1, ..., p} deterministically, any p, and the
    weighted error is averaged.  ``beta`` is drawn once from the stream
    (master_seed, STREAM_BETA) when not supplied, so sweeping p under one
    seed evaluates one fixed beta throughout.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    if not 0 <= p <= spec.D:
        raise ValueError(f"p must lie in [0, {spec.D}], got {p}")
    if spec.spectrum is Spectrum.FLAT and p < spec.n:
        raise ValueError(f"flat-spectrum risk needs p >= n, got p={p} < n={spec.n}")
    if beta is None:
        beta = sample_beta(spec, substream(master_seed, STREAM_BETA))
    t_sq = spectrum_weights(spec.D, spec.spectrum)
    values = np.empty(repeats, dtype=np.float64)
    for r in range(repeats):
        s_rows, t_cols = draw_subsets(spec, p, r, master_seed)
        beta_hat = fit_fourier(spec, s_rows, t_cols, beta)
        values[r] = weighted_risk(beta, beta_hat, t_sq)
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(repeats)) if repeats > 1 else 0.0
    return mean, stderr
