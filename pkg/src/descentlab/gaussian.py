"""Risk of minimum-norm least squares with isotropic Gaussian features.

The data model: x is standard normal in R^D, y = x . beta + sigma * eps.
A fit uses only a feature subset T of size p: beta_hat on T is the
least-norm solution of the subsampled system, zero off T.  Because x is
isotropic, the prediction risk of any coefficient vector b is
``||beta - b||^2 + sigma^2``, which is what both the closed forms and the
Monte Carlo estimator here compute.

Closed forms cover a fixed subset (noise-free and noisy), the expectation
over a uniformly random subset of size p, and the "prescient" model that
takes the p largest coefficients of beta_j^2 = 1/j^2 with infinitely many
features.  All of them blow up on the band n-1 <= p <= n+1, encoded as
DIVERGENT rather than a float infinity.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import min_norm_solve
from .risk import DIVERGENT, RiskValue, finite_risk
from .seeding import STREAM_TRIAL, substream
from .subsets import FeatureSet

__all__ = [
    "GaussianSpec",
    "SplitNorms",
    "BASEL",
    "ZERO_OUT_TOL",
    "split_norms",
    "noiseless_risk",
    "noisy_risk",
    "random_selection_risk",
    "prescient_norms",
    "prescient_risk",
    "sample_design",
    "fit",
    "monte_carlo_risk",
]

# sum_{j>=1} 1/j^2: the squared norm of the prescient coefficient sequence.
BASEL = math.pi**2 / 6

# Out-of-subset norms at or below this are treated as exactly zero, so a
# floating-point split of a sparse beta cannot trigger spurious divergence.
ZERO_OUT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class GaussianSpec:
    """Problem instance: dimension D, sample size n, noise sigma, true beta."""

    D: int
    n: int
    sigma: float
    beta: np.ndarray

    def __post_init__(self):
        if self.D < 1:
            raise ValueError(f"D must be >= 1, got {self.D}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        beta = np.array(self.beta, dtype=np.float64, copy=True)
        if beta.shape != (self.D,):
            raise ValueError(f"beta must have shape ({self.D},), got {beta.shape}")
        if not np.all(np.isfinite(beta)):
            raise ValueError("beta contains NaN or Inf entries")
        beta.setflags(write=False)
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class SplitNorms:
    """Squared norms of beta restricted to a subset and to its complement."""

    in_norm_sq: float
    out_norm_sq: float

    def __post_init__(self):
        if self.in_norm_sq < 0 or self.out_norm_sq < 0:
            raise ValueError(
                f"squared norms must be >= 0, got ({self.in_norm_sq}, {self.out_norm_sq})"
            )


def split_norms(beta, subset: FeatureSet) -> SplitNorms:
    """Realized SplitNorms of ``beta`` for a feature subset."""
    beta = np.asarray(beta, dtype=np.float64)
    subset.validate_within(beta.shape[0])
    mask = np.zeros(beta.shape[0], dtype=bool)
    mask[subset.zero_based] = True
    inside = float(np.dot(beta[mask], beta[mask]))
    outside = float(np.dot(beta[~mask], beta[~mask]))
    return SplitNorms(inside, outside)


def noiseless_risk(norms: SplitNorms, n: int, p: int) -> RiskValue:
    """Exact risk for a fixed subset of size p, noise-free responses.

    Four branches: for ``p <= n-2`` the classical variance-inflated
    out-of-subset norm; divergent on ``n-1 <= p <= n+1`` when mass lies
    outside the subset; for ``p >= n+2`` the interpolating expression whose
    in-subset term shrinks like ``1 - n/p``; and when the subset carries all
    of beta, ``||beta_T||^2 * max(1 - n/p, 0)`` regardless of the band.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    inside, outside = norms.in_norm_sq, norms.out_norm_sq
    if outside <= ZERO_OUT_TOL:
        if p == 0:
            return finite_risk(inside)  # inside is 0 when the split is consistent
        return finite_risk(inside * max(1.0 - n / p, 0.0))
    if p <= n - 2:
        return finite_risk(outside * (1.0 + p / (n - p - 1.0)))
    if p <= n + 1:
        return DIVERGENT
    return finite_risk(inside * (1.0 - n / p) + outside * (1.0 + n / (p - n - 1.0)))


def noisy_risk(norms: SplitNorms, sigma: float, n: int, p: int) -> RiskValue:
    """Exact risk for a fixed subset with response noise of deviation sigma.

    The irreducible sigma^2 rides along with the out-of-subset norm:
    ``(out + sigma^2)(1 + p/(n-1-p))`` below the threshold, the analogous
    inflation above it, and an unconditionally divergent middle band.
    With sigma = 0 this defers to :func:`noiseless_risk`.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return noiseless_risk(norms, n, p)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    inside, outside = norms.in_norm_sq, norms.out_norm_sq
    noise = sigma * sigma
    if p <= n - 2:
        return finite_risk((outside + noise) * (1.0 + p / (n - 1.0 - p)))
    if p <= n + 1:
        return DIVERGENT
    return finite_risk(
        inside * (1.0 - n / p) + (outside + noise) * (1.0 + n / (p - n - 1.0))
    )


def random_selection_risk(beta_norm_sq: float, D: int, n: int, p: int) -> RiskValue:
    """Expected risk when T is a uniformly random subset of size p.

    ``beta_norm_sq * (1 - p/D)(1 + p/(n-p-1))`` for ``p <= n-2`` and
    ``beta_norm_sq * (1 - (n/D)(2 - (D-n-1)/(p-n-1)))`` for ``p >= n+2``.
    The band between is divergent unless p = D, where the complement is
    empty with certainty.
    """
    if beta_norm_sq < 0:
        raise ValueError(f"beta_norm_sq must be >= 0, got {beta_norm_sq}")
    if not 0 <= p <= D:
        raise ValueError(f"p must lie in [0, {D}], got {p}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if p <= n - 2:
        return finite_risk(beta_norm_sq * (1.0 - p / D) * (1.0 + p / (n - p - 1.0)))
    if p <= n + 1:
        if p == D:
            return finite_risk(beta_norm_sq * max(1.0 - n / p, 0.0))
        return DIVERGENT
    return finite_risk(
        beta_norm_sq * (1.0 - (n / D) * (2.0 - (D - n - 1.0) / (p - n - 1.0)))
    )


def prescient_norms(p: int) -> SplitNorms:
    """SplitNorms for prescient selection of the p largest of beta_j^2 = 1/j^2.

    The ambient dimension is infinite; the out-of-subset mass is the exact
    analytic tail pi^2/6 minus the running partial sum, floored at zero.
    """
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    if p == 0:
        return SplitNorms(0.0, BASEL)
    j = np.arange(1, p + 1, dtype=np.float64)
    inside = float(np.sum(1.0 / (j * j)))
    return SplitNorms(inside, max(BASEL - inside, 0.0))


def prescient_risk(p: int, n: int) -> RiskValue:
    """Noise-free risk under prescient selection: the fixed-subset form
    evaluated at the prescient norms."""
    return noiseless_risk(prescient_norms(p), n, p)


def sample_design(spec: GaussianSpec, subset: FeatureSet, rng):
    """Draw one training set; returns ``(X_T, X_Tc, y)``.

    The full n-by-D design has iid standard normal entries; ``X_T`` holds
    the columns in ``subset`` (in increasing index order), ``X_Tc`` the
    rest; ``y = X beta + sigma * eps``.
    """
    subset.validate_within(spec.D)
    x = rng.standard_normal((spec.n, spec.D))
    eps = rng.standard_normal(spec.n)
    y = x @ spec.beta + spec.sigma * eps
    mask = np.zeros(spec.D, dtype=bool)
    mask[subset.zero_based] = True
    return x[:, mask], x[:, ~mask], y


def fit(x_t, y, subset: FeatureSet, D: int):
    """Least-norm fit on the subset columns, zero elsewhere.

    ``x_t`` must be n-by-p with p = len(subset); returns the full
    D-dimensional coefficient vector.
    """
    x_t = np.asarray(x_t)
    y = np.asarray(y)
    if x_t.ndim != 2 or x_t.shape != (y.shape[0], subset.p):
        raise ValueError(
            f"design is {x_t.shape}, expected ({y.shape[0]}, {subset.p})"
        )
    subset.validate_within(D)
    beta_hat = np.zeros(D, dtype=np.result_type(x_t.dtype, y.dtype, np.float64))
    if subset.p:
        beta_hat[subset.zero_based] = min_norm_solve(x_t, y)
    return beta_hat


def monte_carlo_risk(spec: GaussianSpec, subset: FeatureSet, trials: int, master_seed):
    """Empirical risk of the subset fit: ``(mean, stderr)`` over trials.

    Each trial resamples the design and noise, fits, and evaluates the
    exact parameter-space identity ``||beta - beta_hat||^2 + sigma^2``
    (no test sample is drawn, so no estimator variance comes from one).
    Trial t uses the stream (master_seed, STREAM_TRIAL, t); results are
    accumulated in trial order, so the output is reproducible.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    noise = spec.sigma**2
    values = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        rng = substream(master_seed, STREAM_TRIAL, t)
        x_t, _, y = sample_design(spec, subset, rng)
        beta_hat = fit(x_t, y, subset, spec.D)
        diff = spec.beta - beta_hat
        values[t] = float(np.dot(diff, diff)) + noise
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return mean, stderr
