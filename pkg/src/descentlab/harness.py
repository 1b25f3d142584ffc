"""Experiment orchestration: sweep p, run theory and Monte Carlo side by
side, and emit CSV (plus an optional SVG chart).

Reproducibility: every random quantity derives from the master seed via
keyed substreams.  Per-trial streams do not depend on p, so one trial
reuses its design (and a nested feature subset) across the whole sweep;
points are still unbiased at each p, and curves come out smooth (common
random numbers).  Aggregation always runs in (p, trial) order, so output
bytes are a pure function of the config.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import fourier, gaussian
from .risk import DIVERGENT, RiskValue
from .seeding import STREAM_BETA, STREAM_TRIAL, substream
from .subsets import random_subset

__all__ = [
    "DEFAULT_SEED",
    "UNSTABLE_BAND",
    "TRIM_FRACTION",
    "DEFAULT_GAUSSIAN_TRIALS",
    "DEFAULT_FOURIER_REPEATS",
    "ExperimentModel",
    "ExperimentConfig",
    "RiskPoint",
    "RiskCurve",
    "run_experiment",
    "curve_to_csv",
    "write_csv",
    "render_svg",
    "load_config_file",
    "default_p_grid",
]

# Documented default master seed for all CLI runs.
DEFAULT_SEED = 1729

# Monte Carlo points with |p - n| <= UNSTABLE_BAND are flagged unstable:
# the exact risk is infinite there and finite-trial means are meaningless.
UNSTABLE_BAND = 2

# Fraction trimmed from each tail when summarizing unstable points.
TRIM_FRACTION = 0.1

DEFAULT_GAUSSIAN_TRIALS = 2000
DEFAULT_FOURIER_REPEATS = 10

CSV_HEADER = "p,theory,mc_mean,mc_stderr,unstable"


class ExperimentModel(Enum):
    GAUSSIAN_RANDOM_T = "gaussian-random-t"
    GAUSSIAN_PRESCIENT = "gaussian-prescient"
    FOURIER_FLAT = "fourier-flat"
    FOURIER_DECAY = "fourier-decay"


@dataclass(frozen=True)
class ExperimentConfig:
    """A sweep over p for one model.

    ``trials`` counts Monte Carlo trials per point for the Gaussian models
    (0 = theory only) and (S, T) repeats for the Fourier models.
    """

    model: ExperimentModel
    n: int
    p_grid: tuple[int, ...]
    D: int | None = None
    sigma: float = 0.0
    trials: int = 0
    master_seed: int = DEFAULT_SEED
    output_path: str | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.trials < 0:
            raise ValueError(f"trials must be >= 0, got {self.trials}")
        grid = tuple(int(p) for p in self.p_grid)
        if not grid:
            raise ValueError("p_grid is empty")
        if any(p < 0 for p in grid):
            raise ValueError("p_grid entries must be >= 0")
        if sorted(set(grid)) != list(grid):
            raise ValueError("p_grid must be strictly increasing")
        object.__setattr__(self, "p_grid", grid)
        if self.model is not ExperimentModel.GAUSSIAN_PRESCIENT:
            if self.D is None:
                raise ValueError(f"model {self.model.value} requires D")
            if self.D < self.n:
                raise ValueError(f"D = {self.D} must be >= n = {self.n}")
            if grid[-1] > self.D:
                raise ValueError(f"p_grid exceeds D = {self.D}")
        if self.model is ExperimentModel.FOURIER_FLAT and grid[0] < self.n:
            raise ValueError(
                f"flat-spectrum Fourier curves need p >= n = {self.n}, "
                f"grid starts at {grid[0]}"
            )
        if self.model in (ExperimentModel.FOURIER_FLAT, ExperimentModel.FOURIER_DECAY):
            if self.trials < 1:
                raise ValueError("Fourier curves need at least one repeat")


@dataclass(frozen=True)
class RiskPoint:
    p: int
    theory: RiskValue | None
    mc_mean: float | None
    mc_stderr: float | None
    unstable: bool


@dataclass(frozen=True)
class RiskCurve:
    points: tuple[RiskPoint, ...]

    def __post_init__(self):
        ps = [pt.p for pt in self.points]
        if ps != sorted(ps):
            raise ValueError("curve points must be sorted by p")

    def point(self, p):
        for pt in self.points:
            if pt.p == p:
                return pt
        raise KeyError(f"no point at p={p}")

    def theory_value(self, p):
        return self.point(p).theory


def _mc_summary(values, unstable):
    values = np.asarray(values, dtype=np.float64)
    if unstable:
        k = int(math.floor(values.size * TRIM_FRACTION))
        core = np.sort(values)[k : values.size - k] if values.size > 2 * k else values
    else:
        core = values
    mean = float(np.mean(core))
    stderr = (
        float(np.std(core, ddof=1) / math.sqrt(core.size)) if core.size > 1 else 0.0
    )
    return mean, stderr


def default_p_grid(model: ExperimentModel, D, n):
    if model is ExperimentModel.GAUSSIAN_RANDOM_T:
        return tuple(range(0, D + 1))
    if model is ExperimentModel.GAUSSIAN_PRESCIENT:
        return tuple(range(0, 2001))
    if model is ExperimentModel.FOURIER_FLAT:
        return tuple(range(n, D + 1))
    return tuple(range(0, D + 1))


def _gaussian_random_t_theory(beta_norm_sq, config, p):
    if config.sigma == 0:
        return gaussian.random_selection_risk(beta_norm_sq, config.D, config.n, p)
    # Expected split norms under a uniform subset; the fixed-subset noisy
    # form is affine in them branch by branch, so expectation passes through.
    frac = p / config.D
    norms = gaussian.SplitNorms(beta_norm_sq * frac, beta_norm_sq * (1.0 - frac))
    return gaussian.noisy_risk(norms, config.sigma, config.n, p)


def _run_gaussian_random_t(config):
    beta = _unit_sphere_beta(config.D, config.master_seed)
    beta_norm_sq = float(np.dot(beta, beta))
    spec = gaussian.GaussianSpec(config.D, config.n, config.sigma, beta)
    noise = config.sigma**2
    points = []
    for p in config.p_grid:
        theory = _gaussian_random_t_theory(beta_norm_sq, config, p)
        mc_mean = mc_stderr = None
        unstable = False
        if config.trials > 0:
            unstable = abs(p - config.n) <= UNSTABLE_BAND
            vals = np.empty(config.trials)
            for t in range(config.trials):
                subset = random_subset(
                    substream(config.master_seed, STREAM_TRIAL, t, 0), config.D, p
                )
                rng = substream(config.master_seed, STREAM_TRIAL, t, 1)
                x_t, _, y = gaussian.sample_design(spec, subset, rng)
                beta_hat = gaussian.fit(x_t, y, subset, config.D)
                diff = beta - beta_hat
                vals[t] = float(np.dot(diff, diff)) + noise
            mc_mean, mc_stderr = _mc_summary(vals, unstable)
        points.append(RiskPoint(p, theory, mc_mean, mc_stderr, unstable))
    return RiskCurve(tuple(points))


def _run_gaussian_prescient(config):
    points = [
        RiskPoint(p, gaussian.prescient_risk(p, config.n), None, None, False)
        for p in config.p_grid
    ]
    return RiskCurve(tuple(points))


def _unit_sphere_beta(D, master_seed):
    g = substream(master_seed, STREAM_BETA).standard_normal(D)
    return g / np.linalg.norm(g)


def _run_fourier(config, spectrum):
    spec = fourier.FourierSpec(
        config.D,
        config.n,
        beta_model=fourier.BetaModel.UNIT_SPHERE_REAL,
        spectrum=spectrum,
    )
    beta = fourier.sample_beta(spec, substream(config.master_seed, STREAM_BETA))
    t_sq = fourier.spectrum_weights(config.D, spectrum)
    flat = spectrum is fourier.Spectrum.FLAT
    points = []
    for p in config.p_grid:
        theory = None
        theory_vals = []
        mc_vals = np.empty(config.trials)
        for r in range(config.trials):
            s_rows, t_cols = fourier.draw_subsets(spec, p, r, config.master_seed)
            if flat:
                theory_vals.append(fourier.conditional_risk(s_rows, t_cols, config.D))
            beta_hat = fourier.fit_fourier(spec, s_rows, t_cols, beta)
            mc_vals[r] = fourier.weighted_risk(beta, beta_hat, t_sq)
        if flat:
            if any(tv.is_divergent for tv in theory_vals):
                theory = DIVERGENT
            else:
                theory = RiskValue(float(np.mean([tv.value for tv in theory_vals])))
        unstable = abs(p - config.n) <= UNSTABLE_BAND
        mc_mean, mc_stderr = _mc_summary(mc_vals, unstable)
        points.append(RiskPoint(p, theory, mc_mean, mc_stderr, unstable))
    return RiskCurve(tuple(points))


def run_experiment(config: ExperimentConfig) -> RiskCurve:
    """Compute the risk curve for ``config``; deterministic in the seed."""
    if config.model is ExperimentModel.GAUSSIAN_RANDOM_T:
        return _run_gaussian_random_t(config)
    if config.model is ExperimentModel.GAUSSIAN_PRESCIENT:
        return _run_gaussian_prescient(config)
    if config.model is ExperimentModel.FOURIER_FLAT:
        return _run_fourier(config, fourier.Spectrum.FLAT)
    return _run_fourier(config, fourier.Spectrum.DECAY_INV_SQUARE)


def _fmt(x):
    return f"{x:.12g}"


def curve_to_csv(curve: RiskCurve) -> str:
    """CSV text for a curve: divergent theory is the literal ``inf``,
    absent Monte Carlo columns are empty fields, floats carry 12
    significant digits."""
    lines = [CSV_HEADER]
    for pt in curve.points:
        if pt.theory is None:
            theory = ""
        elif pt.theory.is_divergent:
            theory = "inf"
        else:
            theory = _fmt(pt.theory.value)
        mc_mean = "" if pt.mc_mean is None else _fmt(pt.mc_mean)
        mc_stderr = "" if pt.mc_stderr is None else _fmt(pt.mc_stderr)
        lines.append(f"{pt.p},{theory},{mc_mean},{mc_stderr},{int(pt.unstable)}")
    return "\n".join(lines) + "\n"


def write_csv(curve: RiskCurve, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(curve_to_csv(curve))


def load_config_file(path):
    """Parse a key = value config file into a dict of strings.

    Blank lines and ``#`` comments are ignored; keys are lowercased.
    Recognized keys mirror ExperimentConfig: model, d, n, sigma, trials,
    seed, out, and either p_grid (comma list) or p_min/p_max/p_step.
    """
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, _, val = line.partition("=")
            values[key.strip().lower()] = val.strip()
    return values


# ---------------------------------------------------------------------------
# SVG rendering: a basic log-y line chart with no plotting dependency.

_SVG_W, _SVG_H = 720, 480
_ML, _MR, _MT, _MB = 72, 24, 36, 48


def _log_ticks(lo, hi):
    lo_k = math.floor(math.log10(lo))
    hi_k = math.ceil(math.log10(hi))
    return [10.0**k for k in range(lo_k, hi_k + 1)]


def render_svg(curve: RiskCurve, path, title=None):
    """Write a simple SVG line chart of the curve (risk on a log axis).

    Theory is drawn as a solid line with gaps at divergent points; Monte
    Carlo means as a dashed line with markers.  Zero or missing values are
    omitted from the log axis.
    """
    theory_pts = [
        (pt.p, pt.theory.value)
        for pt in curve.points
        if pt.theory is not None and not pt.theory.is_divergent and pt.theory.value > 0
    ]
    mc_pts = [
        (pt.p, pt.mc_mean) for pt in curve.points if pt.mc_mean is not None and pt.mc_mean > 0
    ]
    ys = [y for _, y in theory_pts + mc_pts]
    xs = [pt.p for pt in curve.points]
    if not ys:
        ys = [1.0]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_hi = x_lo + 1
    y_lo, y_hi = min(ys), max(ys)
    y_hi = max(y_hi, y_lo * 10)
    lo_k, hi_k = math.floor(math.log10(y_lo)), math.ceil(math.log10(y_hi))
    plot_w = _SVG_W - _ML - _MR
    plot_h = _SVG_H - _MT - _MB

    def sx(p):
        return _ML + plot_w * (p - x_lo) / (x_hi - x_lo)

    def sy(v):
        frac = (math.log10(v) - lo_k) / (hi_k - lo_k)
        return _MT + plot_h * (1.0 - frac)

    def polyline(pts, style):
        if not pts:
            return ""
        coords = " ".join(f"{sx(p):.2f},{sy(v):.2f}" for p, v in pts)
        return f'<polyline fill="none" {style} points="{coords}"/>'

    # Break the theory line wherever the curve is divergent or absent.
    segments = []
    seg = []
    for pt in curve.points:
        finite = (
            pt.theory is not None and not pt.theory.is_divergent and pt.theory.value > 0
        )
        if finite:
            seg.append((pt.p, pt.theory.value))
        elif seg:
            segments.append(seg)
            seg = []
    if seg:
        segments.append(seg)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
    ]
    for tick in _log_ticks(10.0**lo_k, 10.0**hi_k):
        y = sy(tick)
        parts.append(
            f'<line x1="{_ML}" y1="{y:.2f}" x2="{_SVG_W - _MR}" y2="{y:.2f}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        exp = int(round(math.log10(tick)))
        parts.append(
            f'<text x="{_ML - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif">1e{exp}</text>'
        )
    n_xticks = min(6, x_hi - x_lo)
    for i in range(n_xticks + 1):
        p = x_lo + (x_hi - x_lo) * i / n_xticks
        x = sx(p)
        parts.append(
            f'<line x1="{x:.2f}" y1="{_MT + plot_h}" x2="{x:.2f}" '
            f'y2="{_MT + plot_h + 5}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{_MT + plot_h + 18}" text-anchor="middle" '
            f'font-size="11" font-family="sans-serif">{p:.0f}</text>'
        )
    parts.append(
        f'<rect x="{_ML}" y="{_MT}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black" stroke-width="1"/>'
    )
    for seg in segments:
        parts.append(polyline(seg, 'stroke="#1f77b4" stroke-width="2"'))
    parts.append(
        polyline(mc_pts, 'stroke="#d62728" stroke-width="1.5" stroke-dasharray="5,3"')
    )
    for p, v in mc_pts:
        parts.append(f'<circle cx="{sx(p):.2f}" cy="{sy(v):.2f}" r="2.5" fill="#d62728"/>')
    parts.append(
        f'<text x="{_ML + plot_w / 2:.0f}" y="{_SVG_H - 10}" text-anchor="middle" '
        'font-size="13" font-family="sans-serif">p (features used)</text>'
    )
    parts.append(
        f'<text x="18" y="{_MT + plot_h / 2:.0f}" text-anchor="middle" font-size="13" '
        f'font-family="sans-serif" transform="rotate(-90 18 {_MT + plot_h / 2:.0f})">'
        "risk (log scale)</text>"
    )
    if title:
        parts.append(
            f'<text x="{_SVG_W / 2:.0f}" y="22" text-anchor="middle" '
            f'font-size="14" font-family="sans-serif">{title}</text>'
        )
    legend_x = _SVG_W - _MR - 150
    parts.append(
        f'<line x1="{legend_x}" y1="{_MT + 12}" x2="{legend_x + 28}" y2="{_MT + 12}" '
        'stroke="#1f77b4" stroke-width="2"/>'
    )
    parts.append(
        f'<text x="{legend_x + 34}" y="{_MT + 16}" font-size="11" '
        'font-family="sans-serif">theory</text>'
    )
    parts.append(
        f'<line x1="{legend_x}" y1="{_MT + 28}" x2="{legend_x + 28}" y2="{_MT + 28}" '
        'stroke="#d62728" stroke-width="1.5" stroke-dasharray="5,3"/>'
    )
    parts.append(
        f'<text x="{legend_x + 34}" y="{_MT + 32}" font-size="11" '
        'font-family="sans-serif">monte carlo</text>'
    )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
