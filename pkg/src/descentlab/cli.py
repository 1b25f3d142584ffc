"""Command-line interface.

Subcommands::

    gaussian-curve    risk vs p for random feature selection (Gaussian model)
    prescient-curve   risk vs p for prescient selection (infinite features)
    fourier-curve     risk vs p for random DFT row/column regression
    appendix-curve    the decaying-spectrum DFT variant (weighted risk)
    theory            evaluate a single closed-form risk value
    verify            run the built-in cross-validation suites

All commands accept ``--seed``; its default is the env var
``DESCENTLAB_SEED`` when set, else the constant 1729, so default runs are
reproducible.  Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

import argparse
import os
import sys

from . import fourier, gaussian, verify
from .harness import (
    DEFAULT_FOURIER_REPEATS,
    DEFAULT_SEED,
    ExperimentConfig,
    ExperimentModel,
    curve_to_csv,
    load_config_file,
    render_svg,
    run_experiment,
    write_csv,
)

_CURVE_MODELS = {
    "gaussian-curve": ExperimentModel.GAUSSIAN_RANDOM_T,
    "prescient-curve": ExperimentModel.GAUSSIAN_PRESCIENT,
    "fourier-curve": ExperimentModel.FOURIER_FLAT,
    "appendix-curve": ExperimentModel.FOURIER_DECAY,
}

_CURVE_DEFAULTS = {
    "gaussian-curve": dict(D=100, n=40, sigma=0.0, trials=0),
    "prescient-curve": dict(D=None, n=40, sigma=0.0, trials=0),
    "fourier-curve": dict(D=256, n=64, sigma=0.0, trials=DEFAULT_FOURIER_REPEATS),
    "appendix-curve": dict(D=256, n=64, sigma=0.0, trials=DEFAULT_FOURIER_REPEATS),
}


def _add_curve_parser(sub, name, help_text):
    p = sub.add_parser(name, help=help_text)
    if name != "prescient-curve":
        p.add_argument("--D", type=int, default=None, help="ambient feature dimension")
    p.add_argument("--n", type=int, default=None, help="sample size")
    if name == "gaussian-curve":
        p.add_argument("--sigma", type=float, default=None, help="response noise std dev")
    if name == "fourier-curve":
        p.add_argument(
            "--full-scale",
            action="store_true",
            help="use D=1024, n=256 instead of the reduced-scale defaults",
        )
    p.add_argument("--p-min", type=int, default=None)
    p.add_argument("--p-max", type=int, default=None)
    p.add_argument("--p-step", type=int, default=None)
    p.add_argument(
        "--trials",
        type=int,
        default=None,
        help="Monte Carlo trials per point (Gaussian; 0 = theory only) "
        "or (S,T) repeats (Fourier)",
    )
    p.add_argument("--seed", type=int, default=None, help="master seed")
    p.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    p.add_argument("--svg", default=None, metavar="PATH", help="also render an SVG chart")
    p.add_argument("--config", default=None, help="key = value config file")
    return p


def _resolve_seed(flag_value, cfg):
    if flag_value is not None:
        return flag_value
    if "seed" in cfg:
        return int(cfg["seed"])
    env = os.environ.get("DESCENTLAB_SEED")
    if env:
        return int(env)
    return DEFAULT_SEED


def _pick(flag_value, cfg, key, conv, default):
    if flag_value is not None:
        return flag_value
    if key in cfg:
        return conv(cfg[key])
    return default


def _build_config(name, args):
    cfg = load_config_file(args.config) if args.config else {}
    defaults = _CURVE_DEFAULTS[name]
    model = _CURVE_MODELS[name]

    D_flag = getattr(args, "D", None)
    n_flag = args.n
    if name == "fourier-curve" and args.full_scale:
        if D_flag is None:
            D_flag = 1024
        if n_flag is None:
            n_flag = 256
    D = _pick(D_flag, cfg, "d", int, defaults["D"])
    n = _pick(n_flag, cfg, "n", int, defaults["n"])
    sigma = _pick(getattr(args, "sigma", None), cfg, "sigma", float, defaults["sigma"])
    trials = _pick(args.trials, cfg, "trials", int, defaults["trials"])
    seed = _resolve_seed(args.seed, cfg)
    out = _pick(args.out, cfg, "out", str, None)

    explicit_grid = args.p_min is not None or args.p_max is not None or args.p_step is not None
    if not explicit_grid and "p_grid" in cfg:
        p_grid = tuple(int(tok) for tok in cfg["p_grid"].replace(",", " ").split())
    else:
        if model is ExperimentModel.GAUSSIAN_PRESCIENT:
            lo_default, hi_default = 0, 2000
        elif model is ExperimentModel.FOURIER_FLAT:
            lo_default, hi_default = n, D
        else:
            lo_default, hi_default = 0, D
        lo = _pick(args.p_min, cfg, "p_min", int, lo_default)
        hi = _pick(args.p_max, cfg, "p_max", int, hi_default)
        step = _pick(args.p_step, cfg, "p_step", int, 1)
        if step < 1:
            raise ValueError(f"--p-step must be >= 1, got {step}")
        p_grid = tuple(range(lo, hi + 1, step))

    return ExperimentConfig(
        model=model,
        n=n,
        p_grid=p_grid,
        D=D,
        sigma=sigma,
        trials=trials,
        master_seed=seed,
        output_path=out,
    )


def _run_curve(name, args):
    config = _build_config(name, args)
    curve = run_experiment(config)
    if config.output_path:
        write_csv(curve, config.output_path)
    else:
        sys.stdout.write(curve_to_csv(curve))
    if args.svg:
        render_svg(curve, args.svg, title=name)
    return 0


def _run_theory(args):
    model = args.model
    if model == "gaussian":
        for flag in ("D", "n", "p"):
            if getattr(args, flag) is None:
                raise ValueError(f"theory --model gaussian requires --{flag}")
        value = gaussian.random_selection_risk(args.beta_norm_sq, args.D, args.n, args.p)
    elif model == "prescient":
        for flag in ("n", "p"):
            if getattr(args, flag) is None:
                raise ValueError(f"theory --model prescient requires --{flag}")
        value = gaussian.prescient_risk(args.p, args.n)
    elif model == "fixed-subset":
        for flag in ("n", "p"):
            if getattr(args, flag) is None:
                raise ValueError(f"theory --model fixed-subset requires --{flag}")
        norms = gaussian.SplitNorms(args.in_norm_sq, args.out_norm_sq)
        value = gaussian.noisy_risk(norms, args.sigma, args.n, args.p)
    elif model == "asymptotic-fourier":
        if args.rho_n is None or args.rho_p is None:
            raise ValueError("theory --model asymptotic-fourier requires --rho-n and --rho-p")
        print(f"{fourier.asymptotic_risk(args.rho_n, args.rho_p):.12g}")
        return 0
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown theory model {model!r}")
    print("inf" if value.is_divergent else f"{value.value:.12g}")
    return 0


def _run_verify(args):
    seed = _resolve_seed(args.seed, {})
    results = verify.run_checks(seed, trials=args.trials)
    all_ok = True
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        print(f"[{status}] {name}: {detail}")
        all_ok = all_ok and ok
    return 0 if all_ok else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="descentlab",
        description="Double-descent risk curves for minimum-norm least squares.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    _add_curve_parser(sub, "gaussian-curve", "Gaussian model, random feature subsets")
    _add_curve_parser(sub, "prescient-curve", "Gaussian model, prescient selection")
    _add_curve_parser(sub, "fourier-curve", "DFT model, flat spectrum")
    _add_curve_parser(sub, "appendix-curve", "DFT model, decaying spectrum")

    t = sub.add_parser("theory", help="evaluate one closed-form risk value")
    t.add_argument(
        "--model",
        required=True,
        choices=["gaussian", "prescient", "fixed-subset", "asymptotic-fourier"],
    )
    t.add_argument("--D", type=int, default=None)
    t.add_argument("--n", type=int, default=None)
    t.add_argument("--p", type=int, default=None)
    t.add_argument("--beta-norm-sq", type=float, default=1.0)
    t.add_argument("--in-norm-sq", type=float, default=0.0)
    t.add_argument("--out-norm-sq", type=float, default=0.0)
    t.add_argument("--sigma", type=float, default=0.0)
    t.add_argument("--rho-n", type=float, default=None)
    t.add_argument("--rho-p", type=float, default=None)

    v = sub.add_parser("verify", help="run the cross-validation suites")
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--trials", type=int, default=2000)

    return parser


def cli_main(argv=None):
    """Entry point; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command in _CURVE_MODELS:
            return _run_curve(args.command, args)
        if args.command == "theory":
            return _run_theory(args)
        return _run_verify(args)
    except (ValueError, OSError) as exc:
        print(f"descentlab: error: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
