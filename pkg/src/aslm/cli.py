"""Command-line front end: generate series, run experiments, tune epsilon.

A flat key=value config file can preset any flag of the active
subcommand; values given on the command line win.
"""

import argparse
import math
import sys

import numpy as np

from aslm.bench import (
    FULL_ROSTER,
    ExperimentConfig,
    emit_report,
    run_experiment,
)
from aslm.lorenz import (
    EmbeddingConfig,
    LorenzParams,
    SplitPlan,
    add_noise,
    export_series,
    generate_lorenz,
    normalize,
    sliding_splits,
)
from aslm.kernels import KernelConfig
from aslm.linear import RegressionProblem, solve_regularized_ls
from aslm.neighbors import Metric
from aslm.quantizer import tune_epsilon


def _add_lorenz_flags(p):
    p.add_argument("--lorenz-sigma", type=float, default=10.0,
                   help="Lorenz sigma rate (chaotic standard: 10)")
    p.add_argument("--rho", type=float, default=28.0)
    p.add_argument("--beta", type=float, default=8.0 / 3.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--x0", type=float, default=1.0)
    p.add_argument("--y0", type=float, default=1.0)
    p.add_argument("--z0", type=float, default=1.0)
    p.add_argument("--transient", type=int, default=1000,
                   help="Euler steps discarded before sampling")
    p.add_argument("--sample-every", type=int, default=12,
                   help="Euler steps between retained samples")


def _add_protocol_flags(p):
    p.add_argument("--steps", type=int, default=4908,
                   help="retained samples in the generated series")
    p.add_argument("--order", type=int, default=7, help="embedding order L")
    p.add_argument("--horizon", type=int, default=1)
    p.add_argument("--train-len", type=int, default=2000)
    p.add_argument("--test-len", type=int, default=400)
    p.add_argument("--stride", type=int, default=50)
    p.add_argument("--runs", type=int, default=50)
    p.add_argument("--noise-db", type=float, default=None,
                   help="train-target SNR in dB (omit for clean)")
    p.add_argument("--seed", type=int, default=1)


def _lorenz_params(a):
    return LorenzParams(
        sigma_l=a.lorenz_sigma, rho=a.rho, beta=a.beta, dt=a.dt,
        x0=a.x0, y0=a.y0, z0=a.z0,
        transient=a.transient, sample_every=a.sample_every,
    )


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="aslm",
        description="Augmented-space linear model benchmark on Lorenz prediction",
    )
    parser.add_argument("--config", help="flat key=value file presetting flags")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit a Lorenz series as CSV")
    _add_lorenz_flags(g)
    g.add_argument("--steps", type=int, default=4908)
    g.add_argument("--normalize", action="store_true",
                   help="zero-mean/unit-variance before writing")
    g.add_argument("--out", default="-", help="output path ('-' = stdout)")

    r = sub.add_parser("run", help="run the sliding-window experiment")
    _add_lorenz_flags(r)
    _add_protocol_flags(r)
    r.add_argument("--models", default=",".join(FULL_ROSTER),
                   help="comma-separated roster subset")
    r.add_argument("--delta", type=float, default=0.1)
    r.add_argument("--kernel-sigma", type=float, default=1.0)
    r.add_argument("--eta", type=float, default=0.7)
    r.add_argument("--epsilon-input", type=float, default=None,
                   help="raw-space radius for QKLMS / KLMS-QAM")
    r.add_argument("--epsilon-weighted", type=float, default=None,
                   help="transformed-space radius for QASLM")
    r.add_argument("--target-codebook", type=int, default=500,
                   help="codebook size used when tuning an unset epsilon")
    r.add_argument("--grid-search", action="store_true",
                   help="pick epsilons by held-out MSE instead of size")
    r.add_argument("--timing", action="store_true",
                   help="measure per-query time (non-deterministic column)")
    r.add_argument("--format", choices=("csv", "table"), default="csv")
    r.add_argument("--out", default="-", help="output path ('-' = stdout)")

    t = sub.add_parser("tune-epsilon", help="find epsilon for a codebook size")
    _add_lorenz_flags(t)
    _add_protocol_flags(t)
    t.add_argument("--target", type=int, default=500)
    t.add_argument("--space", choices=("input", "weighted"), default="input",
                   help="quantize raw inputs or Hadamard-transformed ones")
    t.add_argument("--delta", type=float, default=0.1)
    return parser


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _apply_config_file(parser, path, argv):
    """Load key=value lines and install them as subcommand defaults."""
    entries = {}
    with open(path) as fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SystemExit(f"{path}:{ln}: expected key=value")
            key, value = line.split("=", 1)
            entries[key.strip().replace("-", "_")] = value.strip()
    # find the active subcommand parser
    sub = next(a for a in parser._actions
               if isinstance(a, argparse._SubParsersAction))
    cmd = next((tok for tok in argv if tok in sub.choices), None)
    if cmd is None:
        return
    sp = sub.choices[cmd]
    known = {}
    for action in sp._actions:
        if action.dest in entries:
            raw = entries.pop(action.dest)
            if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
                low = raw.lower()
                if low not in _TRUE | _FALSE:
                    raise SystemExit(f"{path}: {action.dest} must be boolean")
                known[action.dest] = low in _TRUE
            elif action.type is not None:
                known[action.dest] = action.type(raw)
            else:
                known[action.dest] = raw
    if entries:
        raise SystemExit(f"{path}: unknown keys: {', '.join(sorted(entries))}")
    sp.set_defaults(**known)


def _write(text, out):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _cmd_generate(a):
    ts = generate_lorenz(_lorenz_params(a), a.steps)
    if a.normalize:
        ts = normalize(ts)
    if a.out == "-":
        for v in ts:
            sys.stdout.write("%.17g\n" % v)
    else:
        export_series(ts, a.out)
    return 0


def _experiment_config(a):
    roster = tuple(m.strip() for m in a.models.split(",") if m.strip())
    snr = a.noise_db
    if snr is not None and math.isinf(snr):
        snr = None
    return ExperimentConfig(
        lorenz=_lorenz_params(a),
        embedding=EmbeddingConfig(order_l=a.order, horizon=a.horizon),
        split=SplitPlan(train_len=a.train_len, test_len=a.test_len,
                        stride=a.stride, runs=a.runs),
        n_samples=a.steps,
        snr_db=snr,
        delta=a.delta,
        kernel=KernelConfig(sigma=a.kernel_sigma, eta=a.eta),
        epsilon_input=a.epsilon_input,
        epsilon_weighted=a.epsilon_weighted,
        target_codebook=a.target_codebook,
        grid_search=a.grid_search,
        seed=a.seed,
        roster=roster,
        measure_timing=a.timing,
    )


def _cmd_run(a):
    report = run_experiment(_experiment_config(a))
    _write(emit_report(report, a.format), a.out)
    return 0


def _cmd_tune(a):
    series = normalize(generate_lorenz(_lorenz_params(a), a.steps))
    plan = SplitPlan(train_len=a.train_len, test_len=a.test_len,
                     stride=a.stride, runs=a.runs)
    cfg = EmbeddingConfig(order_l=a.order, horizon=a.horizon)
    train = sliding_splits(series, plan, cfg)[0][0]
    if a.noise_db is not None:
        train = add_noise(train, a.noise_db,
                          np.random.SeedSequence(entropy=a.seed, spawn_key=(0,)))
    X = train.inputs
    if a.space == "weighted":
        w = solve_regularized_ls(RegressionProblem(X, train.desired, a.delta))
        X = Metric.hadamard(w).transform(X)
    res = tune_epsilon(X, a.target)
    flag = "exact" if res.exact else "nearest-achievable"
    print(f"epsilon={res.epsilon:.17g} size={res.size} ({flag})")
    return 0


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    # peek at --config before the real parse so file values become defaults
    probe, _ = parser.parse_known_args(argv)
    if probe.config:
        _apply_config_file(parser, probe.config, argv)
    args = parser.parse_args(argv)
    if args.command == "generate":
        return _cmd_generate(args)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_tune(args)


if __name__ == "__main__":
    sys.exit(main())
