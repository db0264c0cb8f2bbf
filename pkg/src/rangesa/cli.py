"""Command-line pipeline: data generation, training, range estimation, oracles.

Every command is deterministic given its configuration: all seeds are
explicit and the config is echoed into every output artifact. Wall time goes
to the log, never into output files.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from .anneal import AnnealConfig, run
from .domain import BoxDomain
from .objectives import Dataset, builtin, sample_dataset
from .presets import preset
from .range_analysis import GridBudgetExceeded, estimate_range, grid_oracle
from .resnet import ResNet, WeightFormatError
from .trainer import TrainConfig, evaluate_fit, save_loss_history, train

log = logging.getLogger("rangesa")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    """Bad configuration or arguments; maps to exit code 2."""


def parse_domain(spec) -> BoxDomain:
    """Accept 'l1,u1,...,ld,ud' strings or [[l, u], ...] lists."""
    if isinstance(spec, str):
        try:
            vals = [float(v) for v in spec.split(",")]
        except ValueError:
            raise UsageError(f"cannot parse domain {spec!r}") from None
        if len(vals) % 2 != 0 or not vals:
            raise UsageError("domain needs an even number of values: l1,u1,...,ld,ud")
        pairs = tuple((vals[i], vals[i + 1]) for i in range(0, len(vals), 2))
    else:
        pairs = tuple(tuple(map(float, b)) for b in spec)
    try:
        return BoxDomain(pairs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _merged_options(args: argparse.Namespace) -> dict:
    """Config file values overridden by explicitly given flags."""
    opts = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise UsageError(f"config file not found: {path}")
        opts.update(json.loads(path.read_text()))
    for key, value in vars(args).items():
        if key in ("config", "command", "func"):
            continue
        if value is not None:
            opts[key] = value
    return opts


def _require(opts: dict, key: str):
    if opts.get(key) is None:
        raise UsageError(f"missing required option --{key.replace('_', '-')}")
    return opts[key]


def _load_objective(opts: dict):
    """Objective plus its default domain from --fn or --weights."""
    fn = opts.get("fn")
    weights = opts.get("weights")
    if (fn is None) == (weights is None):
        raise UsageError("exactly one of --fn or --weights is required")
    if fn is not None:
        try:
            objective = builtin(fn)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        default_domain = preset(fn).train_domain
        return objective, default_domain
    net = ResNet.load(weights)
    return net.as_objective(name=Path(weights).stem), None


def _resolve_domain(opts: dict, default: BoxDomain | None) -> BoxDomain:
    if opts.get("domain") is not None:
        return parse_domain(opts["domain"])
    if default is None:
        raise UsageError("--domain is required when the objective comes from a weights file")
    return default


def _anneal_config(opts: dict) -> AnnealConfig:
    kwargs = {}
    for key in ("t_max", "t_min", "delta", "inner_iters", "proposal_variance",
                "seed", "mode", "cooling"):
        if opts.get(key) is not None:
            kwargs[key] = opts[key]
    try:
        return AnnealConfig(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _out_dir(opts: dict) -> Path:
    out = Path(opts.get("out") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _echo_config(opts: dict) -> dict:
    # "out" is excluded so artifacts stay byte-identical across output dirs
    return {k: v for k, v in sorted(opts.items()) if k != "out" and not callable(v)}


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# --- commands ----------------------------------------------------------


def cmd_generate_data(args) -> int:
    opts = _merged_options(args)
    fn = _require(opts, "fn")
    try:
        objective = builtin(fn)
        p = preset(fn)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    domain = _resolve_domain(opts, p.train_domain)
    m = int(opts.get("m") or p.default_m)
    noise_sd = float(opts.get("noise_sd", 0.1) if opts.get("noise_sd") is not None else 0.1)
    seed = int(opts.get("seed") or 0)
    out = _out_dir(opts)

    data = sample_dataset(objective, domain, m=m, noise_sd=noise_sd, seed=seed)
    csv_path = out / f"{fn}_data.csv"
    data.save(csv_path)
    log.info("wrote %d rows to %s", len(data), csv_path)
    return EXIT_OK


def cmd_train(args) -> int:
    opts = _merged_options(args)
    p = preset(_require(opts, "preset"))
    data = Dataset.load(_require(opts, "data"))
    if data.dim != p.objective.dim:
        raise UsageError(
            f"dataset dimension {data.dim} does not match preset {p.name} ({p.objective.dim})"
        )
    seed = int(opts.get("seed") or 0)
    width_scale = float(opts.get("width_scale") or 1.0)
    cfg_kwargs = {}
    for key in ("learning_rate", "epochs", "batch_size"):
        if opts.get(key) is not None:
            cfg_kwargs[key] = opts[key]
    try:
        cfg = TrainConfig(seed=seed, **cfg_kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = _out_dir(opts)

    net = p.architecture(seed=seed, width_scale=width_scale)
    t0 = time.perf_counter()
    net, history = train(net, data, cfg)
    log.info("trained %d epochs in %.1f s (final loss %.6g)",
             cfg.epochs, time.perf_counter() - t0, history[-1])

    net.save(out / "weights.json")
    save_loss_history(history, out / "loss_history.csv")
    report = evaluate_fit(net, p.objective, p.eval_domain, n=p.eval_n, seed=seed)
    doc = report.to_json_dict()
    doc["config"] = _echo_config(opts)
    _write_json(out / "fit_report.json", doc)
    log.info("fit: MAE %.4f, MSE %.4f", report.mae, report.mse)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    opts = _merged_options(args)
    net = ResNet.load(_require(opts, "weights"))
    fn = _require(opts, "fn")
    try:
        objective = builtin(fn)
        p = preset(fn)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    domain = _resolve_domain(opts, p.eval_domain)
    n = int(opts.get("n") or p.eval_n)
    seed = int(opts.get("seed") or 0)
    out = _out_dir(opts)

    report = evaluate_fit(net, objective, domain, n=n, seed=seed)
    doc = report.to_json_dict()
    doc["config"] = _echo_config(opts)
    _write_json(out / "fit_report.json", doc)
    log.info("fit: MAE %.4f, MSE %.4f", report.mae, report.mse)
    return EXIT_OK


def cmd_estimate_range(args) -> int:
    opts = _merged_options(args)
    objective, default_domain = _load_objective(opts)
    domain = _resolve_domain(opts, default_domain)
    cfg = _anneal_config(opts)
    n_seeds = int(opts.get("n_seeds") or 10)
    out = _out_dir(opts)

    t0 = time.perf_counter()
    result, traces = estimate_range(objective, domain, cfg, n_seeds=n_seeds, return_traces=True)
    log.info("range [%.6g, %.6g] in %.1f s (%d evaluations)",
             result.f_min, result.f_max, time.perf_counter() - t0, result.eval_count)

    doc = result.to_json_dict(cfg)
    doc["config"]["n_seeds"] = n_seeds
    _write_json(out / "range_result.json", doc)
    for kind, runs in traces.items():
        for r in runs:
            r.trace.to_csv(out / f"trace_{kind}_seed{r.config.seed}.csv")
    return EXIT_OK


def cmd_oracle(args) -> int:
    opts = _merged_options(args)
    objective, default_domain = _load_objective(opts)
    domain = _resolve_domain(opts, default_domain)
    points_per_dim = int(_require(opts, "points_per_dim"))
    out = _out_dir(opts)

    t0 = time.perf_counter()
    result = grid_oracle(objective, domain, points_per_dim)
    log.info("oracle min %.6g / max %.6g over %d points in %.1f s",
             result.min_value, result.max_value, result.n_points, time.perf_counter() - t0)
    doc = result.to_json_dict()
    doc["config"] = _echo_config(opts)
    _write_json(out / "oracle.json", doc)
    return EXIT_OK


def max_excursion(trace, domain: BoxDomain) -> float:
    """Largest componentwise overshoot of any trace point outside the box."""
    over = np.maximum(trace.points - domain.upper, 0.0)
    under = np.maximum(domain.lower - trace.points, 0.0)
    return float(np.max(np.maximum(over, under)))


def iterations_to_best(trace) -> int:
    return int(trace.iterations[int(np.argmin(trace.values))])


def cmd_compare(args) -> int:
    opts = _merged_options(args)
    objective, default_domain = _load_objective(opts)
    domain = _resolve_domain(opts, default_domain)
    cfg = _anneal_config(opts)
    n_seeds = int(opts.get("n_seeds") or 10)
    out = _out_dir(opts)

    rows = []
    for k in range(n_seeds):
        seed = cfg.seed + k
        for mode in ("reflected", "classical"):
            r = run(objective, domain, replace(cfg, seed=seed, mode=mode))
            r.trace.to_csv(out / f"trace_{mode}_seed{seed}.csv")
            rows.append(
                {
                    "seed": seed,
                    "mode": mode,
                    "best_value": r.best_value,
                    "iters_to_best": iterations_to_best(r.trace),
                    "max_excursion": max_excursion(r.trace, domain),
                }
            )
    lines = ["seed,mode,best_value,iters_to_best,max_excursion"]
    for row in rows:
        lines.append(
            f"{row['seed']},{row['mode']},{repr(row['best_value'])},"
            f"{row['iters_to_best']},{repr(row['max_excursion'])}"
        )
    (out / "compare_summary.csv").write_text("\n".join(lines) + "\n")
    _write_json(out / "compare_summary.json", {"rows": rows, "config": _echo_config(opts)})
    return EXIT_OK


# --- argument parsing ---------------------------------------------------


def _add_common(sp):
    sp.add_argument("--config", help="JSON config file; explicit flags win")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", help="output directory (default: current)")


def _add_objective_flags(sp):
    sp.add_argument("--fn", help="builtin objective name")
    sp.add_argument("--weights", help="weights file to wrap as the objective")
    sp.add_argument("--domain", help="bounds as l1,u1,...,ld,ud")


def _add_anneal_flags(sp):
    sp.add_argument("--t-max", dest="t_max", type=float)
    sp.add_argument("--t-min", dest="t_min", type=float)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--inner-iters", dest="inner_iters", type=int)
    sp.add_argument("--variance", dest="proposal_variance", type=float)
    sp.add_argument("--mode", choices=("reflected", "classical"))
    sp.add_argument("--cooling", choices=("theorem", "algorithm1"))
    sp.add_argument("--n-seeds", dest="n_seeds", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rangesa",
        description="Output range estimation for black-box functions by "
        "simulated annealing with reflective boundary conditions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("generate-data", help="sample a noisy dataset from a builtin objective")
    _add_common(sp)
    sp.add_argument("--fn")
    sp.add_argument("--domain")
    sp.add_argument("--m", type=int)
    sp.add_argument("--noise-sd", dest="noise_sd", type=float)
    sp.set_defaults(func=cmd_generate_data)

    sp = sub.add_parser("train", help="train a preset architecture on a dataset")
    _add_common(sp)
    sp.add_argument("--preset", choices=("ackley", "dropwave", "multimin"))
    sp.add_argument("--data", help="dataset CSV (with .meta.json sidecar)")
    sp.add_argument("--epochs", type=int)
    sp.add_argument("--learning-rate", dest="learning_rate", type=float)
    sp.add_argument("--batch-size", dest="batch_size", type=int)
    sp.add_argument("--width-scale", dest="width_scale", type=float,
                    help="shrink hidden widths for desk-scale runs")
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("evaluate", help="fit metrics of a weights file against a builtin")
    _add_common(sp)
    sp.add_argument("--weights")
    sp.add_argument("--fn")
    sp.add_argument("--domain")
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("estimate-range", help="estimate [f_min, f_max] by annealing")
    _add_common(sp)
    _add_objective_flags(sp)
    _add_anneal_flags(sp)
    sp.set_defaults(func=cmd_estimate_range)

    sp = sub.add_parser("oracle", help="brute-force tensor grid min/max")
    _add_common(sp)
    _add_objective_flags(sp)
    sp.add_argument("--points-per-dim", dest="points_per_dim", type=int)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("compare", help="reflected vs classical chains with shared seeds")
    _add_common(sp)
    _add_objective_flags(sp)
    _add_anneal_flags(sp)
    sp.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, WeightFormatError, GridBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
