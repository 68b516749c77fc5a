"""Command-line entry point: train, hardcore, bounds, impossibility, sweep."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time

import numpy as np

from . import bounds as bounds_mod
from . import experiments, hardcore
from .hypotheses import parse_class_spec
from .optimize import OptimizerConfig
from .optimize import optimize as run_optimizer
from .losses import parse_loss
from .risk import load_sample_csv


class DomainError(RuntimeError):
    """A well-formed request that cannot be satisfied (bad data, infeasible)."""


def _write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hcb-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(report: dict, out: str | None, no_timestamp: bool):
    if not no_timestamp:
        report["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        _write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


def cmd_train(args) -> dict:
    sample = load_sample_csv(args.dataset)
    cls = parse_class_spec(args.cls)
    fm = cls.materialize(sample)
    loss = parse_loss(args.loss)
    method = {"sub": "subgradient", "coord": "coordinate"}[args.method]
    cfg = OptimizerConfig(
        method=method, max_iters=args.max_iters, rho=args.rho,
        step_scale=args.step_scale, seed=args.seed,
    )
    run = run_optimizer(fm, loss, cfg)
    if args.trace:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["iter", "objective", "l1_norm", "grad_sup_norm"])
        for i, obj in enumerate(run.objective_trace):
            norm = run.norm_trace[i] if i < len(run.norm_trace) else ""
            grad = run.grad_sup_trace[i] if i < len(run.grad_sup_trace) else ""
            writer.writerow([i, obj, norm, grad])
        _write_atomic(args.trace, buf.getvalue())
    return {
        "lambda": run.lam.tolist(),
        "objective": run.objective,
        "l1_norm": float(np.abs(run.lam).sum()),
        "iterations": run.iterations,
        "stop_reason": run.stop_reason,
        "truncated_steps": run.truncated_steps,
    }


def cmd_hardcore(args) -> dict:
    sample = load_sample_csv(args.dataset)
    cls = parse_class_spec(args.cls)
    fm = cls.materialize(sample)
    cert = hardcore.compute_hardcore(fm)
    dich = hardcore.verify_dichotomy(fm, cert.core, trials=args.trials, seed=args.seed)
    if args.dump_lp:
        sys.stderr.write(f"core size {len(cert.core)} of {fm.m}\n")
    return {
        "core": cert.core.tolist(),
        "p": cert.p.tolist(),
        "lambda": cert.separator.tolist(),
        "margin": None if np.isinf(cert.margin) else cert.margin,
        "point_optima": cert.point_optima.tolist(),
        "verification": {
            "dichotomy_trials": dich.trials,
            "dichotomy_violations": dich.violations,
        },
    }


def cmd_bounds(args) -> dict:
    loss = parse_loss(args.loss)
    if args.from_certificate:
        with open(args.from_certificate) as fh:
            cert = json.load(fh)
        mu_core = len(cert["core"]) / max(1, len(cert["p"]))
    else:
        mu_core = args.mu_core
    inputs = bounds_mod.BoundInputs(
        m=args.m, n=args.n, delta=args.delta, epsilon=args.epsilon,
        phi0=loss.value_at_origin, mu_core=mu_core, c=args.c, b=args.b,
    )
    report = bounds_mod.full_risk_bound(inputs, loss, approx_error=args.approx_error)
    lip, phib = bounds_mod.rademacher_constant(loss, args.b)
    rad = bounds_mod.rademacher_surrogate_deviation(
        args.n, args.m, args.b, lip, phib, args.delta
    )
    return {
        "inputs": {
            "m": args.m, "n": args.n, "delta": args.delta, "epsilon": args.epsilon,
            "mu_core": mu_core, "c": args.c, "b": args.b, "loss": args.loss,
            "approx_error": args.approx_error,
        },
        "psi_term": report.psi_term,
        "vc_term": report.vc_term,
        "total": report.total,
        "delta_prime": report.delta_prime,
        "preconditions": report.preconditions,
        "rademacher_deviation": rad,
    }


def cmd_impossibility(args) -> dict:
    loss = parse_loss(args.loss)
    scales = [float(s) for s in args.scales.split(",")]
    rep = experiments.impossibility_report(
        args.depth, args.m, scales, loss, seed=args.seed
    )
    return {
        "depth": rep.depth,
        "m": rep.m,
        "loss": rep.loss_kind,
        "seed": rep.seed,
        "retries": rep.retries,
        "null_finding": rep.null_finding,
        "max_margin_lambda": rep.max_margin.tolist(),
        "margin": rep.margin,
        "classification_risk": rep.classification_risk,
        "misclassified_mass": rep.misclassified_mass,
        "rows": [
            {"scale": r.scale, "risk_maxmargin": r.risk_maxmargin,
             "risk_separator": r.risk_separator}
            for r in rep.rows
        ],
    }


def cmd_sweep(args) -> dict:
    with open(args.config) as fh:
        raw = json.load(fh)
    world = experiments.LatticeNoiseWorld(tuple(raw["world"]["cell_probs"]))
    stages = tuple(
        experiments.SweepStage(int(s["m"]), int(s["class_index"]), float(s["epsilon"]))
        for s in raw["stages"]
    )
    cfg = experiments.SweepConfig(
        world=world,
        stages=stages,
        loss=parse_loss(raw.get("loss", "logistic")),
        seed=int(raw["seed"]),
        replications=int(raw.get("replications", 20)),
    )
    results = experiments.consistency_sweep(cfg)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([
        "stage", "m", "class_size", "epsilon",
        "excess_risk_median", "excess_risk_p90", "replication_count",
    ])
    for r in results:
        writer.writerow([
            r.stage, r.m, r.class_size, r.epsilon,
            r.median, r.p90, len(r.excess_risks),
        ])
    if args.out:
        _write_atomic(args.out, buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return {}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardcoreboost")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output path (atomic write)")
        p.add_argument("--no-timestamp", action="store_true")

    p = sub.add_parser("train", help="fit a weighting by subgradient or coordinate descent")
    p.add_argument("dataset")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--loss", default="exp")
    p.add_argument("--method", choices=["sub", "coord"], default="coord")
    p.add_argument("--rho", type=float, default=1e-2)
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--step-scale", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", default=None, help="iteration trace CSV path")
    common(p)

    p = sub.add_parser("hardcore", help="compute and verify a hard-core certificate")
    p.add_argument("dataset")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dump-lp", action="store_true")
    common(p)

    p = sub.add_parser("bounds", help="evaluate the finite-sample bound calculators")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--loss", required=True)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--mu-core", type=float, default=0.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--approx-error", type=float, default=0.0)
    p.add_argument("--from-certificate", default=None)
    common(p)

    p = sub.add_parser("impossibility", help="staggered-world max-margin risk report")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--scales", default="1,2,4,8,16,32")
    p.add_argument("--loss", default="exp")
    p.add_argument("--seed", type=int, required=True)
    common(p)

    p = sub.add_parser("sweep", help="L-SRM consistency sweep from a JSON config")
    p.add_argument("--config", required=True)
    common(p)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "train": cmd_train,
        "hardcore": cmd_hardcore,
        "bounds": cmd_bounds,
        "impossibility": cmd_impossibility,
        "sweep": cmd_sweep,
    }
    try:
        report = handlers[args.command](args)
    except (OSError, ValueError, RuntimeError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    if report:
        _emit(report, args.out, args.no_timestamp)
    return 0


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))
