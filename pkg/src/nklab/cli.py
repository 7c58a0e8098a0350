"""Command-line verification runs: ``nklab {solve,curvature,classify,lemmas}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import classify as cls
from .curvature import ChartMetric, sectional_spectrum, su2_benchmark
from .geometry import (
    LEMMA_CASES,
    FramePoint,
    gray_defect,
    koszul_solve,
    kahler_obstruction_report,
    lemma_oracle,
    nabla_J_closed_form,
    nabla_J_tensor,
)
from .lie import build_split_su2su2, build_split_su3
from .nk import SolutionParams, closed_form, integrate_ode, nk_residual, reduced_system_check
from .profiles import SphereCurve, random_scalar, su2su2_profiles, su3_profiles

SCHEMA = 1

TOLERANCES = {
    "nk_residual": 1e-12,
    "rk4_error": 1e-8,
    "rk4_drift": 1e-10,
    "lemma_rel": 1e-10,
    "koszul_residual": 1e-12,
    "gray_defect": 1e-8,
    "kahler_obstruction": 1e-12,
    "benchmark": 1e-4,
    "sectional_rel": 1e-3,
    "einstein": 1e-3,
    "alpha_rel": 1e-3,
    "symmetry": 1e-4,
}


@dataclass
class RunConfig:
    command: str
    k: float = 1.0
    samples: int = 64
    planes: int = 200
    seed: int = 0
    fd_step: float = 1e-5
    output_path: str | None = None
    format: str = "json"
    group: str | None = None
    benchmark: str | None = None
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCES))


# --- serialisation ----------------------------------------------------------

def _encode(obj) -> str:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return json.dumps(str(x))
        text = format(x, ".17g")
        return text if any(ch in text for ch in ".e") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(report: dict) -> str:
    """JSON with every float written to 17 significant digits."""
    return _encode(report) + "\n"


def _finish(report: dict, checks: dict[str, bool]) -> dict:
    report["checks"] = checks
    report["failures"] = sorted(name for name, ok in checks.items() if not ok)
    return report


# --- commands -----------------------------------------------------------------

def cmd_solve(config: RunConfig) -> dict:
    tol = config.tolerances
    params = SolutionParams.canonical(config.k)
    prof = closed_form(params)
    lo, hi = prof.domain
    grid = np.linspace(0.8 * lo, 0.8 * hi, config.samples)
    res = max(nk_residual(prof, t).max_abs() for t in grid)
    red = max(float(np.max(np.abs(reduced_system_check(prof, t)))) for t in grid)
    norm = max(abs(float(np.sum(prof.a(t) ** 2)) - 1.0) for t in grid)

    step = 1e-3
    t_end = math.floor(min(3.0, 0.8 * hi) / step) * step
    num = integrate_ode(prof.f(0.0), prof.f.d1(0.0), config.k, (0.0, t_end), step)
    err = float(np.max(np.abs(num.f - prof.f(num.t))))

    samples = [
        {"t": float(t), "f": float(prof.f(t)), "fp": float(prof.f.d1(t)), "h": float(prof.h(t)),
         "a1": float(prof.a(t)[0]), "a2": float(prof.a(t)[1]), "a3": float(prof.a(t)[2]),
         "u": float(prof.u(t))}
        for t in grid
    ]
    report = {
        "schema": SCHEMA,
        "command": "solve",
        "k": config.k,
        "f0": float(prof.f(0.0)),
        "domain": [lo, hi],
        "max_nk_residual": res,
        "max_reduced_residual": red,
        "max_unit_norm_error": norm,
        "rk4": {"t_end": t_end, "step": step, "sup_error": err,
                "first_integral_drift": num.first_integral_drift, "truncated": num.truncated},
        "samples": samples,
    }
    return _finish(report, {
        "nk_residual": res < tol["nk_residual"],
        "reduced_residual": red < tol["nk_residual"],
        "unit_norm": norm < tol["nk_residual"],
        "rk4_error": err < tol["rk4_error"],
        "rk4_drift": num.first_integral_drift < tol["rk4_drift"],
    })


def curvature_t_values(k: float) -> list[float]:
    c = 0.8 * math.sqrt(3) * math.pi / abs(k)
    return [0.0, 0.4 * c, -0.4 * c, 0.8 * c, -0.8 * c]


def cmd_curvature(config: RunConfig) -> dict:
    tol = config.tolerances
    bench = su2_benchmark(min(config.planes, 100) if config.benchmark else 100, config.seed, config.fd_step)
    bench_dev = max(abs(bench["min"] - 0.125), abs(bench["max"] - 0.125))
    bench_block = {"constant": 0.125, "mean": bench["mean"], "max_deviation": bench_dev,
                   "symmetry": bench["symmetry"]}
    checks = {"benchmark_su2": bench_dev < tol["benchmark"]}
    report = {"schema": SCHEMA, "command": "curvature", "seed": config.seed, "benchmark": bench_block}
    if config.benchmark:
        report["benchmark"]["samples"] = bench["samples"]
        return _finish(report, checks)

    expected = config.k**2 / 12.0
    chart = ChartMetric(build_split_su3(), closed_form(SolutionParams.canonical(config.k)))
    points = []
    for t in curvature_t_values(config.k):
        rep = sectional_spectrum(chart, t, config.planes, config.seed, config.fd_step)
        points.append(rep)
    all_k = np.concatenate([p.sectional_samples for p in points])
    mean = float(all_k.mean())
    spread = float(np.ptp(all_k))
    alphas = np.array([p.alpha_constant_type for p in points])
    alpha_rel = float(np.ptp(alphas) / np.mean(alphas))
    checks.update({
        "sectional_constant": spread / abs(mean) < tol["sectional_rel"],
        "sectional_value": abs(mean - expected) / expected < tol["sectional_rel"],
        "einstein": all(p.einstein_residual < tol["einstein"] and p.einstein_lambda > 0 for p in points),
        "alpha_constant": alpha_rel < tol["alpha_rel"] and bool(np.all(alphas > 0)),
        "symmetries": all(max(p.symmetry_residual, p.bianchi_residual) < tol["symmetry"] for p in points),
    })
    report.update({
        "k": config.k,
        "planes": config.planes,
        "expected_curvature": expected,
        "sectional_mean": mean,
        "sectional_spread": spread,
        "alpha_relative_spread": alpha_rel,
        "points": [
            {key: val for key, val in p.to_dict().items() if key != "sectional_samples"}
            for p in points
        ],
    })
    if config.format == "csv":
        report["_csv_rows"] = [
            (p.t, i, kv) for p in points for i, kv in enumerate(p.sectional_samples)
        ]
    return _finish(report, checks)


def cmd_classify(config: RunConfig) -> str:
    return cls.classification_json(config.group)


def lemma_fidelity(n_samples: int, seed: int) -> dict[str, float]:
    """Max relative deviation, closed form vs Koszul oracle, per lemma case."""
    rng = np.random.default_rng(seed)
    split = build_split_su3()
    worst = {case: 0.0 for case in LEMMA_CASES}
    canonical = closed_form(SolutionParams.canonical(1.0))
    lo, hi = canonical.domain
    for i in range(n_samples):
        if i % 2:
            prof = canonical
            t = rng.uniform(0.8 * lo, 0.8 * hi)
        else:
            prof = su3_profiles(random_scalar(rng), random_scalar(rng), SphereCurve.random(rng))
            t = rng.uniform(-3, 3)
        point = FramePoint(split, t, prof)
        NJ = nabla_J_tensor(point)
        v = rng.standard_normal(4)
        for case in LEMMA_CASES:
            o = lemma_oracle(point, case, v, NJ)
            c = nabla_J_closed_form(point, case, v)
            dev = np.linalg.norm(o - c) / max(np.linalg.norm(o), 1.0)
            worst[case] = max(worst[case], float(dev))
    return worst


def gray_identity(k: float, n_vectors: int, n_t: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    prof = closed_form(SolutionParams.canonical(k))
    lo, hi = prof.domain
    split = build_split_su3()
    worst = 0.0
    for t in np.linspace(0.8 * lo, 0.8 * hi, n_t):
        point = FramePoint(split, t, prof)
        NJ = nabla_J_tensor(point)
        for X in rng.standard_normal((n_vectors, point.dim)):
            worst = max(worst, gray_defect(point, X, NJ))
    return worst


def su2su2_instances(n: int, seed: int):
    rng = np.random.default_rng(seed)
    split = build_split_su2su2()
    for _ in range(n):
        signs = tuple(int(s) for s in rng.choice([-1, 1], size=3))
        prof = su2su2_profiles(random_scalar(rng), random_scalar(rng), random_scalar(rng), signs)
        yield FramePoint(split, float(rng.uniform(-2, 2)), prof)


def cmd_lemmas(config: RunConfig) -> dict:
    tol = config.tolerances
    fidelity = lemma_fidelity(config.samples, config.seed)
    gray = gray_identity(config.k, 1000, 20, config.seed)
    koszul = 0.0
    rng = np.random.default_rng(config.seed)
    for split, prof in ((build_split_su3(), closed_form(SolutionParams.canonical(config.k))),):
        lo, hi = prof.domain
        for t in rng.uniform(0.8 * lo, 0.8 * hi, 20):
            table = koszul_solve(FramePoint(split, t, prof))
            koszul = max(koszul, table.torsion_residual(), table.metric_residual())
    for point in su2su2_instances(20, config.seed):
        table = koszul_solve(point)
        koszul = max(koszul, table.torsion_residual(), table.metric_residual())
    reports = [kahler_obstruction_report(p) for p in su2su2_instances(5, config.seed)]
    obstruction = {
        "xi_a_slots": max(r["xi_a_slots"] for r in reports),
        "all_triples": max(r["all_triples"] for r in reports),
        "invariant_forms": reports[0]["invariant_forms"],
        "invariant_support_without_xi_or_a": max(r["invariant_support_without_xi_or_a"] for r in reports),
    }
    report = {
        "schema": SCHEMA,
        "command": "lemmas",
        "seed": config.seed,
        "lemma_max_relative_deviation": fidelity,
        "koszul_max_residual": koszul,
        "gray_defect_max": gray,
        "su2xsu2_d_omega": obstruction,
    }
    return _finish(report, {
        **{f"lemma_{case}": dev < tol["lemma_rel"] for case, dev in fidelity.items()},
        "koszul": koszul < tol["koszul_residual"],
        "gray_identity": gray < tol["gray_defect"],
        "su2xsu2_xi_a_components": obstruction["xi_a_slots"] < tol["kahler_obstruction"],
        "su2xsu2_invariant_support": obstruction["invariant_support_without_xi_or_a"] == 0,
    })


# --- entry point --------------------------------------------------------------

def _positive(kind):
    def parse(text):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nklab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--k", type=_positive(float), default=1.0)
        p.add_argument("--samples", type=_positive(int), default=64)
        p.add_argument("--planes", type=_positive(int), default=200)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--fd-step", type=_positive(float), default=1e-5)
        p.add_argument("--output", dest="output_path")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    common(sub.add_parser("solve", help="closed-form NK profiles, residuals, RK4 cross-check"))
    p = sub.add_parser("curvature", help="sectional / Einstein / constant-type checks")
    common(p)
    p.add_argument("--benchmark", choices=("su2",))
    p = sub.add_parser("classify", help="admissible triples for a group")
    common(p)
    p.add_argument("--group", required=True)
    common(sub.add_parser("lemmas", help="closed-form nabla J vs the Koszul oracle"))
    return parser


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__})
    env_seed = os.environ.get("NKLAB_SEED")
    if env_seed is not None:
        cfg.seed = int(env_seed)
    return cfg


def _csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if report["command"] == "solve":
        keys = ["t", "f", "fp", "h", "a1", "a2", "a3", "u"]
        w.writerow(keys)
        for s in report["samples"]:
            w.writerow([format(s[key], ".17g") for key in keys])
    elif "_csv_rows" in report:
        w.writerow(["t", "plane_index", "K"])
        for t, i, kv in report["_csv_rows"]:
            w.writerow([format(t, ".17g"), i, format(kv, ".17g")])
    else:
        w.writerow(["sample", "K"])
        for i, kv in enumerate(report["benchmark"].get("samples", [])):
            w.writerow([i, format(kv, ".17g")])
    return buf.getvalue()


def run(config: RunConfig) -> tuple[str, int]:
    """Render the report for ``config``; returns (text, exit status)."""
    if config.command == "classify":
        return cmd_classify(config), 0
    report = {"solve": cmd_solve, "curvature": cmd_curvature, "lemmas": cmd_lemmas}[config.command](config)
    status = 1 if report["failures"] else 0
    if config.format == "csv":
        return _csv(report), status
    report.pop("_csv_rows", None)
    return dumps(report), status


def main(argv=None) -> int:
    config = parse_config(argv)
    try:
        text, status = run(config)
    except ValueError as exc:
        print(f"nklab: error: {exc}", file=sys.stderr)
        return 2
    if config.output_path:
        with open(config.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status:
        print("nklab: checks failed", file=sys.stderr)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
