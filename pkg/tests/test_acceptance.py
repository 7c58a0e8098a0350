"""Acceptance criteria, one test each, at their stated tolerances and time budgets.

Every test prints a PASS/FAIL line with the measured quantity and runtime; a
summary table is printed when the module finishes.
"""
import math
import time

import numpy as np
import pytest

from nklab.cli import RunConfig, run
from nklab.classify import enumerate_pairs
from nklab.curvature import ChartMetric, sectional_spectrum, su2_benchmark
from nklab.geometry import (
    LEMMA_CASES,
    FramePoint,
    gray_defect,
    koszul_solve,
    lemma_oracle,
    nabla_J_closed_form,
    nabla_J_tensor,
    psi_tensor,
)
from nklab.lie import build_algebra, build_split_su2su2, build_split_su3
from nklab.nk import SolutionParams, closed_form, integrate_ode, nk_residual, reduced_system_check
from nklab.profiles import SphereCurve, random_scalar, su2su2_profiles, su3_profiles

RESULTS = []


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    capman = request.config.pluginmanager.getplugin("capturemanager")
    with capman.global_and_fixture_disabled():
        print("\nacceptance summary")
        for line in RESULTS:
            print("  " + line)


def record(capsys, number, title, ok, elapsed, budget, detail):
    within = elapsed < budget
    verdict = "PASS" if ok and within else "FAIL"
    line = f"[{verdict}] {number:>2}. {title}: {detail}; {elapsed:.2f} s (budget {budget:g} s)"
    RESULTS.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert ok, detail
    assert within, f"runtime {elapsed:.2f} s exceeds {budget} s"


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_01_algebra_exactness(capsys):
    with Timer() as tm:
        jacobi = {name: build_algebra(name).jacobi_residual() for name in ("su2", "su3", "su2+su2")}
        split = build_split_su3()
        BAA = split.B(split.A, split.A)
    ok = all(v == 0 for v in jacobi.values()) and BAA == 4
    record(capsys, 1, "algebra exactness", ok, tm.elapsed, 1.0,
           f"Jacobi residuals {dict((k, str(v)) for k, v in jacobi.items())}, B(A,A) = {BAA}")


def test_02_koszul_oracle(capsys):
    with Timer() as tm:
        worst = 0.0
        rng = np.random.default_rng(2)
        su3 = build_split_su3()
        canonical = closed_form(SolutionParams.canonical(1.0))
        lo, hi = canonical.domain
        for t in np.linspace(0.8 * lo, 0.8 * hi, 20):
            table = koszul_solve(FramePoint(su3, t, canonical))
            worst = max(worst, table.torsion_residual(), table.metric_residual())
        su2su2 = build_split_su2su2()
        prof = su2su2_profiles(random_scalar(rng), random_scalar(rng), random_scalar(rng), (1, -1, 1))
        for t in np.linspace(-2, 2, 20):
            table = koszul_solve(FramePoint(su2su2, t, prof))
            worst = max(worst, table.torsion_residual(), table.metric_residual())
    record(capsys, 2, "Koszul oracle validity", worst < 1e-12, tm.elapsed, 1.0,
           f"max torsion/metric residual {worst:.2e} (< 1e-12)")


def test_03_lemma_fidelity(capsys):
    with Timer() as tm:
        rng = np.random.default_rng(3)
        split = build_split_su3()
        worst = {case: 0.0 for case in LEMMA_CASES}
        for _ in range(50):
            prof = su3_profiles(random_scalar(rng), random_scalar(rng), SphereCurve.random(rng))
            point = FramePoint(split, rng.uniform(-3, 3), prof)
            NJ = nabla_J_tensor(point)
            v = rng.standard_normal(4)
            for case in LEMMA_CASES:
                oracle = lemma_oracle(point, case, v, NJ)
                closed = nabla_J_closed_form(point, case, v)
                dev = np.linalg.norm(oracle - closed) / max(np.linalg.norm(oracle), 1.0)
                worst[case] = max(worst[case], dev)
    record(capsys, 3, "lemma fidelity", max(worst.values()) < 1e-10, tm.elapsed, 1.0,
           "max relative deviation " + ", ".join(f"{c}={d:.1e}" for c, d in worst.items()) + " (< 1e-10)")


def test_04_nk_solution(capsys):
    with Timer() as tm:
        prof = closed_form(SolutionParams.canonical(1.0))
        lo, hi = prof.domain
        grid = np.linspace(0.8 * lo, 0.8 * hi, 64)
        res = max(nk_residual(prof, t).max_abs() for t in grid)
        red = max(np.max(np.abs(reduced_system_check(prof, t))) for t in grid)
        norm = max(abs(prof.a(t) @ prof.a(t) - 1.0) for t in grid)
    ok = res < 1e-12 and red < 1e-12 and norm < 1e-12
    record(capsys, 4, "NK solution", ok, tm.elapsed, 1.0,
           f"nk residual {res:.1e}, reduced {red:.1e}, |a|^2 - 1 {norm:.1e} (< 1e-12)")


def test_05_integrator(capsys):
    with Timer() as tm:
        num = integrate_ode(1.0, 0.0, 1.0, (0.0, 3.0), 1e-3)
        err = float(np.max(np.abs(num.f - np.cos(num.t / math.sqrt(12)))))
    ok = err < 1e-8 and num.first_integral_drift < 1e-10 and not num.truncated
    record(capsys, 5, "integrator cross-check", ok, tm.elapsed, 5.0,
           f"sup error {err:.1e} (< 1e-8), first-integral drift {num.first_integral_drift:.1e} (< 1e-10)")


def test_06_gray_identity(capsys):
    with Timer() as tm:
        rng = np.random.default_rng(6)
        split = build_split_su3()
        prof = closed_form(SolutionParams.canonical(1.0))
        lo, hi = prof.domain
        worst = 0.0
        for t in np.linspace(0.8 * lo, 0.8 * hi, 20):
            point = FramePoint(split, t, prof)
            NJ = nabla_J_tensor(point)
            for X in rng.standard_normal((1000, 6)):
                worst = max(worst, gray_defect(point, X, NJ))
    record(capsys, 6, "Gray identity", worst < 1e-8, tm.elapsed, 5.0,
           f"max |(nabla_X J) X| {worst:.1e} over 20000 vectors (< 1e-8)")


def test_07_su2su2_kahler_obstruction(capsys):
    # Literal statement: every frame triple.  Known not to hold; see the notes on
    # the pure-n components, which the invariant 3-forms never see.
    with Timer() as tm:
        rng = np.random.default_rng(7)
        split = build_split_su2su2()
        worst, worst_xi_a = 0.0, 0.0
        for _ in range(5):
            signs = tuple(int(s) for s in rng.choice([-1, 1], size=3))
            prof = su2su2_profiles(random_scalar(rng), random_scalar(rng), random_scalar(rng), signs)
            psi = psi_tensor(FramePoint(split, rng.uniform(-2, 2), prof))
            worst = max(worst, float(np.max(np.abs(psi))))
            worst_xi_a = max(worst_xi_a, float(np.max(np.abs(psi[:2]))))
    record(capsys, 7, "su2+su2 d omega on all frame triples", worst < 1e-12, tm.elapsed, 5.0,
           f"max |d omega| {worst:.3g} (< 1e-12); restricted to first slot xi or a_hat {worst_xi_a:.1e}")


def test_08_curvature_benchmark(capsys):
    with Timer() as tm:
        res = su2_benchmark(100, seed=0)
    dev = max(abs(res["min"] - 0.125), abs(res["max"] - 0.125))
    record(capsys, 8, "SU(2) curvature benchmark", dev < 1e-4, tm.elapsed, 10.0,
           f"K in [{res['min']:.10f}, {res['max']:.10f}], max |K - 1/8| {dev:.1e} (< 1e-4)")


def test_09_constant_curvature(capsys):
    # Expected value: the completed metric is a round 6-sphere whose pole-to-pole
    # geodesic has the length 2 sqrt3 pi / k of the profile interval, so K = k^2 / 12.
    k = 1.0
    with Timer() as tm:
        chart = ChartMetric(build_split_su3(), closed_form(SolutionParams.canonical(k)))
        c = 0.8 * math.sqrt(3) * math.pi / k
        reports = [sectional_spectrum(chart, t, 200, seed=0) for t in (0.0, 0.4 * c, -0.4 * c, 0.8 * c, -0.8 * c)]
    samples = np.concatenate([r.sectional_samples for r in reports])
    mean = samples.mean()
    spread_rel = np.ptp(samples) / mean
    einstein = max(r.einstein_residual for r in reports)
    lam_ok = all(r.einstein_lambda > 0 for r in reports)
    alphas = np.array([r.alpha_constant_type for r in reports])
    alpha_rel = np.ptp(alphas) / alphas.mean()
    ok = (spread_rel < 1e-3 and abs(mean - k**2 / 12) / (k**2 / 12) < 1e-3 and einstein < 1e-3 and lam_ok
          and np.all(alphas > 0) and alpha_rel < 1e-3)
    record(capsys, 9, "constant curvature of the NK solution", ok, tm.elapsed, 60.0,
           f"{samples.size} planes, spread/mean {spread_rel:.1e}, mean {mean:.9f} vs 1/12, "
           f"Einstein residual {einstein:.1e}, lambda {reports[0].einstein_lambda:.6f}, "
           f"alpha {alphas.mean():.6f} (relative spread {alpha_rel:.1e})")


def test_10_classification(capsys, golden):
    with Timer() as tm:
        outputs = {g: run(RunConfig("classify", group=g))[0] for g in ("su3", "su2xsu2")}
        survivors = {p.label for p in enumerate_pairs() if p.survives}
    same = {g: out == (golden / f"classify_{g}.json").read_text() for g, out in outputs.items()}
    ok = all(same.values()) and survivors == {"(su2+su2, R)", "(su3, su2)"}
    record(capsys, 10, "classification golden files", ok, tm.elapsed, 1.0,
           f"byte-identical {same}, survivors {sorted(survivors)}")
