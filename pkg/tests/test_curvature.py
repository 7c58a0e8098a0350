import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nklab.curvature import (
    ChartDomainError,
    ChartMetric,
    CurvatureReport,
    GroupChart,
    curvature_symmetry_residuals,
    exp_differential,
    metric_at,
    random_plane,
    ricci,
    riemann_at,
    sectional,
    sectional_spectrum,
    su2_benchmark,
    su2_sectional_oracle,
)
from nklab.geometry import FramePoint
from nklab.lie import build_algebra, killing_opposite

# Curvature of the canonical solution: f vanishes at the two ends of an interval
# of length 2 sqrt3 pi / k. The normal geodesic runs pole to pole on the completed
# round 6-sphere, so pi r = 2 sqrt3 pi / k, r = sqrt12 / k and K = k^2 / 12.
K_CANONICAL = 1.0 / 12.0


def curvature_ts(k):
    c = 0.8 * math.sqrt(3) * math.pi / k
    return [0.0, 0.4 * c, -0.4 * c, 0.8 * c, -0.8 * c]


class TestExpDifferential:
    def test_zero(self):
        np.testing.assert_array_equal(exp_differential(np.zeros((4, 4))), np.eye(4))

    def test_against_spectral_formula(self):
        rng = np.random.default_rng(0)
        M = rng.standard_normal((5, 5))
        M = 0.3 * (M + M.T)
        lam, V = np.linalg.eigh(M)
        expected = V @ np.diag((1 - np.exp(-lam)) / lam) @ V.T
        np.testing.assert_allclose(exp_differential(M), expected, atol=1e-14)


class TestChartMetric:
    def test_origin_is_frame_gram(self, su3_split, canonical):
        chart = ChartMetric(su3_split, canonical)
        for t in (-2.0, 0.0, 1.5):
            np.testing.assert_allclose(metric_at(chart, t, np.zeros(5)), FramePoint(su3_split, t, canonical).gram,
                                       rtol=1e-15)

    def test_origin_diagonal(self, su3_split, canonical):
        G = metric_at(ChartMetric(su3_split, canonical), 0.3, np.zeros(5))
        f, h = canonical.f(0.3), canonical.h(0.3)
        np.testing.assert_allclose(np.diag(G), [1.0, 4 * h**2] + [12 * f**2] * 4, rtol=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-4.0, 4.0), st.lists(st.floats(-0.2, 0.2), min_size=5, max_size=5))
    def test_symmetric_and_unit_normal(self, su3_split, canonical, t, x):
        G = metric_at(ChartMetric(su3_split, canonical), t, x)
        assert np.max(np.abs(G - G.T)) < 1e-14
        assert G[0, 0] == 1.0 and not np.any(G[0, 1:])

    def test_outside_chart(self, su3_split, canonical):
        with pytest.raises(ChartDomainError):
            metric_at(ChartMetric(su3_split, canonical), 0.0, np.full(5, 0.4))

    def test_outside_profile_domain(self, su3_split, canonical):
        with pytest.raises(ChartDomainError):
            metric_at(ChartMetric(su3_split, canonical), 6.0, np.zeros(5))


class TestSu2Benchmark:
    def test_constant_one_eighth(self):
        res = su2_benchmark(100, seed=0)
        assert abs(res["min"] - 0.125) < 1e-4 and abs(res["max"] - 0.125) < 1e-4

    def test_oracle_per_plane(self):
        res = su2_benchmark(20, seed=3)
        np.testing.assert_allclose(res["samples"], res["oracle"], atol=1e-6)

    def test_oracle_formula(self):
        # orthogonal generators with [e1, e2] = e3, |e_i|^2 = 2
        assert su2_sectional_oracle(np.eye(3)[0], np.eye(3)[1]) == pytest.approx(0.125)

    def test_away_from_identity(self):
        res = su2_benchmark(30, seed=1, x=(0.1, -0.2, 0.05))
        assert abs(res["mean"] - 0.125) < 1e-4

    def test_symmetries(self):
        sym = su2_benchmark(1)["symmetry"]
        assert max(sym.values()) < 1e-4


class TestEngineIdentities:
    def test_flat_metric(self):
        R = riemann_at(lambda y: np.eye(3), np.zeros(3))
        assert not np.any(R)

    def test_round_two_sphere(self):
        # d theta^2 + sin^2 theta d phi^2 has K = 1
        def metric(y):
            return np.diag([1.0, math.sin(y[0]) ** 2])

        y = np.array([1.0, 0.3])
        G = metric(y)
        R = riemann_at(metric, y)
        assert sectional(R, G, [1, 0], [0, 1]) == pytest.approx(1.0, abs=1e-6)

    def test_random_plane_orthonormal(self):
        rng = np.random.default_rng(0)
        G = np.diag([1.0, 2.0, 3.0])
        X, Y = random_plane(rng, G)
        np.testing.assert_allclose([X @ G @ X, Y @ G @ Y, X @ G @ Y], [1, 1, 0], atol=1e-14)


@pytest.fixture(scope="module")
def report(su3_split, canonical):
    return sectional_spectrum(ChartMetric(su3_split, canonical), 1.0, n_planes=50, seed=0)


class TestCanonicalSolution:
    def test_constant_then_value(self, report):
        samples = np.array(report.sectional_samples)
        assert np.ptp(samples) / samples.mean() < 1e-3
        assert samples.mean() == pytest.approx(K_CANONICAL, rel=1e-3)

    def test_einstein(self, report):
        assert report.einstein_lambda == pytest.approx(5 * K_CANONICAL, rel=1e-3)
        assert report.einstein_residual < 1e-3

    def test_symmetry_residuals(self, report):
        assert report.symmetry_residual < 1e-4
        assert report.bianchi_residual < 1e-4

    def test_alpha_positive(self, report):
        assert report.alpha_constant_type > 0
        assert report.alpha_spread < 1e-6 * report.alpha_constant_type

    def test_report_json(self, report):
        import json

        doc = json.loads(report.to_json())
        assert set(doc) >= {"t", "sectional_mean", "einstein_lambda", "alpha_constant_type"}
        assert len(doc["sectional_samples"]) == 50

    def test_homothety(self, su3_split, canonical):
        s = 2.0
        scaled = canonical.homothety(s)
        chart = ChartMetric(su3_split, scaled)
        for t in curvature_ts(1.0):
            rep = sectional_spectrum(chart, s * t, n_planes=10, seed=1)
            assert rep.sectional_mean == pytest.approx(K_CANONICAL / s**2, rel=1e-3)

    @pytest.mark.parametrize("k", [2.0])
    def test_other_k(self, su3_split, k):
        from nklab.nk import SolutionParams, closed_form

        chart = ChartMetric(su3_split, closed_form(SolutionParams.canonical(k)))
        rep = sectional_spectrum(chart, 0.3, n_planes=20, seed=0)
        samples = np.array(rep.sectional_samples)
        assert np.ptp(samples) / samples.mean() < 1e-3
        assert samples.mean() == pytest.approx(k**2 / 12, rel=1e-3)


class TestGroupChart:
    def test_origin_is_form(self):
        alg = build_algebra("su2")
        B = killing_opposite(alg).as_float()
        np.testing.assert_allclose(GroupChart(alg, B)(np.zeros(3)), B)

    def test_ricci_of_su2(self):
        alg = build_algebra("su2")
        B = killing_opposite(alg).as_float()
        chart = GroupChart(alg, B)
        R = riemann_at(chart, np.zeros(3))
        # K = 1/8 in dimension 3 gives Ric = 2 K g
        np.testing.assert_allclose(ricci(R, B), 0.25 * B, atol=1e-6)
        assert max(curvature_symmetry_residuals(R).values()) < 1e-4


def test_report_dataclass_fields():
    assert "alpha_constant_type" in CurvatureReport.__dataclass_fields__
