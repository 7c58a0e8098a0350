"""Finite-difference curvature of invariant metrics in exponential coordinates.

Charts are ``(t, x) -> (t, exp(sum x_a e_a) K)`` with e_a the m-basis.  Pulling the
invariant metric back needs the left-trivialised differential of exp,
``D(ad_x) = (1 - exp(-ad_x)) / ad_x``, summed as a power series.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import FramePoint, constant_type_alpha, nabla_J_tensor
from .lie import LieAlgebra, ReductiveSplit, build_algebra, killing_opposite
from .profiles import ProfileSet

__all__ = [
    "ChartMetric",
    "GroupChart",
    "CurvatureReport",
    "exp_differential",
    "metric_at",
    "metric_derivatives",
    "christoffel",
    "riemann_at",
    "sectional",
    "ricci",
    "curvature_symmetry_residuals",
    "random_plane",
    "sectional_spectrum",
    "su2_benchmark",
    "su2_sectional_oracle",
    "ChartDomainError",
]

X_MAX = 0.5
SERIES_TOL = 1e-16
FD_STEP = 1e-5
OUTER_STEP = 1e-3


class ChartDomainError(ValueError):
    pass


def exp_differential(ad_x: np.ndarray) -> np.ndarray:
    """sum_{n>=0} (-ad_x)^n / (n+1)!, truncated once a term drops below 1e-16."""
    dim = ad_x.shape[0]
    term = np.eye(dim)
    total = term.copy()
    n = 0
    while True:
        n += 1
        term = -term @ ad_x / (n + 1)
        total += term
        if np.max(np.abs(term)) < SERIES_TOL or n > 200:
            return total


def _ad(c: np.ndarray, x: np.ndarray) -> np.ndarray:
    # (ad x)[k, j] = sum_i x_i c[i, j, k]
    return np.einsum("i,ijk->kj", x, c)


@dataclass(frozen=True, eq=False)
class ChartMetric:
    """Metric dt^2 + g_t in exponential coordinates around gamma(base_t)."""

    split: ReductiveSplit
    profiles: ProfileSet
    base_t: float = 0.0

    def __post_init__(self):
        s = self.split
        m = list(s.m)
        object.__setattr__(self, "_c", s.algebra.constants())
        object.__setattr__(self, "_m", m)
        object.__setattr__(self, "_B", s.B.as_float()[np.ix_(m, m)])
        names = []
        for name, idx in s.blocks.items():
            names += [name] * len(idx)
        object.__setattr__(self, "_block_of", names)

    @property
    def dim(self) -> int:
        return 1 + len(self._m)

    def scales(self, t: float) -> np.ndarray:
        return np.array([self.profiles.scale_of(b)(t) for b in self._block_of])

    def __call__(self, y) -> np.ndarray:
        return metric_at(self, y[0], y[1:])


def metric_at(chart: ChartMetric, t: float, x) -> np.ndarray:
    """G_{mu nu}(t, x): the 6x6 metric in coordinates (t, x_1..x_5)."""
    x = np.asarray(x, dtype=float)
    if np.linalg.norm(x) > X_MAX:
        raise ChartDomainError(f"|x| = {np.linalg.norm(x):.3g} exceeds {X_MAX}")
    s = chart.scales(t)
    if np.any(~np.isfinite(s)) or np.any(s <= 0):
        raise ChartDomainError(f"t = {t!r} outside the region where the scales are positive")
    full = np.zeros(chart.split.algebra.dim)
    full[chart._m] = x
    D = exp_differential(_ad(chart._c, full))
    P = D[np.ix_(chart._m, chart._m)]
    Q = np.outer(s, s) * chart._B
    G = np.zeros((chart.dim, chart.dim))
    G[0, 0] = 1.0
    G[1:, 1:] = P.T @ Q @ P
    return 0.5 * (G + G.T)


@dataclass(frozen=True, eq=False)
class GroupChart:
    """Bi-invariant metric Q on a group in exponential coordinates (no t)."""

    algebra: LieAlgebra
    Q: np.ndarray

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.linalg.norm(x) > X_MAX:
            raise ChartDomainError(f"|x| = {np.linalg.norm(x):.3g} exceeds {X_MAX}")
        D = exp_differential(_ad(self.algebra.constants(), x))
        G = D.T @ self.Q @ D
        return 0.5 * (G + G.T)


def _step(y_i: float, rel: float) -> float:
    return rel * max(1.0, abs(y_i))


def _richardson(fn: Callable, y: np.ndarray, i: int, h: float):
    """Central difference along coordinate i with one Richardson level."""
    def central(hh):
        e = np.zeros_like(y)
        e[i] = hh
        return (fn(y + e) - fn(y - e)) / (2 * hh)
    return (4 * central(h) - central(2 * h)) / 3


def metric_derivatives(metric: Callable, y, fd_step: float = FD_STEP) -> np.ndarray:
    """dG[c, a, b] = d_c G_ab."""
    y = np.asarray(y, dtype=float)
    return np.array([_richardson(metric, y, c, _step(y[c], fd_step)) for c in range(len(y))])


def christoffel(metric: Callable, y, fd_step: float = FD_STEP) -> np.ndarray:
    """Gamma[a, b, c] = Gamma^a_{bc}."""
    y = np.asarray(y, dtype=float)
    G = metric(y)
    dG = metric_derivatives(metric, y, fd_step)
    lower = 0.5 * (np.einsum("bdc->dbc", dG) + np.einsum("cdb->dbc", dG) - dG)
    return np.einsum("ad,dbc->abc", np.linalg.inv(G), lower)


def riemann_at(metric: Callable, y, fd_step: float = FD_STEP, outer_step: float = OUTER_STEP) -> np.ndarray:
    """Fully covariant R_{abcd} = g(R(d_a, d_b) d_c, d_d) at y.

    R^d_{cab} = d_a Gamma^d_{bc} - d_b Gamma^d_{ac}
              + Gamma^d_{ae} Gamma^e_{bc} - Gamma^d_{be} Gamma^e_{ac}
    """
    y = np.asarray(y, dtype=float)
    n = len(y)
    G = metric(y)
    Gam = christoffel(metric, y, fd_step)
    dGam = np.array([
        _richardson(lambda z: christoffel(metric, z, fd_step), y, a, _step(y[a], outer_step))
        for a in range(n)
    ])  # dGam[a, d, b, c] = d_a Gamma^d_{bc}
    up = (
        np.einsum("adbc->dcab", dGam)
        - np.einsum("bdac->dcab", dGam)
        + np.einsum("dae,ebc->dcab", Gam, Gam)
        - np.einsum("dbe,eac->dcab", Gam, Gam)
    )
    return np.einsum("de,ecab->abcd", G, up)


def sectional(R: np.ndarray, G: np.ndarray, X, Y) -> float:
    X, Y = np.asarray(X, float), np.asarray(Y, float)
    num = np.einsum("abcd,a,b,c,d->", R, X, Y, Y, X)
    den = (X @ G @ X) * (Y @ G @ Y) - (X @ G @ Y) ** 2
    return float(num / den)


def ricci(R: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Ric_{bc} = G^{ad} R_{abcd}."""
    return np.einsum("ad,abcd->bc", np.linalg.inv(G), R)


def curvature_symmetry_residuals(R: np.ndarray) -> dict[str, float]:
    """Pair antisymmetry, pair exchange and first Bianchi, relative to max|R|."""
    scale = float(np.max(np.abs(R))) or 1.0
    return {
        "antisymmetry": float(np.max(np.abs(R + R.transpose(1, 0, 2, 3)))) / scale,
        "pair_symmetry": float(np.max(np.abs(R - R.transpose(2, 3, 0, 1)))) / scale,
        "bianchi": float(np.max(np.abs(R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)))) / scale,
    }


def random_plane(rng: np.random.Generator, G: np.ndarray, min_det: float = 1e-10):
    """Two G-orthonormal vectors from standard normals; resample degenerate draws."""
    n = G.shape[0]
    while True:
        X, Y = rng.standard_normal(n), rng.standard_normal(n)
        det = (X @ G @ X) * (Y @ G @ Y) - (X @ G @ Y) ** 2
        if det < min_det:
            continue
        X = X / math.sqrt(X @ G @ X)
        Y = Y - (X @ G @ Y) * X
        return X, Y / math.sqrt(Y @ G @ Y)


@dataclass
class CurvatureReport:
    t: float
    sectional_samples: list[float]
    sectional_mean: float
    sectional_spread: float
    ricci_matrix: np.ndarray
    einstein_lambda: float
    einstein_residual: float
    bianchi_residual: float
    symmetry_residual: float
    alpha_constant_type: float
    alpha_spread: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "sectional_mean": self.sectional_mean,
            "sectional_spread": self.sectional_spread,
            "sectional_samples": list(self.sectional_samples),
            "ricci_matrix": np.asarray(self.ricci_matrix).tolist(),
            "einstein_lambda": self.einstein_lambda,
            "einstein_residual": self.einstein_residual,
            "bianchi_residual": self.bianchi_residual,
            "symmetry_residual": self.symmetry_residual,
            "alpha_constant_type": self.alpha_constant_type,
            "alpha_spread": self.alpha_spread,
            **self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def sectional_spectrum(chart: ChartMetric, t: float, n_planes: int = 200, seed: int = 0,
                       fd_step: float = FD_STEP) -> CurvatureReport:
    """Sample sectional curvatures at gamma(t) and fit Ricci / Einstein / alpha."""
    rng = np.random.default_rng(seed)
    y = np.zeros(chart.dim)
    y[0] = t
    G = chart(y)
    R = riemann_at(chart, y, fd_step)
    samples = []
    for _ in range(n_planes):
        X, Y = random_plane(rng, G)
        samples.append(sectional(R, G, X, Y))
    samples = np.array(samples)
    mean = float(samples.mean())
    Ric = ricci(R, G)
    lam = float(np.trace(np.linalg.solve(G, Ric)) / chart.dim)
    sym = curvature_symmetry_residuals(R)

    # The chart frame at x = 0 is the adapted frame, so nabla J comes from the Koszul side.
    alpha, alpha_spread = float("nan"), float("nan")
    if chart.profiles.a is not None or chart.profiles.jn is not None:
        point = FramePoint(chart.split, t, chart.profiles)
        NJ = nabla_J_tensor(point)
        alphas = []
        for _ in range(n_planes):
            X, Y = random_plane(rng, G)
            alphas.append(constant_type_alpha(point, X, Y, NJ))
        alphas = np.array(alphas)
        alpha = float(alphas.mean())
        alpha_spread = float(np.ptp(alphas))

    return CurvatureReport(
        t=float(t),
        sectional_samples=samples.tolist(),
        sectional_mean=mean,
        sectional_spread=float(np.ptp(samples)),
        ricci_matrix=Ric,
        einstein_lambda=lam,
        einstein_residual=float(np.max(np.abs(Ric - lam * G)) / np.max(np.abs(G))),
        bianchi_residual=sym["bianchi"],
        symmetry_residual=max(sym["antisymmetry"], sym["pair_symmetry"]),
        alpha_constant_type=alpha,
        alpha_spread=alpha_spread,
    )


def su2_sectional_oracle(X, Y) -> float:
    """K(X, Y) = |[X, Y]|_B^2 / 4 / (|X|^2 |Y|^2 - B(X, Y)^2) for bi-invariant B."""
    alg = build_algebra("su2")
    B = killing_opposite(alg).as_float()
    c = alg.constants()
    XY = np.einsum("i,j,ijk->k", X, Y, c)
    den = (X @ B @ X) * (Y @ B @ Y) - (X @ B @ Y) ** 2
    return float(0.25 * (XY @ B @ XY) / den)


def su2_benchmark(n_planes: int = 100, seed: int = 0, fd_step: float = FD_STEP,
                  x=(0.0, 0.0, 0.0)) -> dict:
    """Engine run on SU(2) with the bi-invariant metric B; every K should be 1/8."""
    alg = build_algebra("su2")
    B = killing_opposite(alg).as_float()
    chart = GroupChart(alg, B)
    y = np.asarray(x, dtype=float)
    G = chart(y)
    R = riemann_at(chart, y, fd_step)
    rng = np.random.default_rng(seed)
    samples, oracle = [], []
    for _ in range(n_planes):
        X, Y = random_plane(rng, G)
        samples.append(sectional(R, G, X, Y))
        # At x = 0 the coordinate frame is the Lie algebra basis.
        if not np.any(y):
            oracle.append(su2_sectional_oracle(X, Y))
    samples = np.array(samples)
    return {
        "samples": samples.tolist(),
        "oracle": oracle,
        "mean": float(samples.mean()),
        "min": float(samples.min()),
        "max": float(samples.max()),
        "symmetry": curvature_symmetry_residuals(R),
    }
