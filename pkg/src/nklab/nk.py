"""The invariant nearly Kahler equations on su3 / su2 and their solution family."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .profiles import ProfileSet, Scalar, su3_profiles

__all__ = [
    "EPS_DOMAIN",
    "NKResidual",
    "SolutionParams",
    "Reparametrization",
    "SampledProfiles",
    "nk_residual",
    "reduced_system_check",
    "closed_form",
    "reparametrize",
    "integrate_ode",
]

EPS_DOMAIN = 1e-6
SQRT12 = math.sqrt(12.0)
H_OVER_F = 2.0 / math.sqrt(3.0)


@dataclass(frozen=True)
class NKResidual:
    r_b2_0: float
    r_b2: np.ndarray
    r_b3: np.ndarray
    r_norm: float

    def as_array(self) -> np.ndarray:
        return np.concatenate([[self.r_b2_0], self.r_b2, self.r_b3, [self.r_norm]])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.as_array())))


def _check_scales(f: float, h: float, t: float) -> None:
    if not (f > 0 and h > 0):
        raise ValueError(f"scale functions must be positive at t={t}: f={f}, h={h}")


def nk_residual(profiles: ProfileSet, t: float) -> NKResidual:
    """Residuals of the nearly Kahler conditions at t.

    r_b2_0  = h a1/(4f^2) + f'/f
    r_b2[i] = a_i' - (f'/f) a_i - h/(4f^2) [i == 1]
    r_b3[j] = a_j (3h^2/(2f^2) - 2)   for j = 2, 3
    r_norm  = a1^2 + a2^2 + a3^2 - 1
    """
    f, df, h = profiles.f(t), profiles.f.d1(t), profiles.h(t)
    _check_scales(f, h, t)
    a = np.asarray(profiles.a(t), dtype=float)
    da = np.asarray(profiles.da(t), dtype=float)
    c = h / (4 * f**2)
    r_b2 = da - (df / f) * a - c * np.array([1.0, 0.0, 0.0])
    r_b3 = a[1:] * (3 * h**2 / (2 * f**2) - 2)
    return NKResidual(c * a[0] + df / f, r_b2, r_b3, float(a @ a - 1.0))


def reduced_system_check(profiles: ProfileSet, t: float) -> np.ndarray:
    """Residuals of the reduced system, in order:

    a1 + sqrt(12) f', a2 - k f, a3, h - (2/sqrt3) f,
    (f')^2 - f f'' - 1/12, 12 (f')^2 + k^2 f^2 - 1.
    """
    f, df, d2f, h = profiles.f(t), profiles.f.d1(t), profiles.f.d2(t), profiles.h(t)
    _check_scales(f, h, t)
    a = np.asarray(profiles.a(t), dtype=float)
    k = profiles.k
    return np.array([
        a[0] + SQRT12 * df,
        a[1] - k * f,
        a[2],
        h - H_OVER_F * f,
        df**2 - f * d2f - 1.0 / 12.0,
        12 * df**2 + k**2 * f**2 - 1.0,
    ])


@dataclass(frozen=True)
class SolutionParams:
    """f(t) = A cos(k t / sqrt12) + B sin(k t / sqrt12) with (A^2 + B^2) k^2 = 1."""

    A: float
    B: float
    k: float

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("k must be nonzero")
        if abs((self.A**2 + self.B**2) * self.k**2 - 1.0) > 1e-12:
            raise ValueError(f"(A^2 + B^2) k^2 = 1 violated: {(self.A**2 + self.B**2) * self.k**2!r}")

    @classmethod
    def canonical(cls, k: float = 1.0) -> "SolutionParams":
        return cls(1.0 / abs(k), 0.0, k)

    @classmethod
    def from_phase(cls, k: float, phase: float) -> "SolutionParams":
        """Parameters whose f peaks at |k| t / sqrt12 = phase."""
        r = 1.0 / abs(k)
        return cls(r * math.cos(phase), math.copysign(1.0, k) * r * math.sin(phase), k)

    @property
    def omega(self) -> float:
        return self.k / SQRT12

    @property
    def phase(self) -> float:
        # f = (1/|k|) cos(|omega| t - phase)
        return math.atan2(self.k * self.B, abs(self.k) * self.A)

    @property
    def domain(self) -> tuple[float, float]:
        w = abs(self.omega)
        centre = self.phase / w
        half = math.pi / (2 * w)
        return centre - half, centre + half


def closed_form(params: SolutionParams) -> ProfileSet:
    """Profiles of the solution family: h = (2/sqrt3) f, a = (-sqrt12 f', k f, 0)."""
    A, B, k, w = params.A, params.B, params.k, params.omega
    f = Scalar.trig(A, B, w)
    h = f.scaled(H_OVER_F)

    def a(t):
        return np.array([-SQRT12 * f.d1(t), k * f(t), 0.0])

    def da(t):
        return np.array([-SQRT12 * f.d2(t), k * f.d1(t), 0.0])

    return su3_profiles(f, h, a, da, k=k, domain=params.domain)


@dataclass(frozen=True)
class Reparametrization:
    """Canonical parameters plus the shift of the affine parameter s = k t + shift.

    ``closed_form(original).f(t) == closed_form(params).f(t + shift / k)``.
    """

    params: SolutionParams
    shift: float

    def to_canonical(self, t):
        return t + self.shift / self.params.k


def reparametrize(params: SolutionParams) -> Reparametrization:
    """Move the phase of f into the parameter; k is unchanged.

    shift = -sqrt12 * phase, where phase = arcsin(kB) when A >= 0.  The atan2 form
    also covers A < 0, where arcsin picks the wrong branch.
    """
    shift = -SQRT12 * params.phase * math.copysign(1.0, params.k)
    return Reparametrization(SolutionParams.canonical(params.k), shift)


@dataclass(frozen=True)
class SampledProfiles:
    t: np.ndarray
    f: np.ndarray
    fp: np.ndarray
    k: float
    truncated: bool
    first_integral_drift: float

    @property
    def h(self) -> np.ndarray:
        return H_OVER_F * self.f

    @property
    def a(self) -> np.ndarray:
        return np.stack([-SQRT12 * self.fp, self.k * self.f, np.zeros_like(self.f)], axis=1)

    @property
    def u(self) -> np.ndarray:
        return 1.0 / (2.0 * self.h)

    def rows(self):
        for i in range(len(self.t)):
            a1, a2, a3 = self.a[i]
            yield (self.t[i], self.f[i], self.fp[i], self.h[i], a1, a2, a3, self.u[i])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "f", "fp", "h", "a1", "a2", "a3", "u"])
        for row in self.rows():
            w.writerow([f"{x:.17g}" for x in row])
        return buf.getvalue()

    def to_json(self) -> str:
        keys = ["t", "f", "fp", "h", "a1", "a2", "a3", "u"]
        doc = {
            "k": self.k,
            "truncated": self.truncated,
            "first_integral_drift": self.first_integral_drift,
            "samples": [dict(zip(keys, map(float, row))) for row in self.rows()],
        }
        return json.dumps(doc)


def _rhs(y):
    f, fp = y
    return np.array([fp, (fp * fp - 1.0 / 12.0) / f])


def integrate_ode(f0: float, fp0: float, k: float, t_span=(0.0, 3.0), step: float = 1e-3,
                  eps_domain: float = EPS_DOMAIN) -> SampledProfiles:
    """Classical RK4 for f'' = ((f')^2 - 1/12) / f.

    12 (f')^2 + k^2 f^2 is a first integral; it is monitored, not imposed.  The
    trajectory stops (``truncated``) once f falls to ``eps_domain``.
    """
    if f0 <= 0:
        raise ValueError("f0 must be positive")
    if abs(12 * fp0**2 + k**2 * f0**2 - 1.0) > 1e-12:
        raise ValueError("initial data violate 12 fp0^2 + k^2 f0^2 = 1")
    t0, t1 = t_span
    n = int(round((t1 - t0) / step))
    if n <= 0 or not math.isclose(n * step, t1 - t0, rel_tol=1e-9, abs_tol=1e-12):
        raise ValueError("t_span must be a positive whole number of steps")
    dt = (t1 - t0) / n
    ts = [t0]
    ys = [np.array([f0, fp0], dtype=float)]
    truncated = False
    y = ys[0]
    for i in range(n):
        k1 = _rhs(y)
        k2 = _rhs(y + 0.5 * dt * k1)
        k3 = _rhs(y + 0.5 * dt * k2)
        k4 = _rhs(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)) or y[0] <= eps_domain:
            truncated = True
            break
        ts.append(t0 + (i + 1) * dt)
        ys.append(y)
    arr = np.array(ys)
    invariant = 12 * arr[:, 1] ** 2 + k**2 * arr[:, 0] ** 2
    return SampledProfiles(np.array(ts), arr[:, 0], arr[:, 1], k, truncated,
                           float(np.max(np.abs(invariant - invariant[0]))))
