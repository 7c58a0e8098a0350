"""Scale functions and structure coefficients along the normal geodesic."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

import numpy as np

__all__ = ["Scalar", "SphereCurve", "ProfileSet", "su3_profiles", "su2su2_profiles", "random_scalar"]


@dataclass(frozen=True)
class Scalar:
    """A function of t carrying analytic first and second derivatives."""

    value: Callable[[float], float]
    d1: Callable[[float], float]
    d2: Callable[[float], float]

    def __call__(self, t):
        return self.value(t)

    def scaled(self, c: float) -> "Scalar":
        return Scalar(lambda t: c * self.value(t), lambda t: c * self.d1(t), lambda t: c * self.d2(t))

    def homothety(self, s: float) -> "Scalar":
        """t -> s * F(t / s), the profile of the metric s^2 g."""
        return Scalar(
            lambda t: s * self.value(t / s),
            lambda t: self.d1(t / s),
            lambda t: self.d2(t / s) / s,
        )

    @classmethod
    def constant(cls, c: float) -> "Scalar":
        return cls(lambda t: c, lambda t: 0.0, lambda t: 0.0)

    @classmethod
    def trig(cls, a: float, b: float, omega: float, offset: float = 0.0) -> "Scalar":
        """offset + a cos(omega t) + b sin(omega t)."""
        return cls(
            lambda t: offset + a * np.cos(omega * t) + b * np.sin(omega * t),
            lambda t: omega * (-a * np.sin(omega * t) + b * np.cos(omega * t)),
            lambda t: -omega**2 * (a * np.cos(omega * t) + b * np.sin(omega * t)),
        )


def random_scalar(rng: np.random.Generator, terms: int = 3, floor: float = 0.5) -> Scalar:
    """Positive trigonometric polynomial: floor + sum(amplitudes) + wiggles."""
    amps = rng.uniform(-0.4, 0.4, size=(terms, 2))
    omegas = rng.uniform(0.3, 2.0, size=terms)
    base = floor + np.abs(amps).sum() + rng.uniform(0.0, 1.0)
    parts = [Scalar.trig(a, b, w) for (a, b), w in zip(amps, omegas)]
    return Scalar(
        lambda t: base + sum(p.value(t) for p in parts),
        lambda t: sum(p.d1(t) for p in parts),
        lambda t: sum(p.d2(t) for p in parts),
    )


@dataclass(frozen=True)
class SphereCurve:
    """Unit vector (a1, a2, a3)(t) from two angle functions.

    a = (cos alpha cos beta, cos alpha sin beta, sin alpha).
    """

    alpha: Scalar
    beta: Scalar

    def __call__(self, t):
        al, be = self.alpha(t), self.beta(t)
        return np.array([np.cos(al) * np.cos(be), np.cos(al) * np.sin(be), np.sin(al)])

    def derivative(self, t):
        al, be = self.alpha(t), self.beta(t)
        dal, dbe = self.alpha.d1(t), self.beta.d1(t)
        return np.array([
            -np.sin(al) * dal * np.cos(be) - np.cos(al) * np.sin(be) * dbe,
            -np.sin(al) * dal * np.sin(be) + np.cos(al) * np.cos(be) * dbe,
            np.cos(al) * dal,
        ])

    @classmethod
    def random(cls, rng: np.random.Generator) -> "SphereCurve":
        return cls(
            Scalar.trig(*rng.uniform(-1, 1, 2), rng.uniform(0.2, 1.5), rng.uniform(-1, 1)),
            Scalar.trig(*rng.uniform(-1, 1, 2), rng.uniform(0.2, 1.5), rng.uniform(-3, 3)),
        )


@dataclass(frozen=True)
class ProfileSet:
    """Metric scales per m-block, plus the data of the invariant J.

    ``blocks`` maps split block names to scale names, e.g. ``{"a": "h", "n": "f"}``
    for su3 or ``{"a": "f", "n1": "h1", "n2": "h2"}`` for su2+su2.  J on the n-block
    is ``sum a_i(t) J_i`` unless a constant ``jn`` is given.
    """

    scales: Mapping[str, Scalar]
    blocks: Mapping[str, str]
    a: Callable | None = None
    da: Callable | None = None
    jn: np.ndarray | None = None
    k: float = 1.0
    domain: tuple[float, float] = (-np.inf, np.inf)
    xi_sign: float = 1.0
    extra: Mapping[str, object] = field(default_factory=dict)

    @property
    def f(self) -> Scalar:
        return self.scales["f"]

    @property
    def h(self) -> Scalar:
        return self.scales["h"]

    def u(self, t):
        """Coefficient of J xi = u A_hat when |A|_B^2 = 4, i.e. u = 1 / (2h)."""
        return 1.0 / (2.0 * self.h(t))

    def scale_of(self, block: str) -> Scalar:
        return self.scales[self.blocks[block]]

    def in_domain(self, t, eps: float = 0.0) -> bool:
        lo, hi = self.domain
        return lo + eps <= t <= hi - eps

    def homothety(self, s: float) -> "ProfileSet":
        """Profiles of the rescaled metric s^2 g (t is rescaled along with it)."""
        scales = {name: sc.homothety(s) for name, sc in self.scales.items()}
        a, da = self.a, self.da
        lo, hi = self.domain
        return replace(
            self,
            scales=scales,
            a=None if a is None else (lambda t: a(t / s)),
            da=None if da is None else (lambda t: da(t / s) / s),
            k=self.k / s,
            domain=(lo * s, hi * s),
        )


def su3_profiles(f: Scalar, h: Scalar, a, da=None, *, k: float = 1.0,
                 domain=(-np.inf, np.inf)) -> ProfileSet:
    if isinstance(a, SphereCurve) and da is None:
        da = a.derivative
    return ProfileSet({"f": f, "h": h}, {"a": "h", "n": "f"}, a=a, da=da, k=k, domain=domain)


def su2su2_profiles(f: Scalar, h1: Scalar, h2: Scalar, signs=(1, 1, 1)) -> ProfileSet:
    """Invariant data of the su2+su2 case: J xi along a_hat, J rotating each n_i.

    ``signs`` are the orientations (xi -> a, n1, n2); any choice is invariant.
    """
    s0, s1, s2 = signs
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    jn = np.zeros((4, 4))
    jn[:2, :2] = s1 * rot
    jn[2:, 2:] = s2 * rot
    return ProfileSet({"f": f, "h1": h1, "h2": h2}, {"a": "f", "n1": "h1", "n2": "h2"},
                      jn=jn, xi_sign=float(s0))
