"""Invariant metrics along the normal geodesic of a cohomogeneity-one G/K.

The adapted frame at gamma(t) is ``[xi, X_hat for X in the m-basis]`` where m is
the a-block followed by the n-blocks of the split.  Killing fields of a left
action satisfy ``[X_hat, Y_hat] = -([X, Y])_hat``; the k-part of a bracket
vanishes at gamma(t) and is dropped.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .lie import ReductiveSplit
from .profiles import ProfileSet

__all__ = [
    "DegenerateFrameError",
    "FramePoint",
    "ConnectionTable",
    "koszul_solve",
    "koszul_formula",
    "nabla_J",
    "nabla_J_tensor",
    "nabla_J_closed_form",
    "lemma_oracle",
    "LEMMA_CASES",
    "d_omega",
    "gray_defect",
    "constant_type_alpha",
    "psi_tensor",
    "invariant_three_forms",
    "kahler_obstruction_report",
]

GRAM_EPS = 1e-12


class DegenerateFrameError(ValueError):
    """The frame Gram matrix is singular (t at a singular orbit)."""


@dataclass(frozen=True, eq=False)
class FramePoint:
    split: ReductiveSplit
    t: float
    profiles: ProfileSet

    @property
    def dim(self) -> int:
        return 1 + len(self.split.m)

    @cached_property
    def _scales(self):
        vals, d1 = [], []
        for name, idx in self.split.blocks.items():
            sc = self.profiles.scale_of(name)
            vals += [sc(self.t)] * len(idx)
            d1 += [sc.d1(self.t)] * len(idx)
        return np.array(vals, dtype=float), np.array(d1, dtype=float)

    @cached_property
    def B_m(self) -> np.ndarray:
        m = list(self.split.m)
        return self.split.B.as_float()[np.ix_(m, m)]

    @cached_property
    def gram(self) -> np.ndarray:
        s, _ = self._scales
        G = np.zeros((self.dim, self.dim))
        G[0, 0] = 1.0
        G[1:, 1:] = np.outer(s, s) * self.B_m
        if np.any(s <= 0) or np.min(np.linalg.eigvalsh(G)) <= GRAM_EPS * np.max(np.abs(G)):
            raise DegenerateFrameError(f"degenerate frame Gram matrix at t={self.t!r}")
        return G

    @cached_property
    def gram_dt(self) -> np.ndarray:
        s, ds = self._scales
        dG = np.zeros((self.dim, self.dim))
        dG[1:, 1:] = (np.outer(ds, s) + np.outer(s, ds)) * self.B_m
        return dG

    @cached_property
    def brackets(self) -> np.ndarray:
        """C[i, j, l]: coefficient of E_l in [E_i, E_j] at gamma(t)."""
        m = list(self.split.m)
        c = self.split.algebra.constants()
        C = np.zeros((self.dim,) * 3)
        C[1:, 1:, 1:] = -c[np.ix_(m, m, m)]
        return C

    @cached_property
    def gram_derivatives(self) -> np.ndarray:
        """dG[i, j, l] = E_i . g(E_j, E_l) at gamma(t)."""
        G, C = self.gram, self.brackets
        dG = np.einsum("ijm,ml->ijl", C, G) + np.einsum("ilm,jm->ijl", C, G)
        dG[0] = self.gram_dt
        return dG

    @property
    def n_offset(self) -> int:
        return 1 + len(self.split.a)

    @cached_property
    def _xi_data(self):
        # J xi = u A_hat with u fixed by |J xi| = 1.
        A_norm2 = self.split.B.as_float()[self.split.a[0], self.split.a[0]]
        sc = self.profiles.scale_of("a")
        s, ds = sc(self.t), sc.d1(self.t)
        u = self.profiles.xi_sign / (s * np.sqrt(A_norm2))
        du = -u * ds / s
        return u, du

    @property
    def u(self) -> float:
        return self._xi_data[0]

    @cached_property
    def _jn(self):
        p = self.profiles
        if p.jn is not None:
            jn = np.asarray(p.jn, dtype=float)
            return jn, np.zeros_like(jn)
        Js = self.J_basis
        a, da = np.asarray(p.a(self.t)), np.asarray(p.da(self.t))
        return np.tensordot(a, Js, axes=1), np.tensordot(da, Js, axes=1)

    @cached_property
    def J_basis(self) -> np.ndarray:
        s = self.split
        return np.array([s.J1, s.J2, s.J3], dtype=float)

    @cached_property
    def J(self) -> np.ndarray:
        """J in frame components: column j is J E_j."""
        u, _ = self._xi_data
        jn, _ = self._jn
        J = np.zeros((self.dim, self.dim))
        J[1, 0] = u
        J[0, 1] = -1.0 / u
        o = self.n_offset
        J[o:, o:] = jn
        return J

    @cached_property
    def J_dt(self) -> np.ndarray:
        u, du = self._xi_data
        _, djn = self._jn
        dJ = np.zeros((self.dim, self.dim))
        dJ[1, 0] = du
        dJ[0, 1] = du / u**2
        o = self.n_offset
        dJ[o:, o:] = djn
        return dJ

    def lift(self, v) -> np.ndarray:
        """Frame vector of v_hat for v in the n-block coordinates."""
        out = np.zeros(self.dim)
        out[self.n_offset:] = v
        return out

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.gram @ np.asarray(y))


@dataclass(frozen=True, eq=False)
class ConnectionTable:
    """nabla_{E_i} E_j = sum_l gamma[i, j, l] E_l at a frame point."""

    point: FramePoint
    gamma: np.ndarray

    def torsion_residual(self) -> float:
        g, C = self.gamma, self.point.brackets
        return float(np.max(np.abs(g - g.transpose(1, 0, 2) - C)))

    def metric_residual(self) -> float:
        g, G = self.gamma, self.point.gram
        lhs = self.point.gram_derivatives
        rhs = np.einsum("ijm,ml->ijl", g, G) + np.einsum("ilm,jm->ijl", g, G)
        return float(np.max(np.abs(lhs - rhs)))

    def covariant(self, X, Y) -> np.ndarray:
        """nabla_X Y for constant-coefficient frame combinations."""
        return np.einsum("i,j,ijl->l", X, Y, self.gamma)


def koszul_solve(point: FramePoint) -> ConnectionTable:
    """Solve the torsion-free + metric-compatible linear system for the frame table.

    Unknowns gamma[i, j, l]; equations are gamma_ij - gamma_ji = C_ij (i < j) and
    E_i g(E_j, E_l) = g(nabla_i E_j, E_l) + g(E_j, nabla_i E_l) (j <= l): n^3 of each.
    """
    G, C, dG = point.gram, point.brackets, point.gram_derivatives
    n = point.dim
    idx = np.arange(n**3).reshape(n, n, n)
    ti, tj = np.triu_indices(n, 1)
    torsion = np.zeros((len(ti) * n, n**3))
    r = np.arange(len(ti) * n)
    torsion[r, idx[ti, tj].ravel()] += 1.0
    torsion[r, idx[tj, ti].ravel()] -= 1.0
    mj, ml = np.triu_indices(n)
    metric = np.zeros((n, len(mj), n, n, n))
    for i in range(n):
        q = np.arange(len(mj))
        metric[i, q, i, mj, :] += G[:, ml].T
        metric[i, q, i, ml, :] += G[mj, :]
    A = np.vstack([torsion, metric.reshape(-1, n**3)])
    b = np.concatenate([C[ti, tj].ravel(), dG[:, mj, ml].ravel()])
    gamma = np.linalg.solve(A, b).reshape(n, n, n)
    return ConnectionTable(point, gamma)


def koszul_formula(point: FramePoint) -> ConnectionTable:
    """Same table from the six-term Koszul formula; an independent cross-check."""
    G, C, dG = point.gram, point.brackets, point.gram_derivatives
    # 2 g(nabla_i E_j, E_l) = E_i g_jl + E_j g_li - E_l g_ij + g([i,j],l) - g([j,l],i) + g([l,i],j)
    Cg = np.einsum("ijm,ml->ijl", C, G)
    lower = 0.5 * (
        dG
        + np.einsum("jli->ijl", dG)
        - np.einsum("lij->ijl", dG)
        + Cg
        - np.einsum("jli->ijl", Cg)
        + np.einsum("lij->ijl", Cg)
    )
    gamma = np.einsum("ijm,ml->ijl", lower, np.linalg.inv(G))
    return ConnectionTable(point, gamma)


def nabla_J_tensor(point: FramePoint, table: ConnectionTable | None = None) -> np.ndarray:
    """NJ[i] is the matrix of nabla_{E_i} J in frame components."""
    table = table or koszul_solve(point)
    J, C, gamma = point.J, point.brackets, table.gamma
    n = point.dim
    out = np.empty((n, n, n))
    for i in range(n):
        if i == 0:
            dJ = point.J_dt
        else:
            # L_{X_hat} J = 0 gives X_hat(J) = J M - M J with M[l, j] = C[i, j, l].
            M = C[i].T
            dJ = J @ M - M @ J
        Gi = gamma[i].T
        out[i] = dJ + Gi @ J - J @ Gi
    return out


def nabla_J(point: FramePoint, X, Y, tensor: np.ndarray | None = None) -> np.ndarray:
    """(nabla_X J) Y at gamma(t), from the Koszul table."""
    NJ = nabla_J_tensor(point) if tensor is None else tensor
    return np.einsum("i,ikj,j->k", np.asarray(X, float), NJ, np.asarray(Y, float))


LEMMA_CASES = ("nn", "nxi", "xin", "nJxi", "Jxin")


def nabla_J_closed_form(point: FramePoint, case: str, v) -> np.ndarray:
    """Displayed closed forms of nabla J for the su3 split, evaluated from profiles.

    ``nn``   (nabla_v J) v     = (u h^2/(2f^2) a1 + f'/f) |v|^2 J xi
    ``nxi``  (nabla_xi J) v    = sum a_i' (J_i v)
    ``xin``  (nabla_v J) xi    = -h/(4f^2) (J_1 v) - f'/f (J_t v)
    ``nJxi`` (nabla_A J) v     = (h^2/(2f^2) - 1) ([J_t, J_1] v)
    ``Jxin`` (nabla_v J) A     = h^2/(2f^2) (J_t J_1 v) - f'/(u f) v
    """
    p, t = point.profiles, point.t
    f, df = p.f(t), p.f.d1(t)
    h = p.h(t)
    u = p.u(t)
    a, da = np.asarray(p.a(t)), np.asarray(p.da(t))
    J1, J2, J3 = point.J_basis
    Jt = a[0] * J1 + a[1] * J2 + a[2] * J3
    v = np.asarray(v, dtype=float)
    if case == "nn":
        vnorm2 = f**2 * (v @ point.B_m[1:, 1:] @ v)
        out = np.zeros(point.dim)
        out[1] = (u * h**2 / (2 * f**2) * a[0] + df / f) * vnorm2 * u
        return out
    if case == "nxi":
        return point.lift(da[0] * J1 @ v + da[1] * J2 @ v + da[2] * J3 @ v)
    if case == "xin":
        return point.lift(-h / (4 * f**2) * J1 @ v - df / f * Jt @ v)
    if case == "nJxi":
        return point.lift((h**2 / (2 * f**2) - 1) * (Jt @ J1 - J1 @ Jt) @ v)
    if case == "Jxin":
        return point.lift(h**2 / (2 * f**2) * Jt @ J1 @ v - df / (u * f) * v)
    raise ValueError(f"unknown lemma case {case!r}; expected one of {LEMMA_CASES}")


def lemma_oracle(point: FramePoint, case: str, v, tensor=None) -> np.ndarray:
    """The Koszul-side quantity that ``nabla_J_closed_form(case)`` should equal."""
    xi = np.eye(point.dim)[0]
    A_hat = np.eye(point.dim)[1]
    vh = point.lift(v)
    pairs = {"nn": (vh, vh), "nxi": (xi, vh), "xin": (vh, xi), "nJxi": (A_hat, vh), "Jxin": (vh, A_hat)}
    if case not in pairs:
        raise ValueError(f"unknown lemma case {case!r}; expected one of {LEMMA_CASES}")
    X, Y = pairs[case]
    return nabla_J(point, X, Y, tensor)


def d_omega(point: FramePoint, X, Y, Z, tensor=None) -> float:
    """3 g((nabla_X J) Y, Z)."""
    return 3.0 * point.inner(nabla_J(point, X, Y, tensor), Z)


def gray_defect(point: FramePoint, X, tensor=None) -> float:
    """|(nabla_X J) X| in the metric at gamma(t)."""
    w = nabla_J(point, X, X, tensor)
    return float(np.sqrt(max(point.inner(w, w), 0.0)))


def constant_type_alpha(point: FramePoint, x, y, tensor=None) -> float:
    """|(nabla_x J) y|^2 / (|x|^2 |y|^2 - g(x,y)^2 - g(Jx,y)^2)."""
    w = nabla_J(point, x, y, tensor)
    Jx = point.J @ np.asarray(x, float)
    denom = point.inner(x, x) * point.inner(y, y) - point.inner(x, y) ** 2 - point.inner(Jx, y) ** 2
    return point.inner(w, w) / denom


def psi_tensor(point: FramePoint, tensor=None) -> np.ndarray:
    """psi[i, j, l] = 3 g((nabla_{E_i} J) E_j, E_l) over all frame triples."""
    NJ = nabla_J_tensor(point) if tensor is None else tensor
    return 3.0 * np.einsum("ikj,kl->ijl", NJ, point.gram)


def invariant_three_forms(point: FramePoint, tol: float = 1e-10) -> np.ndarray:
    """Basis of ad(k)-invariant alternating 3-forms on span(xi, m), as 3-index arrays.

    k acts on m by ad and trivially on xi.
    """
    split, n = point.split, point.dim
    m = list(split.m)
    triples = [(i, j, l) for i in range(n) for j in range(i + 1, n) for l in range(j + 1, n)]
    gens = []
    for x in split.k:
        rho = np.zeros((n, n))
        rho[1:, 1:] = split.algebra.ad(split.basis_vector(x)).astype(float)[np.ix_(m, m)]
        gens.append(rho)

    def full(coeffs):
        w = np.zeros((n, n, n))
        for c, (i, j, l) in zip(coeffs, triples):
            for p, sgn in (((i, j, l), 1), ((j, l, i), 1), ((l, i, j), 1),
                           ((j, i, l), -1), ((i, l, j), -1), ((l, j, i), -1)):
                w[p] += sgn * c
        return w

    cols = []
    for idx in range(len(triples)):
        w = full(np.eye(len(triples))[idx])
        act = [-(np.einsum("pi,pjl->ijl", r, w) + np.einsum("pj,ipl->ijl", r, w)
                 + np.einsum("pl,ijp->ijl", r, w)) for r in gens]
        cols.append(np.concatenate([a[tuple(np.array(triples).T)] for a in act]) if act else np.zeros(0))
    M = np.array(cols).T
    if M.size == 0:
        return np.array([full(e) for e in np.eye(len(triples))])
    _, s, vt = np.linalg.svd(M)
    rank = int(np.sum(s > tol * max(1.0, s.max())))
    return np.array([full(v) for v in vt[rank:]])


def kahler_obstruction_report(point: FramePoint, tensor=None) -> dict:
    """Components of 3 g(nabla J) for the su2+su2 invariant structure.

    ``xi_a_slots`` is the largest |psi(X, Y, Z)| with X in {xi, a_hat}; these are the
    components that carry every invariant 3-form, so a totally skew psi vanishing
    there vanishes identically.  ``all_triples`` is the largest entry overall.
    """
    psi = psi_tensor(point, tensor)
    forms = invariant_three_forms(point)
    support = np.zeros(psi.shape, dtype=bool)
    for w in forms:
        support |= np.abs(w) > 1e-10
    off_support = [tuple(ix) for ix in np.argwhere(support)
                   if not ({0, 1} & set(int(v) for v in ix))]
    return {
        "xi_a_slots": float(np.max(np.abs(psi[:2]))),
        "all_triples": float(np.max(np.abs(psi))),
        "skew_part": float(np.max(np.abs(psi + psi.transpose(1, 2, 0) + psi.transpose(2, 0, 1)))) / 3.0,
        "invariant_forms": int(len(forms)),
        "invariant_support_without_xi_or_a": len(off_support),
    }
