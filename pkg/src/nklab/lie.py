"""Exact compact Lie algebras and the reductive splits used by the geometry code.

Structure constants are stored as ``Fraction`` arrays with ``c[i, j, k]`` the
coefficient of ``e_k`` in ``[e_i, e_j]``.  Everything downstream that needs
floats calls :meth:`LieAlgebra.constants` instead of converting by hand.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np

__all__ = [
    "LieAlgebra",
    "BilinearForm",
    "ReductiveSplit",
    "build_algebra",
    "abelian",
    "direct_sum",
    "killing_opposite",
    "build_split_su3",
    "build_split_su2su2",
    "algebra_to_json",
]

ALGEBRAS = ("su2", "su3", "su2+su2")


def _zeros(*shape):
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    name: str
    basis: tuple[str, ...]
    c: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def constants(self) -> np.ndarray:
        """Structure constants as a float array."""
        return self.c.astype(float)

    def bracket(self, x, y):
        """Bracket of two coefficient vectors (exact if the inputs are)."""
        x = np.asarray(x, dtype=object)
        y = np.asarray(y, dtype=object)
        out = _zeros(self.dim)
        for i, j in product(range(self.dim), repeat=2):
            if x[i] and y[j]:
                out = out + x[i] * y[j] * self.c[i, j]
        return out

    def ad(self, x) -> np.ndarray:
        """Matrix of ``ad x`` acting on coefficient columns."""
        x = np.asarray(x, dtype=object)
        out = _zeros(self.dim, self.dim)
        for i in range(self.dim):
            if x[i]:
                out = out + x[i] * self.c[i].T
        return out

    def antisymmetry_residual(self) -> Fraction:
        return max(abs(v) for v in (self.c + self.c.transpose(1, 0, 2)).flat)

    def jacobi_residual(self) -> Fraction:
        """Largest |[e_i,[e_j,e_k]] + cyclic| coefficient, exact."""
        n = self.dim
        worst = Fraction(0)
        for i, j, k in product(range(n), repeat=3):
            if not (i < j < k):
                continue
            total = _zeros(n)
            for a, b, cc in ((i, j, k), (j, k, i), (k, i, j)):
                # [e_a, [e_b, e_c]]
                inner = self.c[b, cc]
                for m in range(n):
                    if inner[m]:
                        total = total + inner[m] * self.c[a, m]
            worst = max(worst, max(abs(v) for v in total))
        return worst


@dataclass(frozen=True, eq=False)
class BilinearForm:
    matrix: np.ndarray

    def __call__(self, x, y):
        x = np.asarray(x, dtype=object)
        y = np.asarray(y, dtype=object)
        return x @ self.matrix @ y

    def as_float(self) -> np.ndarray:
        return self.matrix.astype(float)


def abelian(n: int) -> LieAlgebra:
    label = f"{n}R" if n != 1 else "R"
    return LieAlgebra(label, tuple(f"z{i + 1}" for i in range(n)), _zeros(n, n, n))


def direct_sum(*algs: LieAlgebra, name: str | None = None) -> LieAlgebra:
    n = sum(a.dim for a in algs)
    c = _zeros(n, n, n)
    basis = []
    off = 0
    for idx, alg in enumerate(algs):
        d = alg.dim
        c[off:off + d, off:off + d, off:off + d] = alg.c
        basis += [f"{b}" if len(algs) == 1 else f"{b}_{idx + 1}" for b in alg.basis]
        off += d
    return LieAlgebra(name or "+".join(a.name for a in algs), tuple(basis), c)


def _su2() -> LieAlgebra:
    c = _zeros(3, 3, 3)
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[i, j, k] = Fraction(1)
        c[j, i, k] = Fraction(-1)
    return LieAlgebra("su2", ("e1", "e2", "e3"), c)


# Complex rational 3x3 matrices as (real, imag) pairs of Fraction arrays.

def _cmat(entries):
    re = _zeros(3, 3)
    im = _zeros(3, 3)
    for (r, s), z in entries.items():
        re[r, s] = Fraction(z[0])
        im[r, s] = Fraction(z[1])
    return re, im


def _cmul(x, y):
    return x[0] @ y[0] - x[1] @ y[1], x[0] @ y[1] + x[1] @ y[0]


def _ccomm(x, y):
    p, q = _cmul(x, y), _cmul(y, x)
    return p[0] - q[0], p[1] - q[1]


def _re_trace_prod(x, y):
    # Re tr(XY) = sum_rs Re(X_rs Y_sr)
    return (x[0] * y[0].T - x[1] * y[1].T).sum()


h = Fraction(1, 2)
t = Fraction(1, 3)
# Ordered k (upper-left su2), a, n.  k_j = -(i/2) sigma_j so that [k1,k2] = k3.
_SU3_BASIS = {
    "k1": _cmat({(0, 1): (0, -h), (1, 0): (0, -h)}),
    "k2": _cmat({(0, 1): (-h, 0), (1, 0): (h, 0)}),
    "k3": _cmat({(0, 0): (0, -h), (1, 1): (0, h)}),
    "A": _cmat({(0, 0): (0, t), (1, 1): (0, t), (2, 2): (0, -2 * t)}),
    "v1": _cmat({(0, 2): (1, 0), (2, 0): (-1, 0)}),
    "v2": _cmat({(0, 2): (0, 1), (2, 0): (0, 1)}),
    "v3": _cmat({(1, 2): (1, 0), (2, 1): (-1, 0)}),
    "v4": _cmat({(1, 2): (0, 1), (2, 1): (0, 1)}),
}
del h, t


def _su3() -> LieAlgebra:
    labels = tuple(_SU3_BASIS)
    mats = [_SU3_BASIS[b] for b in labels]
    # The basis is orthogonal for -Re tr(XY), so coordinates are projections.
    norms = [-_re_trace_prod(m, m) for m in mats]
    n = len(mats)
    c = _zeros(n, n, n)
    for i, j in product(range(n), repeat=2):
        if j <= i:
            continue
        comm = _ccomm(mats[i], mats[j])
        coords = [-_re_trace_prod(comm, mats[k]) / norms[k] for k in range(n)]
        recon_re = sum((coords[k] * mats[k][0] for k in range(n)), _zeros(3, 3))
        recon_im = sum((coords[k] * mats[k][1] for k in range(n)), _zeros(3, 3))
        if (recon_re != comm[0]).any() or (recon_im != comm[1]).any():
            raise AssertionError("su3 basis does not span the commutator")
        c[i, j] = coords
        c[j, i] = [-x for x in coords]
    return LieAlgebra("su3", labels, c)


def build_algebra(name: str) -> LieAlgebra:
    """Return one of ``su2``, ``su3`` or ``su2+su2`` with exact constants."""
    if name == "su2":
        return _su2()
    if name == "su3":
        return _su3()
    if name == "su2+su2":
        return direct_sum(_su2(), _su2(), name="su2+su2")
    raise ValueError(f"unknown algebra {name!r}; expected one of {ALGEBRAS}")


def killing_opposite(alg: LieAlgebra) -> BilinearForm:
    """B(x, y) = -trace(ad x ad y), exact."""
    # trace(ad e_i ad e_j) = sum_{a,b} c[i, a, b] c[j, b, a], over nonzero constants only
    n = alg.dim
    nonzero = [(i, a, b, alg.c[i, a, b]) for i, a, b in product(range(n), repeat=3) if alg.c[i, a, b] != 0]
    m = _zeros(n, n)
    for i, a, b, v in nonzero:
        for j in range(n):
            w = alg.c[j, b, a]
            if w != 0:
                m[i, j] -= v * w
    return BilinearForm(m)


def _rebase(alg: LieAlgebra, vectors, labels, name) -> LieAlgebra:
    """Re-express ``alg`` in a B-orthogonal basis given by coefficient vectors."""
    B = killing_opposite(alg)
    vecs = [np.asarray([Fraction(v) for v in vec], dtype=object) for vec in vectors]
    n = len(vecs)
    norms = [B(v, v) for v in vecs]
    for i, j in product(range(n), repeat=2):
        if i != j and B(vecs[i], vecs[j]) != 0:
            raise ValueError("rebase vectors must be B-orthogonal")
    c = _zeros(n, n, n)
    for i, j in product(range(n), repeat=2):
        br = alg.bracket(vecs[i], vecs[j])
        c[i, j] = [B(br, vecs[k]) / norms[k] for k in range(n)]
    return LieAlgebra(name, tuple(labels), c)


@dataclass(frozen=True, eq=False)
class ReductiveSplit:
    """B-orthogonal decomposition g = k + a + n with the n-block complex structures.

    ``blocks`` lists the m-modules in basis order, e.g. ``{"a": [3], "n": [4..7]}``.
    ``J1``, ``J2``, ``J3`` act on the concatenated n indices (all n-blocks).
    """

    algebra: LieAlgebra
    k: tuple[int, ...]
    blocks: dict[str, tuple[int, ...]]
    A: np.ndarray
    J1: np.ndarray | None = None
    J2: np.ndarray | None = None
    J3: np.ndarray | None = None

    @property
    def a(self) -> tuple[int, ...]:
        return self.blocks["a"]

    @property
    def n(self) -> tuple[int, ...]:
        return tuple(i for name, idx in self.blocks.items() if name != "a" for i in idx)

    @property
    def m(self) -> tuple[int, ...]:
        return self.a + self.n

    @cached_property
    def B(self) -> BilinearForm:
        return killing_opposite(self.algebra)

    def ad_block(self, x, rows, cols) -> np.ndarray:
        return self.algebra.ad(x)[np.ix_(rows, cols)]

    def basis_vector(self, i: int) -> np.ndarray:
        v = _zeros(self.algebra.dim)
        v[i] = Fraction(1)
        return v

    def invariant_violations(self) -> list[str]:
        """Names of the split invariants that fail; empty when the split is sound."""
        alg, B = self.algebra, self.B.matrix
        bad = []
        groups = [self.k, self.a] + [idx for name, idx in self.blocks.items() if name != "a"]
        for p in range(len(groups)):
            for q in range(p + 1, len(groups)):
                if (B[np.ix_(groups[p], groups[q])] != 0).any():
                    bad.append("B-orthogonality")
        for i in self.a:
            for j in self.k:
                if any(alg.c[i, j]):
                    bad.append("[a,k] = 0")
        outside = [r for r in range(alg.dim) if r not in self.n]
        for i in self.a:
            for j in self.n:
                if any(alg.c[i, j, r] for r in outside):
                    bad.append("[a,n] in n")
        if self.J1 is None:
            return bad
        n = list(self.n)
        eye = np.eye(len(n), dtype=int)
        Js = (self.J1, self.J2, self.J3)
        for J in Js:
            if ((J @ J) != -eye).any():
                bad.append("J^2 = -1")
        for p in range(3):
            for q in range(p + 1, 3):
                if ((Js[p] @ Js[q]) != -(Js[q] @ Js[p])).any():
                    bad.append("anticommuting")
        if ((self.J1 @ self.J2 @ self.J3) != -eye).any():
            bad.append("J1 J2 J3 = -1")
        if (self.ad_block(self.A, n, n) != self.J1).any():
            bad.append("ad(A)|n = J1")
        for x in self.k:
            adx = self.ad_block(self.basis_vector(x), n, n)
            for J in Js:
                if ((adx @ J) != (J @ adx)).any():
                    bad.append("Ad_K invariance")
        return bad


def build_split_su3() -> ReductiveSplit:
    """su3 = su2 + R A + C^2 with A = (i/3) diag(1, 1, -2).

    On n = C^2 (basis v1, i v1, v3, i v3 in the column (z1, z2)) the su2 block
    acts by left multiplication, ``ad(A)`` by i, and ``J2`` is the quaternionic
    structure z -> (-conj z2, conj z1), which commutes with SU(2).
    """
    alg = build_algebra("su3")
    A = _zeros(8)
    A[3] = Fraction(1)
    n = [4, 5, 6, 7]
    J1 = alg.ad(A)[np.ix_(n, n)]
    # Columns are the images of v1..v4 under z -> (-conj z2, conj z1).
    J2 = np.array(
        [[0, 0, -1, 0],
         [0, 0, 0, 1],
         [1, 0, 0, 0],
         [0, -1, 0, 0]],
        dtype=int,
    ).astype(object) * Fraction(1)
    J3 = J1 @ J2
    return ReductiveSplit(alg, (0, 1, 2), {"a": (3,), "n": tuple(n)}, A, J1, J2, J3)


def build_split_su2su2(speeds: tuple[int, int] = (1, 2)) -> ReductiveSplit:
    """su2 + su2 with k = p e3 + q f3 in the Cartan and a its B-complement.

    The basis is ordered ``[k, a, e1, e2, f1, f2]``.  With ``|p| != |q|`` the
    modules a, n1, n2 are pairwise inequivalent under ad(k), which is what makes
    the diagonal metric ansatz the general invariant one.
    """
    p, q = (Fraction(s) for s in speeds)
    if p == 0 or q == 0:
        raise ValueError("k must project nontrivially onto both factors")
    base = build_algebra("su2+su2")
    vectors = [
        [0, 0, p, 0, 0, q],
        [0, 0, q, 0, 0, -p],
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
    ]
    alg = _rebase(base, vectors, ("k", "a", "e1", "e2", "f1", "f2"), "su2+su2")
    A = _zeros(6)
    A[1] = Fraction(1)
    return ReductiveSplit(alg, (0,), {"a": (1,), "n1": (2, 3), "n2": (4, 5)}, A)


def algebra_to_json(alg: LieAlgebra) -> str:
    """Golden-file serialisation with exact fraction strings."""
    B = killing_opposite(alg).matrix
    doc = {
        "name": alg.name,
        "dim": alg.dim,
        "basis": list(alg.basis),
        "c": [[[str(v) for v in row] for row in plane] for plane in alg.c],
        "B": [[str(v) for v in row] for row in B],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"
