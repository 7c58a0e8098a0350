"""Transitive sphere actions, candidate (g, k) pairs and admissible triples.

Only the dimension counts, sphere pairs and the ideal test are computed.  The
other exclusions are topological or representation-theoretic arguments and are
carried as verdicts with a citation string.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lie import LieAlgebra, abelian, build_algebra, direct_sum

__all__ = [
    "SpherePair",
    "GroupDescriptor",
    "TripleDescriptor",
    "ExclusionRule",
    "CandidatePair",
    "CATALOG",
    "borel_table",
    "enumerate_pairs",
    "admissible_triples",
    "triples_equivalent",
    "sphere_check",
    "classification_json",
    "REASON_CODES",
]

REASON_CODES = ("k_is_ideal", "J_invariant_fixed_set", "infinite_pi1", "lemma_3_2", "almost_complex_orbit")


@dataclass(frozen=True)
class SpherePair:
    H_label: str
    K_label: str
    sphere_dim: int
    dim_H: int
    dim_K: int
    family: str


def _sp(n):
    return n * (2 * n + 1)


def borel_table(max_sphere: int = 15) -> list[SpherePair]:
    """Connected compact linear groups transitive on spheres, up to S^max_sphere."""
    rows = []
    n = 2
    while n - 1 <= max_sphere:
        rows.append(SpherePair(f"SO{n}", f"SO{n - 1}", n - 1, n * (n - 1) // 2, (n - 1) * (n - 2) // 2, "SO"))
        n += 1
    n = 1
    while 2 * n - 1 <= max_sphere:
        rows.append(SpherePair(f"U{n}", f"U{n - 1}", 2 * n - 1, n * n, (n - 1) ** 2, "U"))
        if n >= 2:
            rows.append(SpherePair(f"SU{n}", f"SU{n - 1}", 2 * n - 1, n * n - 1, max((n - 1) ** 2 - 1, 0), "SU"))
        n += 1
    n = 1
    while 4 * n - 1 <= max_sphere:
        rows.append(SpherePair(f"Sp{n}Sp1", f"Sp{n - 1}Sp1", 4 * n - 1, _sp(n) + 3, _sp(n - 1) + 3, "SpSp1"))
        rows.append(SpherePair(f"Sp{n}U1", f"Sp{n - 1}U1", 4 * n - 1, _sp(n) + 1, _sp(n - 1) + 1, "SpU1"))
        rows.append(SpherePair(f"Sp{n}", f"Sp{n - 1}", 4 * n - 1, _sp(n), _sp(n - 1), "Sp"))
        n += 1
    for H, K, d, dh, dk in (("G2", "SU3", 6, 14, 8), ("Spin7", "G2", 7, 21, 14), ("Spin9", "Spin7", 15, 36, 21)):
        if d <= max_sphere:
            rows.append(SpherePair(H, K, d, dh, dk, H))
    return rows


@dataclass(frozen=True)
class GroupDescriptor:
    label: str
    dim: int
    algebra: str
    embedding_note: str = ""


CATALOG: dict[str, dict[str, GroupDescriptor]] = {
    "SU3": {
        "SU3": GroupDescriptor("SU3", 8, "su3", "the whole group"),
        "SU2": GroupDescriptor("SU2", 3, "su2", "upper-left block, stabiliser of e3"),
        "SU2xU1": GroupDescriptor("SU2xU1", 4, "su2+R", "S(U2 x U1); excluded, see notes"),
    },
    "SU2xSU2": {
        "SU2xSU2": GroupDescriptor("SU2xSU2", 6, "su2+su2", "the whole group"),
        "T1_diag": GroupDescriptor("T1_diag", 1, "R", "circle projecting nontrivially on both factors"),
        "SU2_diag": GroupDescriptor("SU2_diag", 3, "su2", "diagonal SU2 containing T1_diag"),
        "T1xSU2": GroupDescriptor("T1xSU2", 4, "R+su2", "maximal torus of factor 1 times factor 2"),
        "SU2xT1": GroupDescriptor("SU2xT1", 4, "su2+R", "factor 1 times maximal torus of factor 2"),
        "T2": GroupDescriptor("T2", 2, "2R", "maximal torus; excluded as singular isotropy"),
    },
    "SO4": {
        "SO4": GroupDescriptor("SO4", 6, "su2+su2", "acting on R^3 + R^4 inside G2"),
        "SO3": GroupDescriptor("SO3", 3, "su2", "stabiliser on the R^3 summand"),
        "T1": GroupDescriptor("T1", 1, "R", "principal isotropy"),
        "U2": GroupDescriptor("U2", 4, "su2+R", "complex structure on R^4"),
    },
}

# (group, H, K) -> (Borel H_hat, Borel K_hat): the effective normal isotropy pair.
_SPHERE_PAIRS = {
    ("SU3", "SU3", "SU2"): ("SU3", "SU2"),
    ("SU3", "SU2xU1", "SU2"): ("SO2", "SO1"),
    ("SU2xSU2", "SU2_diag", "T1_diag"): ("SO3", "SO2"),
    ("SU2xSU2", "T1xSU2", "T1_diag"): ("U2", "U1"),
    ("SU2xSU2", "SU2xT1", "T1_diag"): ("U2", "U1"),
    ("SU2xSU2", "T2", "T1_diag"): ("SO2", "SO1"),
    ("SO4", "SO3", "T1"): ("SO3", "SO2"),
    ("SO4", "U2", "T1"): ("U2", "U1"),
}

# Labels within a group that name the same conjugacy class (ii) and iii) of the
# equivalence operations act within a class).  Every label is its own class here:
# the two factor orderings T1xSU2 / SU2xT1 are related only by an outer automorphism.
_CONJUGACY_CLASS = {g: {label: label for label in cat} for g, cat in CATALOG.items()}


@dataclass(frozen=True)
class TripleDescriptor:
    group: str
    H1: str
    K: str
    H2: str
    admissible: bool
    model_label: str
    note: str = ""

    def as_dict(self) -> dict:
        return {"H1": self.H1, "K": self.K, "H2": self.H2, "model": self.model_label}


_TRIPLES = {
    "SU3": [
        TripleDescriptor("SU3", "SU3", "SU2", "SU3", True, "S6",
                         "both singular orbits are fixed points"),
    ],
    "SU2xSU2": [
        TripleDescriptor("SU2xSU2", "T1xSU2", "T1_diag", "SU2xT1", True, "CP3",
                         "Sp1 x Sp1 inside Sp2 acting on CP^3; a CP^2 label for this case is a misprint"),
        TripleDescriptor("SU2xSU2", "SU2_diag", "T1_diag", "SU2xT1", True, "S6"),
        TripleDescriptor("SU2xSU2", "SU2_diag", "T1_diag", "SU2_diag", True, "S3xS3"),
    ],
    "SO4": [
        TripleDescriptor("SO4", "SO3", "T1", "U2", True, "S6",
                         "quotient presentation of the su2+su2 case; not derived independently"),
    ],
}


def sphere_check(group: str, H: str, K: str, table: list[SpherePair] | None = None) -> SpherePair:
    """The Borel row realising H/K, after checking dim H - dim K = sphere dim."""
    table = table or borel_table()
    cat = _catalog(group)
    for lab in (H, K):
        if lab not in cat:
            raise KeyError(f"{lab!r} is not in the {group} catalog")
    key = (group, H, K)
    if key not in _SPHERE_PAIRS:
        raise ValueError(f"{H}/{K} is not a recorded sphere pair in {group}")
    Hh, Kh = _SPHERE_PAIRS[key]
    for row in table:
        if (row.H_label, row.K_label) == (Hh, Kh):
            if cat[H].dim - cat[K].dim != row.sphere_dim:
                raise ValueError(f"dim {H} - dim {K} != {row.sphere_dim}")
            return row
    raise ValueError(f"({Hh}, {Kh}) is not in Borel's table")


def _catalog(group: str) -> dict[str, GroupDescriptor]:
    if group not in CATALOG:
        raise ValueError(f"unsupported group {group!r}; expected one of {sorted(CATALOG)}")
    return CATALOG[group]


def admissible_triples(group: str) -> list[TripleDescriptor]:
    _catalog(group)
    return list(_TRIPLES[group])


def _canonical(t: TripleDescriptor):
    cls = _CONJUGACY_CLASS[t.group]
    for lab in (t.H1, t.K, t.H2):
        if lab not in cls:
            raise KeyError(f"{lab!r} is not in the {t.group} catalog")
    return t.group, cls[t.K], tuple(sorted((cls[t.H1], cls[t.H2])))


def triples_equivalent(t1: TripleDescriptor, t2: TripleDescriptor) -> bool:
    """Equal up to swapping H1/H2 and conjugation, per the catalog's class table."""
    if t1.group != t2.group:
        raise ValueError("triples over different groups")
    return _canonical(t1) == _canonical(t2)


# --- candidate pairs -------------------------------------------------------

@dataclass(frozen=True)
class ExclusionRule:
    pair: str
    verdict: str
    reason_code: str
    citation: str


@dataclass(frozen=True)
class CandidatePair:
    g_label: str
    k_label: str
    algebra: LieAlgebra
    k_basis: tuple
    exclusion: ExclusionRule | None

    @property
    def label(self) -> str:
        return f"({self.g_label}, {self.k_label})"

    @property
    def survives(self) -> bool:
        return self.exclusion is None


def _is_ideal(alg: LieAlgebra, k_basis) -> bool:
    """[g, k] in k, tested on structure constants."""
    if not k_basis:
        return False  # k = 0 is never an obstruction
    K = np.array([[Fraction(v) for v in vec] for vec in k_basis], dtype=object)
    rank = _rank(K)
    for i in range(alg.dim):
        e = np.zeros(alg.dim, dtype=object)
        e.fill(Fraction(0))
        e[i] = Fraction(1)
        for vec in K:
            br = alg.bracket(e, vec)
            if _rank(np.vstack([K, br[None, :]])) > rank:
                return False
    return True


def _rank(M) -> int:
    M = [list(row) for row in M]
    rank, cols = 0, len(M[0]) if M else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][c] != 0:
                f = M[r][c] / M[rank][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def _vec(dim, entries):
    v = [0] * dim
    for i, x in entries.items():
        v[i] = x
    return tuple(v)


# Verdicts that are proof arguments rather than computations.
_VERDICTS = {
    ("su2+su2+2R", "su2"): ("J_invariant_fixed_set",
                            "the K-fixed part of the orbit tangent space is odd-dimensional (3) yet J-invariant"),
    ("5R", "0"): ("infinite_pi1",
                  "g abelian: both singular orbits are 4-tori, forcing an infinite fundamental group"),
    ("su2+3R", "R"): ("lemma_3_2",
                      "singular isotropy analysis: a singular orbit is 4-dim almost complex or both are tori"),
    ("su2+2R", "0"): ("lemma_3_2", "singular isotropy analysis as for (su2+3R, R)"),
}

_IDEAL_CITATION = "[g, k] lies in k, so K acts trivially and the action is not almost effective"


def _candidates():
    su2, su3 = build_algebra("su2"), build_algebra("su3")
    out = []

    def add(g_label, k_label, alg, k_basis):
        out.append((g_label, k_label, alg, tuple(k_basis)))

    # k = 0
    add("su2+2R", "0", direct_sum(su2, abelian(2), name="su2+2R"), [])
    add("5R", "0", abelian(5), [])
    # k = R
    g = build_algebra("su2+su2")
    add("su2+su2", "R", g, [_vec(6, {2: 1, 5: 1})])
    g = direct_sum(su2, abelian(3), name="su2+3R")
    add("su2+3R", "R", g, [_vec(6, {2: 1, 3: 1})])
    add("6R", "R", abelian(6), [_vec(6, {0: 1})])
    # k = su2
    g = direct_sum(su2, su2, abelian(2), name="su2+su2+2R")
    add("su2+su2+2R", "su2", g, [_vec(8, {i: 1, i + 3: 1}) for i in range(3)])
    g = direct_sum(su2, abelian(5), name="su2+5R")
    add("su2+5R", "su2", g, [_vec(8, {i: 1}) for i in range(3)])
    add("su3", "su2", su3, [_vec(8, {i: 1}) for i in range(3)])
    return out


def enumerate_pairs() -> list[CandidatePair]:
    """Compact (g, k) with dim g - dim k = 5 and k in {0, R, su2}, with verdicts."""
    pairs = []
    for g_label, k_label, alg, k_basis in _candidates():
        assert alg.dim - len(k_basis) == 5
        label = f"({g_label}, {k_label})"
        rule = None
        if _is_ideal(alg, k_basis):
            rule = ExclusionRule(label, "excluded", "k_is_ideal", _IDEAL_CITATION)
        elif (g_label, k_label) in _VERDICTS:
            code, cite = _VERDICTS[(g_label, k_label)]
            rule = ExclusionRule(label, "excluded", code, cite)
        pairs.append(CandidatePair(g_label, k_label, alg, k_basis, rule))
    return pairs


_GROUP_KEYS = {"su3": "SU3", "su2xsu2": "SU2xSU2", "so4": "SO4"}


def classification_json(group: str) -> str:
    """Serialised classification for one group, the golden-file format."""
    key = _GROUP_KEYS.get(group.lower(), group)
    triples = admissible_triples(key)
    excluded = [
        {"pair": p.label, "reason_code": p.exclusion.reason_code, "citation": p.exclusion.citation}
        for p in enumerate_pairs() if p.exclusion is not None
    ]
    doc = {
        "schema": 1,
        "group": key,
        "triples": [t.as_dict() for t in triples],
        "excluded_pairs": excluded,
    }
    return json.dumps(doc, indent=2) + "\n"
