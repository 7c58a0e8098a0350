"""
Exact structure constants and the quaternionic triple
=====================================================

Build su(3) with rational structure constants, split it as k + a + n and look
at the complex structures on the 4-dimensional block.
"""

# %%
# The algebra is stored as a tensor of Fractions, c[i, j, k] being the
# coefficient of e_k in [e_i, e_j].  The Jacobi identity is checked exactly.
from nklab.lie import build_algebra, build_split_su3, killing_opposite

su3 = build_algebra("su3")
print(su3.basis)
print("Jacobi residual:", su3.jacobi_residual())

# %%
# The Killing-opposite form is diagonal in this basis.  The generator A of the
# 1-dimensional block has B(A, A) = 4, so J xi = u A_hat has length one exactly
# when u = 1 / (2h).
B = killing_opposite(su3)
print([str(B.matrix[i, i]) for i in range(su3.dim)])

split = build_split_su3()
print("B(A, A) =", split.B(split.A, split.A))

# %%
# ad(A) restricted to n is the first complex structure; J2 comes from the
# quaternionic multiplication on C^2 and J3 = J1 J2.
import numpy as np

n = list(split.n)
print(np.array(split.ad_block(split.A, n, n), dtype=int))
J1, J2, J3 = (np.asarray(J, dtype=int) for J in (split.J1, split.J2, split.J3))
print("J1 J2 J3 = -Id:", np.array_equal(J1 @ J2 @ J3, -np.eye(4, dtype=int)))

# %%
# Any unit combination a1 J1 + a2 J2 + a3 J3 is again a complex structure, and
# all of them commute with the isotropy action of k.
rng = np.random.default_rng(0)
a = rng.standard_normal(3)
a /= np.linalg.norm(a)
J = a[0] * J1 + a[1] * J2 + a[2] * J3
print("max |J^2 + Id| =", np.max(np.abs(J @ J + np.eye(4))))
print("split invariant violations:", split.invariant_violations())
