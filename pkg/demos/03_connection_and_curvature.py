"""
Levi-Civita connection, nabla J and sectional curvature
=======================================================

The connection at a point of the normal geodesic comes from solving the
torsion-free and metric-compatible linear system in the adapted frame.  The
curvature is computed independently, by finite differences of the metric in
exponential coordinates.
"""

# %%
import numpy as np

from nklab.curvature import ChartMetric, sectional_spectrum, su2_benchmark
from nklab.geometry import FramePoint, gray_defect, koszul_solve, nabla_J_closed_form, lemma_oracle
from nklab.lie import build_split_su3
from nklab.nk import SolutionParams, closed_form

split = build_split_su3()
prof = closed_form(SolutionParams.canonical(1.0))
point = FramePoint(split, 0.7, prof)
table = koszul_solve(point)
print("torsion residual", table.torsion_residual(), "metric residual", table.metric_residual())

# %%
# Closed forms of nabla J against the connection table.
v = np.array([1.0, -0.5, 0.25, 2.0])
for case in ("nn", "nxi", "xin", "nJxi", "Jxin"):
    diff = np.linalg.norm(lemma_oracle(point, case, v) - nabla_J_closed_form(point, case, v))
    print(f"{case:5s} {diff:.1e}")

# %%
# On the solution (nabla_X J) X = 0 for every X.
rng = np.random.default_rng(1)
print(max(gray_defect(point, X) for X in rng.standard_normal((200, 6))))

# %%
# The engine reproduces K = 1/8 on SU(2) with its bi-invariant metric ...
bench = su2_benchmark(50)
print("SU(2):", bench["min"], bench["max"])

# %%
# ... and on the nearly Kahler solution all sectional curvatures agree.  The
# value k^2/12 comes from the length sqrt(12) pi / k of the profile interval:
# the completed space is a round sphere whose pole-to-pole distance is that length.
chart = ChartMetric(split, prof)
for t in (0.0, 2.0, -3.5):
    rep = sectional_spectrum(chart, t, n_planes=50)
    print(f"t = {t:+.1f}  K in [{min(rep.sectional_samples):.9f}, {max(rep.sectional_samples):.9f}]"
          f"  lambda = {rep.einstein_lambda:.6f}  alpha = {rep.alpha_constant_type:.6f}")
