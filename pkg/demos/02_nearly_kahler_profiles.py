"""
The nearly Kahler profile equations
===================================

Along a normal geodesic the invariant structure is described by the scale f of
the 4-dimensional block, the scale h of the 1-dimensional block and a curve a(t)
on the unit sphere.  The closed-form family solves the equations exactly; an RK4
run of the reduced second-order equation reproduces it.
"""

# %%
import math

import numpy as np

from nklab.nk import SolutionParams, closed_form, integrate_ode, nk_residual, reparametrize

params = SolutionParams.canonical(k=1.0)
prof = closed_form(params)
lo, hi = params.domain
print(f"domain ({lo:.4f}, {hi:.4f}); its length is sqrt(12) pi = {math.sqrt(12) * math.pi:.4f}")

# %%
# Residuals of the nearly Kahler conditions across the interval.
ts = np.linspace(0.8 * lo, 0.8 * hi, 9)
for t in ts:
    r = nk_residual(prof, t)
    print(f"t = {t:+.3f}  f = {prof.f(t):.6f}  a = {np.round(prof.a(t), 6)}  max residual {r.max_abs():.1e}")

# %%
# A shifted phase is the same solution in a different parameter.
other = SolutionParams.from_phase(1.0, 0.7)
rep = reparametrize(other)
t = 0.3
print(closed_form(other).f(t), closed_form(rep.params).f(rep.to_canonical(t)))

# %%
# RK4 on f'' = ((f')^2 - 1/12) / f starting at the peak.  The quantity
# 12 (f')^2 + k^2 f^2 is conserved along exact solutions; its drift measures
# the integration error.
num = integrate_ode(1.0, 0.0, 1.0, (0.0, 3.0), 1e-3)
print("sup error against cos(t/sqrt12):", np.max(np.abs(num.f - np.cos(num.t / math.sqrt(12)))))
print("first-integral drift:", num.first_integral_drift)
print(num.to_csv().splitlines()[:3])
