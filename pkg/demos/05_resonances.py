"""Resonances: which eigenvectors of T_+ survive compression by S.

f = k/(lam - zeta) survives when Q_+ S* f = 0, which happens exactly at the
mirror images of the zeros of an inner S (the poles of S below the axis)
and along the kernel of S*(zeta).
"""

import numpy as np

from laxphillips import LPSystem, ScatteringMatrix, continuation_sufficiency_check, pole_correspondence
from laxphillips.lp_semigroup import survival_residual

sys = LPSystem(ScatteringMatrix.blaschke([1j, 1 + 1j, -1 + 2j]))
pc = pole_correspondence(sys)
print(f"rank R = {pc.resonance_rank}, Blaschke degree = {pc.total_degree}")
for row in pc.rows:
    print(f"  zeta = {row.zeta:.3f}: survival {row.survival_residual:.1e}, eigen residual {row.eigen_residual:.1e}")
print("decoys (smallest survival residual):")
for z, v in pc.decoys:
    print(f"  {z}: {v:.3f}")

single = LPSystem(ScatteringMatrix.blaschke([1j]))
print("survival residual at -2i for the single factor:", survival_residual(single, -2j, [1.0]), "(exactly 1/3)")
rep = continuation_sufficiency_check(single, -1j, [1.0])
print("continuation at -i: hypothesis", rep.hypothesis_holds, "integrals", [(y, round(v, 3), round(b, 3)) for y, v, b in rep.line_integrals])
