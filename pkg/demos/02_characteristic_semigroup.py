"""The characteristic semigroup T_+(t) = Q_+ exp(-i t lam) on H^2_+.

Kernels k/(lam - zeta) with Im zeta < 0 are eigenvectors with eigenvalue
exp(-i t zeta), and every vector decays.  The adjoint is multiplication by
exp(i t lam) and is an isometry.
"""

import numpy as np

from laxphillips import characteristic_adjoint_apply, characteristic_apply, decay_profile, make_reproducing
from laxphillips.rational import random_probe

N = 512
for zeta in (-1j, -2j, 1 - 1j, -1 - 0.5j):
    f = make_reproducing(zeta, [1.0], N)
    worst = max(
        (characteristic_apply(f, t) - np.exp(-1j * t * zeta) * f).norm() / f.norm() for t in (0.5, 1, 2, 4)
    )
    print(f"zeta = {zeta}: eigen residual {worst:.1e}")

rng = np.random.default_rng(7)
f = random_probe(rng, side="plus").coefficients(N)
print("decay ladder ||T(t) f|| at t = 0, 1, 2, 4, 8:")
print(np.array2string(decay_profile(f, [0, 1, 2, 4, 8]), precision=6))
print("adjoint isometry defect at t = 4:", abs(characteristic_adjoint_apply(f, 4.0).norm() - f.norm()))
