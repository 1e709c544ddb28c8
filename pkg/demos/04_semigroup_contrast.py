"""Z_+(t) = T_+(t) Q_+ S Q_- S* is a semigroup when the projections commute.

A smooth phase exp(3i/(1 + lam^2)) is not rational and the projections do
not commute.  The semigroup defect is then visible on the kernel at -i.
"""

from laxphillips import LPSystem, ScatteringMatrix, check_commutation, make_reproducing
from laxphillips.lp_semigroup import semigroup_residual

f = make_reproducing(-1j, [1.0], 512)
for name, S in {
    "inner at i": ScatteringMatrix.blaschke([1j]),
    "smooth phase": ScatteringMatrix.phase([3.0], [1.0, 0.0, 1.0]),
}.items():
    sys = LPSystem(S)
    comm = check_commutation(sys)
    r1 = semigroup_residual(sys, f, 0.5, 0.7)
    r2 = semigroup_residual(sys, f, 1.0, 2.0)
    print(f"{name:13s} {comm.verdict:14s} commutator {comm.residual:.2e}  defect (0.5,0.7) {r1:.2e}  (1,2) {r2:.2e}")

# the defect grows with the amplitude of the phase
for amp in (1.0, 2.0, 3.0):
    sys = LPSystem(ScatteringMatrix.phase([amp], [1.0, 0.0, 1.0]))
    print(f"amplitude {amp}: defect (1,2) = {semigroup_residual(sys, f, 1.0, 2.0):.2e}")
