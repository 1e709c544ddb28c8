"""When the incoming and outgoing projections commute, the overlap splits.

For an inner S the spaces D_+ and D_- are orthogonal and E = F = 0.  For the
reciprocal factor at i the operator A = Q_+ S* Q_- is a single rank-one map
phi_{-1} -> phi_0, and E, F are the projections onto (phi_0 +- phi_{-1})/sqrt 2.
"""

from laxphillips import LPSystem, ScatteringMatrix, check_commutation, projection_algebra

cases = {
    "inner at i": ScatteringMatrix.blaschke([1j]),
    "anti-inner at i": ScatteringMatrix.blaschke([1j], "anti_inner"),
    "anti-inner at i, 1+2i": ScatteringMatrix.blaschke([1j, 1 + 2j], "anti_inner"),
}
for name, S in cases.items():
    sys = LPSystem(S)
    comm = check_commutation(sys)
    pa = projection_algebra(sys, commutation=comm)
    print(f"{name:24s} commutator {comm.residual:.1e}  rank E = {pa.rank_e}  rank F = {pa.rank_f}")
    print(f"{'':24s} worst projection residual {max(pa.residuals.values()):.1e}")

sys = LPSystem(ScatteringMatrix.blaschke([1j], "anti_inner"))
pa = projection_algebra(sys)
print("E restricted to (phi_-1, phi_0):")
print(pa.E.real.round(12))
