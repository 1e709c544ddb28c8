"""
The generalized Lax-Phillips semigroup and its resonances.

In the outgoing representation

    Z_+(t) = Q_+ exp(-i t lam) Q_+ . S Q_- S* = T_+(t) R,   R = Q_+ S Q_- S*,

which is a semigroup exactly when the outgoing and incoming projections
commute.  A reproducing vector f_{zeta,k} is an eigenvector of Z_+(t) when it
survives the restriction to range(R), i.e. when S* f_{zeta,k} lies in H^2_-.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NonCommutingError, PoleError, UnsupportedError
from .hardy import HardySign, hardy_project, line_integral
from .lp_system import COMMUTING_TOL, NON_COMMUTING_TOL, classify
from .scattering import adjoint_scattering, eval_scattering, pole_set
from .semigroups import ReproducingVector, characteristic_apply, make_reproducing

SURVIVAL_TOL = 1e-4
SEPARATION = 10.0
DECOY_POINTS = (-0.5j, -2j, 2 - 1j, -2 - 1j, 0.5 - 3j, -1.5 - 0.5j, 2.5 - 2.5j)
DECOY_CLEARANCE = 0.4
EIGEN_TIMES = (0.5, 1.0, 2.0, 4.0)
PALEY_WIENER_HEIGHTS = (0.1, 1.0, 10.0)


def lp_semigroup_apply(sys, f, t):
    """Z_+(t) f = T_+(t) R f for t >= 0."""
    if t < 0:
        raise DomainError("the Lax-Phillips semigroup is defined for t >= 0")
    return characteristic_apply(sys.resonance_op(f), t)


def semigroup_residual(sys, f, t1, t2):
    """||Z(t1) Z(t2) f - Z(t1 + t2) f|| / ||f||."""
    lhs = lp_semigroup_apply(sys, lp_semigroup_apply(sys, f, t2), t1)
    rhs = lp_semigroup_apply(sys, f, t1 + t2)
    return (lhs - rhs).norm() / f.norm()


@dataclass(frozen=True)
class SemigroupCheck:
    residual: float
    verdict: str  # "semigroup", "violated" or "inconclusive"
    worst_probe: int


def verify_semigroup_property(sys, probes=None, t1=0.5, t2=0.7):
    """Worst relative defect of Z(t1) Z(t2) = Z(t1 + t2) over H^2_+ probes."""
    if probes is None:
        probes = sys.probes(side="plus")
    probes = [hardy_project(p, HardySign.PLUS) for p in probes]
    probes = [p for p in probes if p.norm() > 0]
    res = [semigroup_residual(sys, f, t1, t2) for f in probes]
    i = int(np.argmax(res))
    verdict = {"commuting": "semigroup", "non_commuting": "violated"}.get(
        classify(res[i], COMMUTING_TOL, NON_COMMUTING_TOL), "inconclusive"
    )
    return SemigroupCheck(float(res[i]), verdict, i)


@dataclass(frozen=True, eq=False)
class ResonanceSubspace:
    """range(R) for R = Q_+ S Q_- S*.

    ``rows`` lists the window indices where R has nonzero rows; ``matrix``
    holds those rows (R restricted to them is self-adjoint when R is an
    orthogonal projection).  ``basis`` has one orthonormal full-window vector
    per row.
    """

    rows: np.ndarray
    matrix: np.ndarray
    rank: int
    basis: np.ndarray
    residuals: dict = field(default_factory=dict)


def resonance_projector(sys, tol=COMMUTING_TOL):
    """Densify R, check it is an orthogonal projection and extract its range.

    Raises :class:`NonCommutingError` when R is not idempotent and
    self-adjoint within ``tol`` (the projections do not commute).
    """
    plus = sys.plus_mask
    s = sys.s_matrix
    left = s[np.ix_(plus, ~plus)]
    cols = np.nonzero(np.any(left != 0, axis=0))[0]
    rows_local = np.nonzero(np.any(left != 0, axis=1))[0]
    plus_idx = np.nonzero(plus)[0]
    minus_idx = np.nonzero(~plus)[0]
    rows = plus_idx[rows_local]
    r_rows = left[np.ix_(rows_local, cols)] @ s.conj().T[minus_idx[cols], :]
    square = r_rows[:, rows]
    outside = np.delete(r_rows, rows, axis=1)
    residuals = {
        "idempotent": float(np.linalg.norm(square @ r_rows - r_rows)),
        "selfadjoint": float(np.linalg.norm(square - square.conj().T)) + float(np.linalg.norm(outside)),
    }
    if residuals["idempotent"] > tol or residuals["selfadjoint"] > tol:
        raise NonCommutingError(
            f"R is not an orthogonal projection (idempotent {residuals['idempotent']:.3e}, "
            f"self-adjoint {residuals['selfadjoint']:.3e})",
            residuals=residuals,
        )
    evals, evecs = np.linalg.eigh((square + square.conj().T) / 2) if rows.size else (np.zeros(0), np.zeros((0, 0)))
    keep = evals > 0.5
    basis = np.zeros((int(keep.sum()), sys.dim), dtype=complex)
    if keep.any():
        basis[:, rows] = evecs[:, keep].T
    orth = 0.0
    for b in basis:
        g = hardy_project(sys.apply_S_adj(sys.function(b)), HardySign.PLUS)
        orth = max(orth, g.norm())
    residuals["orthogonal_to_S_H2plus"] = orth
    residuals["spectrum"] = float(np.max(np.minimum(np.abs(evals), np.abs(evals - 1)))) if evals.size else 0.0
    return ResonanceSubspace(rows, r_rows, int(keep.sum()), basis, residuals)


# -- survival of characteristic eigenvectors ---------------------------------


def _continuation(sys, zeta, k):
    """z -> S(conj z)^* k / (z - zeta): the continuation of S* f_{zeta,k} off the axis."""
    adj = adjoint_scattering(sys.S)

    def h(z):
        z = np.asarray(z, dtype=complex)
        return (eval_scattering(adj, z) @ k) / (z - zeta)[..., None]

    return h


def _lower_poles(sys):
    """Poles of the continuation of lam -> S(lam)^* into the lower half-plane."""
    if not sys.S.is_rational:
        raise UnsupportedError("continuation is only available for rational S")
    # inner factors of S* are the anti-inner factors of S, with poles conj(mu)
    return [p for p, _ in pole_set(adjoint_scattering(sys.S)).lower]


def bound_grid(zeta, exclude=(), radius=0.05):
    """Sample points z in C_- for the pointwise bounds.

    |Im z| on a logarithmic grid in [0.05, 10], Re z within 10 of Re zeta;
    disks of ``radius`` around zeta and the excluded points are removed.
    """
    x = zeta.real + np.linspace(-10, 10, 41)
    y = np.geomspace(0.05, 10, 25)
    z = (x[:, None] - 1j * y[None, :]).ravel()
    keep = np.abs(z - zeta) > radius
    for p in exclude:
        keep &= np.abs(z - p) > radius
    return z[keep]


@dataclass(frozen=True)
class BoundChecks:
    points: int
    sup_bound_violations: int  # ||h(z)|| <= ||k|| / |Im zeta|
    distance_bound_violations: int  # ||h(z)|| <= ||k|| / |z - zeta|
    max_sup_ratio: float
    max_distance_ratio: float


def check_pointwise_bounds(sys, zeta, k, slack=1e-10):
    """Evaluate both pointwise bounds on the continuation over :func:`bound_grid`."""
    poles = _lower_poles(sys)
    z = bound_grid(zeta, poles)
    vals = np.linalg.norm(_continuation(sys, zeta, k)(z), axis=-1)
    kn = float(np.linalg.norm(k))
    sup_ratio = vals * abs(zeta.imag) / kn
    dist_ratio = vals * np.abs(z - zeta) / kn
    return BoundChecks(
        int(z.size),
        int(np.sum(sup_ratio > 1 + slack)),
        int(np.sum(dist_ratio > 1 + slack)),
        float(sup_ratio.max()),
        float(dist_ratio.max()),
    )


@dataclass(frozen=True)
class SurvivalVerdict:
    zeta: complex
    k: np.ndarray
    residual: float
    survives: bool
    bound_checks: BoundChecks | None


def survival_residual(sys, zeta, k):
    """||Q_+ S* f_{zeta,k}|| / ||f_{zeta,k}||, computed without compressing S* f."""
    f = make_reproducing(zeta, k, sys.trunc_n)
    g = hardy_project(sys._mul(f, adjoint=True), HardySign.PLUS)
    return g.norm() / f.norm()


def survival_test(sys, zeta, k, tol=SURVIVAL_TOL):
    """Does f_{zeta,k} survive as an eigenvector of Z_+(t)?

    Raises :class:`PoleError` when zeta is a pole of the continuation of S*.
    Pointwise bounds are evaluated when S is rational.
    """
    rv = ReproducingVector(zeta, k)
    bounds = None
    if sys.S.is_rational:
        for p in _lower_poles(sys):
            if abs(p - rv.zeta) < 1e-12:
                raise PoleError(f"zeta = {rv.zeta} is a pole of the continuation of S*", pole=p)
        bounds = check_pointwise_bounds(sys, rv.zeta, rv.k)
    res = survival_residual(sys, rv.zeta, rv.k)
    return SurvivalVerdict(rv.zeta, np.array(rv.k), res, res <= tol, bounds)


def survival_map(sys, zeta):
    """Singular values and right singular vectors of k -> Q_+ S* f_{zeta,k} / ||f_{zeta,k}||.

    Small singular values belong to surviving directions k.
    """
    cols = []
    for k in np.eye(sys.k_dim, dtype=complex):
        f = make_reproducing(zeta, k, sys.trunc_n)
        g = hardy_project(sys._mul(f, adjoint=True), HardySign.PLUS)
        cols.append(g.coeffs.reshape(-1) / f.norm())
    m = np.stack(cols, axis=1)
    _, sv, vh = np.linalg.svd(m, full_matrices=False)
    return sv, vh.conj().T


@dataclass(frozen=True)
class ResonanceRow:
    zeta: complex
    multiplicity: int
    survivors: int
    survival_residual: float  # worst over surviving directions
    direction_mismatch: float  # distance between survivor space and ker S^*(zeta)
    eigen_residual: float  # worst ||Z(t) f - exp(-i t zeta) f|| / ||f||


@dataclass(frozen=True)
class PoleCorrespondence:
    rows: tuple
    resonance_rank: int
    total_degree: int
    decoys: tuple  # (zeta, min survival residual)
    consistent: bool


def _projector(vectors):
    if vectors.shape[1] == 0:
        return np.zeros((vectors.shape[0], vectors.shape[0]), dtype=complex)
    q, _ = np.linalg.qr(vectors)
    return q @ q.conj().T


def pole_correspondence(sys, tol=SURVIVAL_TOL, eigen_tol=1e-5, decoys=DECOY_POINTS):
    """Match the lower half-plane poles of S with surviving eigenvectors.

    For each pole (zeta, r): the surviving directions of k -> Q_+ S* f_{zeta,k}
    must span an r-dimensional space equal to the kernel of S^*(zeta), each
    surviving f_{zeta,k} must satisfy Z_+(t) f = exp(-i t zeta) f, and the
    multiplicities must add up to rank R.  Decoy points away from the poles
    must not survive (residual at least SEPARATION * tol).
    """
    if not sys.S.is_inner:
        raise UnsupportedError("pole correspondence needs an inner scattering matrix")
    ps = pole_set(sys.S)
    adj = adjoint_scattering(sys.S)
    rows = []
    for zeta, mult in ps.lower:
        sv, right = survival_map(sys, zeta)
        surv = right[:, sv <= tol]
        kernel_sv, kernel_vecs = np.linalg.svd(eval_scattering(adj, zeta))[1:]
        kernel = kernel_vecs.conj().T[:, kernel_sv <= 1e-8]
        mismatch = float(np.linalg.norm(_projector(surv) - _projector(kernel)))
        worst_eig = 0.0
        for k in surv.T:
            f = make_reproducing(zeta, k, sys.trunc_n)
            for t in EIGEN_TIMES:
                g = lp_semigroup_apply(sys, f, t)
                worst_eig = max(worst_eig, (g - f * np.exp(-1j * t * zeta)).norm() / f.norm())
        worst_surv = float(sv[sv <= tol].max()) if surv.shape[1] else math.inf
        rows.append(ResonanceRow(zeta, mult, surv.shape[1], worst_surv, mismatch, worst_eig))
    rank = resonance_projector(sys).rank
    poles = [p for p, _ in ps.lower]
    decoy_rows = []
    for z in decoys:
        if min((abs(z - p) for p in poles), default=math.inf) < DECOY_CLEARANCE:
            continue
        sv, _ = survival_map(sys, z)
        decoy_rows.append((z, float(sv.min())))
    degree = sys.S.inner_degree
    consistent = (
        all(r.survivors == r.multiplicity and r.direction_mismatch <= 1e-6 and r.eigen_residual <= eigen_tol for r in rows)
        and rank == degree
        and sum(r.multiplicity for r in rows) == rank
        and all(res >= SEPARATION * tol for _, res in decoy_rows)
    )
    return PoleCorrespondence(tuple(rows), rank, degree, tuple(decoy_rows), consistent)


# -- sufficiency of holomorphic continuation ---------------------------------


def principal_part(h, pole, radius, order=3, n_nodes=128):
    """Laurent coefficients a_{-1}, ..., a_{-order} of h at ``pole`` by contour integrals."""
    theta = 2 * np.pi * np.arange(n_nodes) / n_nodes
    u = radius * np.exp(1j * theta)
    vals = h(pole + u)
    # a_{-m} = (1/2 pi i) \oint h(z) (z - p)^{m-1} dz, dz = i u dtheta
    return np.array([np.mean(vals * (u ** m)[:, None], axis=0) for m in range(1, order + 1)])


@dataclass(frozen=True)
class ContinuationReport:
    zeta: complex
    hypothesis_holds: bool
    uncancelled_poles: tuple
    epsilon: float
    line_integrals: tuple  # (y, integral, bound)
    integrals_bounded: bool | None
    survival: SurvivalVerdict
    consistent: bool | None


def continuation_sufficiency_check(sys, zeta, k):
    """Holomorphic continuation of S* f_{zeta,k} into C_- versus survival.

    The hypothesis is checked pole by pole: every candidate pole in C_- (zeta
    itself and the lower poles of S*) must have a vanishing principal part.
    When it holds, int ||h(x - i y)||^2 dx is evaluated for y in {0.1, 1, 10}
    and compared with the bound obtained from the two pointwise bounds using a
    square of half-width eps = |Im zeta|/2 around zeta, and survival must
    follow.  When it fails, nothing is asserted (the converse is not claimed);
    the survival verdict is reported on its own.
    """
    rv = ReproducingVector(zeta, k)
    zeta, k = rv.zeta, np.array(rv.k)
    h = _continuation(sys, zeta, k)
    candidates = [zeta] + _lower_poles(sys)
    uncancelled = []
    for p in candidates:
        others = [abs(p - q) for q in candidates if abs(p - q) > 1e-12]
        radius = min([0.05] + [d / 3 for d in others])
        coeffs = principal_part(h, p, radius)
        scale = float(np.max(np.linalg.norm(h(p + radius * np.exp(1j * np.linspace(0, 2 * np.pi, 16))), axis=-1)))
        sizes = np.linalg.norm(coeffs, axis=-1) / radius ** np.arange(1, coeffs.shape[0] + 1)
        if sizes.max() > 1e-8 * scale:
            uncancelled.append(p)
    hypothesis = not uncancelled
    survival = survival_test(sys, zeta, k)
    eps = abs(zeta.imag) / 2
    k2 = float(np.sum(np.abs(k) ** 2))
    integrals = []
    bounded = None
    if hypothesis:
        bounded = True
        for y in PALEY_WIENER_HEIGHTS:

            def integrand(x, y=y):
                return np.sum(np.abs(h(x - 1j * y)) ** 2, axis=-1)

            value, _ = line_integral(integrand, half_width=1e4, tol=1e-9)
            val = float(value[0].real)
            meets = abs(-y - zeta.imag) <= eps
            bound = k2 * (2 / eps + 2 * eps / zeta.imag**2) if meets else k2 * math.pi / eps
            integrals.append((y, val, bound))
            bounded &= val <= bound * (1 + 1e-9)
    consistent = (survival.survives and bounded) if hypothesis else None
    return ContinuationReport(zeta, hypothesis, tuple(uncancelled), eps, tuple(integrals), bounded, survival, consistent)
