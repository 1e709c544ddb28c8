"""
Two-space scattering in the outgoing spectral representation.

With the outgoing representation as the reference, the outgoing subspace
becomes H^2_- (projection D+ = Q-) and the incoming one becomes S H^2_+
(projection D- = S Q+ S*).  The canonical identification is
J = Q- + S Q+, and everything else here is built from Q+-, S and S*.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._toeplitz import convolve_symbol, dense_block_toeplitz
from .errors import DiscretizationError, NonCommutingError
from .hardy import HardySign, SpectralFunction, hardy_project
from .rational import RationalFunction, random_probe
from .scattering import ScatteringMatrix, pole_set
from .semigroups import reference_evolve

COMMUTING_TOL = 1e-6
NON_COMMUTING_TOL = 1e-2
PROBE_SEED = 1729
PROBE_COUNT = 32


def _plus(f):
    return hardy_project(f, HardySign.PLUS)


def _minus(f):
    return hardy_project(f, HardySign.MINUS)


class LPSystem:
    """A scattering matrix together with its discretization.

    Parameters
    ----------
    S : ScatteringMatrix
    trunc_n : int
        Truncation N of the coefficient window the operators act on.
    grid_factor : int
        Circle samples per unit of N used to resolve the symbol of S.

    Operators act on SpectralFunctions; inputs are brought to window N, every
    intermediate product is kept on a widened window, and the result is
    compressed back to N.  Dense matrices are built only on request.
    """

    def __init__(self, S: ScatteringMatrix, trunc_n: int = 512, grid_factor: int = 4):
        self.S = S
        self.trunc_n = int(trunc_n)
        self.grid_factor = int(grid_factor)
        self.symbol = S.symbol(self.grid_factor * self.trunc_n)
        self.symbol_adj = self.symbol.adjoint()

    def __repr__(self):
        return f"LPSystem(k_dim={self.k_dim}, trunc_n={self.trunc_n}, factors={len(self.S.factors)})"

    @property
    def k_dim(self):
        return self.S.k_dim

    @property
    def dim(self):
        return 2 * self.trunc_n * self.k_dim

    # -- closures ------------------------------------------------------------
    def _fit(self, f):
        return f if f.trunc_n == self.trunc_n else f.resized(self.trunc_n)

    def _mul(self, f, adjoint=False):
        sym = self.symbol_adj if adjoint else self.symbol
        n_out = f.trunc_n + sym.bandwidth
        out, leak = convolve_symbol(f.coeffs, sym.coeffs, sym.j0, n_out)
        return SpectralFunction(out, f.leak + leak)

    def apply_S(self, f):
        return self._mul(self._fit(f)).resized(self.trunc_n)

    def apply_S_adj(self, f):
        return self._mul(self._fit(f), adjoint=True).resized(self.trunc_n)

    def d_plus(self, f):
        """Outgoing projection D+ = Q-."""
        return _minus(self._fit(f))

    def d_minus(self, f):
        """Incoming projection D- = S Q+ S*."""
        g = self._mul(_plus(self._mul(self._fit(f), adjoint=True)))
        return g.resized(self.trunc_n)

    def a_op(self, f):
        """A = Q+ S* Q-."""
        return _plus(self._mul(_minus(self._fit(f)), adjoint=True)).resized(self.trunc_n)

    def a_adj_op(self, f):
        """A* = Q- S Q+."""
        return _minus(self._mul(_plus(self._fit(f)))).resized(self.trunc_n)

    def resonance_op(self, f):
        """R = Q+ S Q- S*."""
        g = _plus(self._mul(_minus(self._mul(self._fit(f), adjoint=True))))
        return g.resized(self.trunc_n)

    # -- dense matrices ------------------------------------------------------
    @cached_property
    def s_matrix(self):
        """Compression of multiplication by S to the window (index-major layout)."""
        m = dense_block_toeplitz(self.symbol.coeffs, self.symbol.j0, self.trunc_n)
        m.setflags(write=False)
        return m

    @cached_property
    def plus_mask(self):
        idx = np.repeat(np.arange(-self.trunc_n, self.trunc_n), self.k_dim)
        mask = idx >= 0
        mask.setflags(write=False)
        return mask

    def a_matrix(self):
        """Dense A = Q+ S* Q- (its entries are exact symbol coefficients)."""
        plus = self.plus_mask
        a = np.zeros((self.dim, self.dim), dtype=complex)
        sa = self.s_matrix.conj().T
        a[np.ix_(plus, ~plus)] = sa[np.ix_(plus, ~plus)]
        return a

    def resonance_matrix(self):
        """Dense R = Q+ S Q- S*, using the window compression of S."""
        plus = self.plus_mask
        s = self.s_matrix
        left = s[np.ix_(plus, ~plus)]
        right = s.conj().T[~plus, :]
        r = np.zeros((self.dim, self.dim), dtype=complex)
        r[plus, :] = left @ right
        return r

    def vector(self, f):
        return self._fit(f).coeffs.reshape(-1)

    def function(self, vec):
        return SpectralFunction(np.asarray(vec).reshape(2 * self.trunc_n, self.k_dim))

    # -- probes --------------------------------------------------------------
    def witnesses(self):
        """Closed-form test functions tied to S: kernels at the poles of S and at -+i."""
        k = np.eye(self.k_dim, dtype=complex)
        points = [-1j, 1j]
        if self.S.is_rational:
            ps = pole_set(self.S)
            points += [p for p, _ in ps.lower] + [p for p, _ in ps.upper]
        out = []
        for p in points:
            for col in k:
                out.append(RationalFunction([p], [col]).coefficients(self.trunc_n))
        return out

    def probes(self, count=PROBE_COUNT, seed=PROBE_SEED, side="both", with_witnesses=True):
        """Seeded random rational probes (unit norm), optionally followed by witnesses."""
        rng = np.random.default_rng(seed)
        out = [random_probe(rng, self.k_dim, side).coefficients(self.trunc_n) for _ in range(count)]
        if with_witnesses:
            out += self.witnesses()
        return out


def identification_apply(sys, f):
    """J f = Q- f + S Q+ f."""
    return sys.d_plus(f) + sys.apply_S(_plus(sys._fit(f)))


def identification_adjoint_apply(sys, f):
    """J* f = Q- f + Q+ S* f."""
    return sys.d_plus(f) + _plus(sys.apply_S_adj(f))


def gram_defect(sys, f):
    """(J* J - 1) f = Q+ S* Q- f + Q- S Q+ f."""
    return sys.a_op(f) + sys.a_adj_op(f)


def _max_relative(op, probes):
    worst = 0.0
    for f in probes:
        n = f.norm()
        if n > 0:
            worst = max(worst, op(f).norm() / n)
    return worst


def identification_product_residual(sys, probes):
    """max ||J J* f - (Q- + S Q+ S*) f|| / ||f|| over the probes."""

    def op(f):
        return identification_apply(sys, identification_adjoint_apply(sys, f)) - (sys.d_plus(f) + sys.d_minus(f))

    return _max_relative(op, probes)


@dataclass(frozen=True)
class CommutationResult:
    residual: float
    verdict: str  # "commuting", "non_commuting" or "inconclusive"
    worst_probe: int
    residuals: tuple = field(repr=False, default=())

    @property
    def commuting(self):
        return self.verdict == "commuting"


def classify(residual, small=COMMUTING_TOL, large=NON_COMMUTING_TOL):
    if residual <= small:
        return "commuting"
    if residual >= large:
        return "non_commuting"
    return "inconclusive"


def commutator_residual(sys, f):
    """||(D+ D- - D- D+) f|| / ||f||."""
    g = sys.d_plus(sys.d_minus(f)) - sys.d_minus(sys.d_plus(f))
    return g.norm() / f.norm()


def check_commutation(sys, probes=None, small=COMMUTING_TOL, large=NON_COMMUTING_TOL):
    """Test D+ D- = D- D+ on probes and classify the system.

    Residuals between ``small`` and ``large`` give the verdict
    "inconclusive": the truncation is too coarse to decide.
    """
    probes = sys.probes() if probes is None else list(probes)
    res = [commutator_residual(sys, f) for f in probes]
    i = int(np.argmax(res))
    return CommutationResult(float(res[i]), classify(res[i], small, large), i, tuple(res))


@dataclass(frozen=True)
class IsometryReport:
    gram_defect: float
    projection_product: float
    off_diagonal: float
    isometric: bool


def check_isometry_equivalences(sys, probes=None, small=COMMUTING_TOL, large=NON_COMMUTING_TOL):
    """Three equivalent conditions for J to be isometric, measured on probes.

    (i) ||(J*J - 1) f||, (ii) ||D+ D- f||, (iii) ||Q- S Q+ f||, each relative.
    They must be jointly small or jointly large; a mixed outcome raises
    :class:`DiscretizationError` carrying all three.
    """
    probes = sys.probes() if probes is None else list(probes)
    r1 = _max_relative(lambda f: gram_defect(sys, f), probes)
    r2 = _max_relative(lambda f: sys.d_plus(sys.d_minus(f)), probes)
    r3 = _max_relative(sys.a_adj_op, probes)
    verdicts = {classify(r, small, large) for r in (r1, r2, r3)}
    if verdicts == {"commuting"}:
        return IsometryReport(r1, r2, r3, True)
    if verdicts == {"non_commuting"}:
        return IsometryReport(r1, r2, r3, False)
    raise DiscretizationError(
        f"isometry conditions disagree: gram defect {r1:.3e}, D+D- {r2:.3e}, Q-SQ+ {r3:.3e}",
        residuals={"gram_defect": r1, "projection_product": r2, "off_diagonal": r3},
    )


@dataclass(frozen=True, eq=False)
class ProjectionAlgebra:
    """A, V = A + A*, P = V^2, E = (P + V)/2, F = (P - V)/2 with diagnostics.

    V vanishes outside the rows and columns listed in ``support``, and so do
    P, E and F; the matrices are stored restricted to that index set.  Use
    :meth:`full` for the matrix on the whole window.
    """

    support: np.ndarray
    A: np.ndarray
    V: np.ndarray
    P: np.ndarray
    E: np.ndarray
    F: np.ndarray
    rank_e: int
    rank_f: int
    spectrum: np.ndarray
    residuals: dict
    dim: int

    @property
    def dichotomy_holds(self):
        return (self.rank_e == 0) == (self.rank_f == 0)

    def full(self, name):
        out = np.zeros((self.dim, self.dim), dtype=complex)
        out[np.ix_(self.support, self.support)] = getattr(self, name)
        return out


def _fro(m):
    return float(np.linalg.norm(m)) if m.size else 0.0


def projection_algebra(sys, require_commuting=True, commutation=None, tol=COMMUTING_TOL):
    """Dense projection algebra of a commuting system.

    Residual keys: ``e_idempotent``, ``f_idempotent``, ``e_selfadjoint``,
    ``f_selfadjoint``, ``ef_product``, ``v_difference`` (V - (E - F)),
    ``p_sum`` (P - (E + F)), ``aaa`` (A A* A - A), ``b_idempotent``
    (B^2 - B for B = Q+ S* Q- S), ``x_projection`` (X^2 - X for X = A A*),
    ``spectrum`` (max distance of the spectrum of V to {-1, 0, 1}) and ``oracle_e`` /
    ``oracle_f`` (difference to the projections read off an
    eigendecomposition of V).  All are Frobenius norms.
    """
    if require_commuting:
        commutation = commutation or check_commutation(sys)
        if not commutation.commuting:
            raise NonCommutingError(
                f"projection algebra needs commuting projections (verdict {commutation.verdict}, "
                f"residual {commutation.residual:.3e})",
                residuals={"commutation": commutation.residual},
            )
    a_full = sys.a_matrix()
    supp = np.nonzero(np.any(a_full != 0, axis=0) | np.any(a_full != 0, axis=1))[0]
    a = a_full[np.ix_(supp, supp)]
    v = a + a.conj().T
    p = v @ v
    e = (p + v) / 2
    f = (p - v) / 2
    # B = A S has nonzero rows only on the support of A
    b_rows = a_full[supp] @ sys.s_matrix
    b_sq = b_rows[:, supp] @ b_rows
    x = a @ a.conj().T
    evals, evecs = np.linalg.eigh(v)
    dist = np.min(np.abs(evals[:, None] - np.array([-1.0, 0.0, 1.0])), axis=1)
    up = evals > 0.5
    down = evals < -0.5
    e_oracle = evecs[:, up] @ evecs[:, up].conj().T
    f_oracle = evecs[:, down] @ evecs[:, down].conj().T
    residuals = {
        "e_idempotent": _fro(e @ e - e),
        "f_idempotent": _fro(f @ f - f),
        "e_selfadjoint": _fro(e - e.conj().T),
        "f_selfadjoint": _fro(f - f.conj().T),
        "ef_product": _fro(e @ f),
        "v_difference": _fro(v - (e - f)),
        "p_sum": _fro(p - (e + f)),
        "aaa": _fro(a @ a.conj().T @ a - a),
        "b_idempotent": _fro(b_sq - b_rows),
        "x_projection": _fro(x @ x - x),
        "spectrum": float(dist.max()) if dist.size else 0.0,
        "oracle_e": _fro(e - e_oracle),
        "oracle_f": _fro(f - f_oracle),
    }
    bad = {k: r for k, r in residuals.items() if r > tol}
    if require_commuting and bad:
        raise DiscretizationError(
            "projection algebra residuals above tolerance: "
            + ", ".join(f"{k}={r:.3e}" for k, r in bad.items()),
            residuals=residuals,
        )
    return ProjectionAlgebra(
        supp, a, v, p, e, f, int(up.sum()), int(down.sum()), evals, residuals, sys.dim
    )


def asymptotic_equivalence_profile(sys, f, times):
    """||(J*J - 1) exp(-i t lam) f|| for each t (both signs allowed)."""
    out = []
    for t in times:
        g = reference_evolve(sys._fit(f), t, tol=None)
        out.append(gram_defect(sys, g).norm())
    return np.array(out)
