"""
Reference evolution, the characteristic semigroup and its eigenvectors.

Multiplication by exp(-i t lam) is a circle function with an essential
singularity at w = 1, so its Fourier coefficients decay only algebraically
and a sampled FFT would alias.  They are known in closed form instead:

    exp(-i t lam(w)) = exp(-|t|) * sum_n L_n^{(-1)}(2|t|) u^n

with u = 1/w for t > 0 and u = w for t < 0 (Laguerre generating function).
Each output coefficient inside the window is then an exact finite sum.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import eval_genlaguerre

from ._toeplitz import convolve_symbol
from .errors import AliasingError, DomainError
from .hardy import HardySign, SpectralFunction, hardy_project
from .rational import kernel_coefficients

log = logging.getLogger(__name__)

NEAR_AXIS_LIMIT = 0.25


def accuracy_envelope(trunc_n):
    """Largest |t| trusted at truncation N (8 at N = 512, linear in N)."""
    return 8.0 * trunc_n / 512


@lru_cache(maxsize=128)
def _laguerre_weights(tau, n_terms):
    # L_0^{(-1)} = 1, L_n^{(-1)}(x) = -(x/n) L_{n-1}^{(1)}(x)
    n = np.arange(1, n_terms)
    x = 2.0 * tau
    vals = np.empty(n_terms)
    vals[0] = 1.0
    vals[1:] = -(x / n) * eval_genlaguerre(n - 1, 1, x)
    vals *= math.exp(-tau)
    vals.setflags(write=False)
    return vals


def evolution_symbol(t, n_terms):
    """Circle coefficients of lam -> exp(-i t lam).

    Returns ``(coeffs, j0)`` covering frequencies j0 .. j0 + n_terms - 1:
    non-positive frequencies for t > 0, non-negative ones for t < 0.
    """
    t = float(t)
    if t == 0:
        return np.ones(1), 0
    theta = _laguerre_weights(abs(t), int(n_terms))
    if t > 0:
        return theta[::-1].copy(), -(n_terms - 1)
    return theta.copy(), 0


def _check_envelope(t, trunc_n, t_max):
    t_max = accuracy_envelope(trunc_n) if t_max is None else t_max
    if abs(t) > t_max:
        need = int(math.ceil(abs(t) / 8.0 * 512))
        raise AliasingError(
            f"|t| = {abs(t):g} exceeds the accuracy envelope {t_max:g} at truncation {trunc_n}",
            leak=float("nan"),
            suggested_n=need,
        )


def reference_evolve(f, t, trunc_out=None, tol=1e-8, t_max=None):
    """Coefficients of lam -> exp(-i t lam) f(lam).

    Output coefficients inside the window are exact sums.  Mass that the
    multiplier moves out of the window is recovered from unitarity,
    ``leak = ||f||^2 - ||out||^2``, and checked against ``tol * ||f||^2``.
    """
    t = float(t)
    if t == 0:
        return f if trunc_out is None else f.resized(trunc_out)
    _check_envelope(t, f.trunc_n, t_max)
    n_out = f.trunc_n if trunc_out is None else int(trunc_out)
    sym, j0 = evolution_symbol(t, f.trunc_n + n_out)
    out, _ = convolve_symbol(f.coeffs, sym, j0, n_out)
    total = f.norm_squared()
    leak = max(total - float(np.sum(np.abs(out) ** 2)), 0.0)
    if tol is not None and leak > tol * max(total, np.finfo(float).tiny):
        raise AliasingError(
            f"exp(-i t lam) f is not resolved at truncation {n_out}: "
            f"relative lost mass {leak / total:.3e}",
            leak=leak,
            suggested_n=2 * n_out,
        )
    return SpectralFunction(out, f.leak + leak)


def _plus_part(f):
    stray = f.h2_mass(HardySign.MINUS)
    if stray > 0:
        log.debug("projecting input with H^2_- mass %.3e onto H^2_+", stray)
        f = hardy_project(f, HardySign.PLUS)
    return f


def characteristic_apply(f, t):
    """T_+(t) f = Q_+ exp(-i t lam) f for t >= 0.

    On H^2_+ this is upper triangular in the basis: output index m only
    needs input indices n >= m, so the window result is exact for every t
    and no accuracy envelope applies.
    """
    t = float(t)
    if t < 0:
        raise DomainError("the characteristic semigroup is defined for t >= 0; use the adjoint")
    f = _plus_part(f)
    if t == 0:
        return f
    n = f.trunc_n
    sym, j0 = evolution_symbol(t, n)
    out, _ = convolve_symbol(f.coeffs, sym, j0, n)
    out[:n] = 0
    return SpectralFunction(out, f.leak)


def characteristic_adjoint_apply(f, t, trunc_out=None, t_max=None):
    """T_+(t)* f = exp(i t lam) f for f in H^2_+, t >= 0.

    The multiplier is analytic in the upper half-plane, so the product stays
    in H^2_+ and only moves mass towards higher indices.  The output window
    defaults to 2N for that reason; mass pushed beyond it is reported in
    ``leak`` (the operator is an isometry).
    """
    t = float(t)
    if t < 0:
        raise DomainError("the adjoint characteristic semigroup is defined for t >= 0")
    f = _plus_part(f)
    n_out = 2 * f.trunc_n if trunc_out is None else int(trunc_out)
    if t == 0:
        return f.resized(n_out)
    _check_envelope(t, f.trunc_n, t_max)
    sym, j0 = evolution_symbol(-t, n_out)
    out, _ = convolve_symbol(f.coeffs, sym, j0, n_out)
    out[:n_out] = 0
    lost = max(f.norm_squared() - float(np.sum(np.abs(out) ** 2)), 0.0)
    return SpectralFunction(out, f.leak + lost)


@dataclass(frozen=True, eq=False)
class ReproducingVector:
    """The pair (zeta, k) standing for lam -> k/(lam - zeta), Im zeta < 0."""

    zeta: complex
    k: np.ndarray

    def __post_init__(self):
        zeta = complex(self.zeta)
        if zeta.imag >= 0:
            raise DomainError(
                f"reproducing vectors need Im zeta < 0 (no eigenvalues on or above the axis), got {zeta}"
            )
        k = np.atleast_1d(np.asarray(self.k, dtype=complex))
        if not np.any(k):
            raise DomainError("k must be nonzero")
        k.setflags(write=False)
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "k", k)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.k / (z - self.zeta)[..., None]

    def norm_squared(self):
        """Exact L^2 norm squared, pi ||k||^2 / |Im zeta|."""
        return math.pi * float(np.sum(np.abs(self.k) ** 2)) / abs(self.zeta.imag)

    def eigenvalue(self, t):
        return np.exp(-1j * t * self.zeta)

    def realize(self, trunc_n):
        c, tail = kernel_coefficients(self.zeta, trunc_n)
        return SpectralFunction(c[:, None] * self.k, tail * float(np.sum(np.abs(self.k) ** 2)))


def make_reproducing(zeta, k, trunc_n, allow_near_axis=False):
    """Coefficients of f_{zeta,k}(lam) = k/(lam - zeta), an eigenvector of T_+(t).

    Points with |Im zeta| < 0.25 are refused unless ``allow_near_axis`` is
    set, because their coefficients decay too slowly for moderate N.
    """
    rv = ReproducingVector(zeta, k)
    if abs(rv.zeta.imag) < NEAR_AXIS_LIMIT:
        if not allow_near_axis:
            raise DomainError(
                f"|Im zeta| = {abs(rv.zeta.imag):g} < {NEAR_AXIS_LIMIT}; pass allow_near_axis=True "
                "and a larger truncation to use it"
            )
        warnings.warn(
            f"reproducing vector at zeta = {rv.zeta} is close to the axis; accuracy degrades",
            stacklevel=2,
        )
    return rv.realize(trunc_n)


def decay_profile(f, times):
    """||T_+(t) f|| for each t in ``times``."""
    return np.array([characteristic_apply(f, t).norm() for t in times])
