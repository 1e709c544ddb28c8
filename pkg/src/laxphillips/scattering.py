"""
Pointwise-unitary scattering matrices built from structured factors.

A :class:`ScatteringMatrix` represents

    S(z) = U @ B_1(z) @ ... @ B_d(z) * exp(i theta(z))

with a constant unitary U, Blaschke-Potapov factors
``B(z) = (1 - P) + b(z) P`` where ``b(z) = (z - mu)/(z - conj(mu))`` (inner)
or its reciprocal (anti-inner), and an optional real rational phase theta.
Off the real axis the same formula gives the analytic continuation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._toeplitz import convolve_symbol
from .errors import AliasingError, DomainError, PoleError, UnsupportedError
from .hardy import SamplingGrid, SpectralFunction

POLE_MERGE_TOL = 1e-12
_UNITARY_TOL = 1e-10


class Orientation(enum.Enum):
    INNER = "inner"
    ANTI_INNER = "anti_inner"

    def flipped(self):
        return Orientation.ANTI_INNER if self is Orientation.INNER else Orientation.INNER


def _as_projection(proj, k_dim):
    if isinstance(proj, str):
        if proj != "full":
            raise DomainError(f"unknown projection descriptor {proj!r}")
        return np.eye(k_dim, dtype=complex)
    p = np.array(proj, dtype=complex).reshape(k_dim, k_dim)
    if np.linalg.norm(p @ p - p) > 1e-12 or np.linalg.norm(p - p.conj().T) > 1e-12:
        raise DomainError("proj must be an orthogonal projection")
    return p


def projection_onto(vectors):
    """Orthogonal projection onto the span of the given column vectors."""
    v = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if v.shape[0] == 1 and v.shape[1] > 1:
        v = v.T
    q, _ = np.linalg.qr(v)
    return q @ q.conj().T


@dataclass(frozen=True, eq=False)
class BlaschkeFactor:
    """Elementary Blaschke-Potapov factor with zero (inner) or pole (anti-inner) at mu."""

    mu: complex
    proj: np.ndarray
    orientation: Orientation = Orientation.INNER

    def __post_init__(self):
        mu = complex(self.mu)
        if mu.imag <= 0:
            raise DomainError(f"Blaschke parameter must satisfy Im mu > 0, got {mu}")
        p = np.array(self.proj, dtype=complex)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise DomainError("proj must be a square matrix")
        p = _as_projection(p, p.shape[0])
        if np.trace(p).real < 0.5:
            raise DomainError("proj must have rank >= 1")
        p.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "proj", p)
        object.__setattr__(self, "orientation", Orientation(self.orientation))

    @property
    def k_dim(self):
        return self.proj.shape[0]

    @property
    def rank(self):
        return int(round(np.trace(self.proj).real))

    @property
    def pole(self):
        return self.mu.conjugate() if self.orientation is Orientation.INNER else self.mu

    def scalar(self, z):
        z = np.asarray(z, dtype=complex)
        mu, mub = self.mu, self.mu.conjugate()
        if self.orientation is Orientation.INNER:
            return (z - mu) / (z - mub)
        return (z - mub) / (z - mu)

    def matrix(self, z):
        b = self.scalar(z)
        eye = np.eye(self.k_dim)
        return eye + (b[..., None, None] - 1) * self.proj

    def adjoint(self):
        return BlaschkeFactor(self.mu, self.proj, self.orientation.flipped())


@dataclass(frozen=True, eq=False)
class RationalPhase:
    """Real rational phase theta = numerator/denominator (numpy.polyval order).

    The denominator must have no real roots and the phase must stay bounded
    at infinity.
    """

    numerator: np.ndarray
    denominator: np.ndarray

    def __post_init__(self):
        num = np.trim_zeros(np.atleast_1d(np.asarray(self.numerator, dtype=float)), "f")
        den = np.trim_zeros(np.atleast_1d(np.asarray(self.denominator, dtype=float)), "f")
        if den.size == 0:
            raise DomainError("phase denominator is zero")
        if num.size == 0:
            num = np.zeros(1)
        if num.size > den.size:
            raise DomainError("phase must be bounded at infinity (deg numerator <= deg denominator)")
        roots = np.roots(den) if den.size > 1 else np.array([])
        if np.any(np.abs(roots.imag) < 1e-12):
            raise DomainError("phase denominator has a real root")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @property
    def poles(self):
        return np.roots(self.denominator) if self.denominator.size > 1 else np.array([], complex)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.polyval(self.numerator, z) / np.polyval(self.denominator, z)

    def at_infinity(self):
        if self.numerator.size == self.denominator.size:
            return self.numerator[0] / self.denominator[0]
        return 0.0

    def negated(self):
        return RationalPhase(-self.numerator, self.denominator)


@dataclass(frozen=True, eq=False)
class ScatteringMatrix:
    """Structured unitary-valued function on R; see the module docstring."""

    k_dim: int
    constant_factor: np.ndarray = None
    factors: tuple = ()
    smooth_phase: RationalPhase | None = None
    _symbol_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        k = int(self.k_dim)
        if k < 1:
            raise DomainError("k_dim must be >= 1")
        u = np.eye(k, dtype=complex) if self.constant_factor is None else np.array(self.constant_factor, dtype=complex)
        u = u.reshape(k, k)
        if np.linalg.norm(u.conj().T @ u - np.eye(k)) > _UNITARY_TOL:
            raise DomainError("constant_factor must be unitary")
        u.setflags(write=False)
        facs = tuple(self.factors)
        for f in facs:
            if f.k_dim != k:
                raise DomainError("factor dimension does not match k_dim")
        object.__setattr__(self, "k_dim", k)
        object.__setattr__(self, "constant_factor", u)
        object.__setattr__(self, "factors", facs)

    # -- convenience constructors --
    @classmethod
    def constant(cls, u):
        u = np.atleast_2d(np.asarray(u, dtype=complex))
        return cls(u.shape[0], u)

    @classmethod
    def blaschke(cls, mus, orientation="inner", k_dim=1, projs=None):
        """Product of Blaschke factors with the given parameters."""
        projs = projs or ["full"] * len(mus)
        facs = [
            BlaschkeFactor(mu, _as_projection(p, k_dim), orientation)
            for mu, p in zip(mus, projs)
        ]
        return cls(k_dim, None, tuple(facs))

    @classmethod
    def phase(cls, numerator, denominator, k_dim=1):
        return cls(k_dim, None, (), RationalPhase(numerator, denominator))

    @property
    def is_rational(self):
        return self.smooth_phase is None

    @property
    def is_inner(self):
        """All factors inner and no phase: the orthogonal (Lax-Phillips) family."""
        return self.is_rational and all(f.orientation is Orientation.INNER for f in self.factors)

    @property
    def inner_degree(self):
        return sum(f.rank for f in self.factors if f.orientation is Orientation.INNER)

    def symbol(self, m_samples):
        """Fourier coefficients of S on the circle; see :func:`symbol_coefficients`."""
        if m_samples not in self._symbol_cache:
            self._symbol_cache[m_samples] = symbol_coefficients(self, m_samples)
        return self._symbol_cache[m_samples]


def _poles(S):
    poles = [f.pole for f in S.factors]
    if S.smooth_phase is not None:
        poles.extend(complex(p) for p in S.smooth_phase.poles)
    return poles


def eval_scattering(S, z):
    """S(z) as a (dim K, dim K) matrix, or stacked matrices for array ``z``.

    ``z`` may be ``math.inf``, giving the limit at infinity.  Raises
    :class:`PoleError` at a pole of any factor or of the phase.
    """
    if np.isscalar(z) and not isinstance(z, complex) and math.isinf(z):
        lim = S.constant_factor.copy()
        if S.smooth_phase is not None:
            lim = lim * np.exp(1j * S.smooth_phase.at_infinity())
        return lim
    z = np.asarray(z, dtype=complex)
    for p in _poles(S):
        hit = np.abs(z - p) < 1e-13 * max(1.0, abs(p))
        if np.any(hit):
            raise PoleError(f"S has a pole at {p}", pole=p)
    out = np.broadcast_to(S.constant_factor, z.shape + (S.k_dim, S.k_dim)).copy()
    for f in S.factors:
        out = out @ f.matrix(z)
    if S.smooth_phase is not None:
        out = out * np.exp(1j * S.smooth_phase(z))[..., None, None]
    return out


def adjoint_scattering(S):
    """The scattering matrix lam -> S(lam)^*.

    Off the axis it evaluates to ``S(conj(z))^*``, the continuation of the
    boundary adjoint.
    """
    u = S.constant_factor
    facs = []
    for f in reversed(S.factors):
        p = u @ f.proj @ u.conj().T
        p = (p + p.conj().T) / 2
        facs.append(BlaschkeFactor(f.mu, p, f.orientation.flipped()))
    phase = None if S.smooth_phase is None else S.smooth_phase.negated()
    return ScatteringMatrix(S.k_dim, u.conj().T, tuple(facs), phase)


@dataclass(frozen=True)
class PoleSet:
    """Poles of the continuation of S, split by half-plane, as (pole, rank) pairs."""

    lower: tuple
    upper: tuple


def _merge(entries):
    merged = []
    for p, r in entries:
        for i, (q, s) in enumerate(merged):
            if abs(p - q) <= POLE_MERGE_TOL:
                merged[i] = (q, s + r)
                break
        else:
            merged.append((p, r))
    return tuple(merged)


def pole_set(S):
    """Poles of the rational continuation of S.

    Inner factors contribute conj(mu) in the lower half-plane (the resonance
    candidates); anti-inner factors contribute mu in the upper half-plane.
    """
    if not S.is_rational:
        raise UnsupportedError("pole_set needs a rational scattering matrix (no smooth phase)")
    lower = [(f.pole, f.rank) for f in S.factors if f.orientation is Orientation.INNER]
    upper = [(f.pole, f.rank) for f in S.factors if f.orientation is Orientation.ANTI_INNER]
    return PoleSet(_merge(lower), _merge(upper))


@dataclass(frozen=True, eq=False)
class Symbol:
    """Fourier coefficients s_j, j = j0 .. j0 + len - 1, of a matrix function on the circle."""

    coeffs: np.ndarray  # (L, k, k)
    j0: int
    aliasing: float

    @property
    def bandwidth(self):
        return max(-self.j0, self.j0 + self.coeffs.shape[0] - 1)

    def adjoint(self):
        """Coefficients of the pointwise conjugate transpose: s*_j = (s_{-j})^H."""
        c = np.conj(np.swapaxes(self.coeffs[::-1], 1, 2))
        return Symbol(c, -(self.j0 + self.coeffs.shape[0] - 1), self.aliasing)


def symbol_coefficients(S, m_samples, tol=1e-24, trim=1e-30):
    """Fourier coefficients of the circle function w -> S(lam(w)).

    Sampled on the offset circle grid of ``m_samples`` points.  Coefficients
    whose squared norm falls below ``trim`` (relative to the dominant one) are
    dropped from both ends; if the mass in the outer half of the spectrum
    exceeds ``tol`` the grid is too coarse and :class:`AliasingError` is raised.
    """
    grid = SamplingGrid(m_samples)
    vals = eval_scattering(S, grid.nodes)  # (M, k, k)
    a = np.fft.fft(vals, axis=0) / m_samples
    freq = np.fft.fftfreq(m_samples, 1.0 / m_samples).astype(int)
    a = a * np.exp(-1j * np.pi * freq / m_samples)[:, None, None]
    order = np.argsort(freq)
    freq, a = freq[order], a[order]
    mass = np.sum(np.abs(a) ** 2, axis=(1, 2))
    outer = np.abs(freq) > m_samples // 4
    aliasing = float(np.sum(mass[outer]))
    if aliasing > tol * float(np.max(mass)):
        raise AliasingError(
            f"scattering symbol not resolved on {m_samples} circle samples "
            f"(outer-band mass {aliasing:.3e})",
            leak=aliasing,
            suggested_n=m_samples // 2,
        )
    keep = np.nonzero(mass > trim * np.max(mass))[0]
    lo, hi = keep[0], keep[-1] + 1
    dropped = float(np.sum(mass[:lo]) + np.sum(mass[hi:]))
    return Symbol(a[lo:hi].copy(), int(freq[lo]), aliasing + dropped)


def apply_scattering(S, f, grid=None, trunc_out=None, tol=1e-20):
    """Coefficients of lam -> S(lam) f(lam).

    Parameters
    ----------
    S : ScatteringMatrix
    f : SpectralFunction
    grid : SamplingGrid, optional
        Circle grid on which S is sampled; defaults to 4N points, must obey
        the anti-aliasing rule for ``f``.
    trunc_out : int, optional
        Output truncation.  Defaults to N plus the effective bandwidth of S,
        so that nothing is cut.
    tol : float or None
        Raise :class:`AliasingError` when the squared mass cut from the output
        exceeds ``tol * ||f||^2``.  ``None`` disables the check (compression
        semantics).
    """
    if f.k_dim != S.k_dim:
        raise DomainError(f"function has dim {f.k_dim}, scattering matrix has dim {S.k_dim}")
    grid = grid or SamplingGrid.for_truncation(f.trunc_n)
    grid.check(f.trunc_n)
    sym = S.symbol(grid.m_samples)
    n_out = f.trunc_n + sym.bandwidth if trunc_out is None else int(trunc_out)
    out, leak = convolve_symbol(f.coeffs, sym.coeffs, sym.j0, n_out)
    if tol is not None and leak > tol * max(f.norm_squared(), np.finfo(float).tiny):
        raise AliasingError(
            f"product S f leaks {leak:.3e} squared mass outside truncation {n_out}",
            leak=leak,
            suggested_n=n_out + sym.bandwidth,
        )
    return SpectralFunction(out, f.leak + leak)


def scattering_from_record(record, k_dim):
    """Build a ScatteringMatrix from a scenario descriptor.

    The record has optional keys ``constant`` (matrix or "identity"),
    ``factors`` (list of {type, mu: [re, im], proj: matrix or "full"}) and
    ``phase`` ({numerator: [...], denominator: [...]}).  Matrix entries are
    numbers or [re, im] pairs.
    """
    record = record or {}
    const = record.get("constant", "identity")
    u = np.eye(k_dim, dtype=complex) if const in (None, "identity") else parse_matrix(const, k_dim)
    facs = []
    for i, fr in enumerate(record.get("factors", []) or []):
        try:
            kind = Orientation(fr["type"])
            mu = parse_complex(fr["mu"])
            proj = fr.get("proj", "full")
            p = _as_projection(proj if isinstance(proj, str) else parse_matrix(proj, k_dim), k_dim)
        except (KeyError, ValueError, TypeError) as exc:
            raise DomainError(f"scattering.factors[{i}]: {exc}") from exc
        facs.append(BlaschkeFactor(mu, p, kind))
    phase = None
    ph = record.get("phase")
    if ph:
        phase = RationalPhase(ph["numerator"], ph["denominator"])
    return ScatteringMatrix(k_dim, u, tuple(facs), phase)


def parse_complex(value):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex numbers are [re, im] pairs, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def parse_matrix(rows, k_dim):
    m = np.array([[parse_complex(x) for x in row] for row in rows], dtype=complex)
    if m.shape != (k_dim, k_dim):
        raise ValueError(f"expected a {k_dim}x{k_dim} matrix, got shape {m.shape}")
    return m
