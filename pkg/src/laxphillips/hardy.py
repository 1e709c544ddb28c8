"""
Discretized vector-valued L^2(R, K) with exact Hardy splitting.

Functions on the real line are stored as coefficients in the rational
orthonormal system

    phi_n(lam) = pi**-0.5 * (lam - i)**n / (lam + i)**(n + 1),   n in [-N, N)

which is the circle Fourier basis pulled back through the Cayley map
w = (lam - i)/(lam + i).  Indices n >= 0 span H^2_+ (holomorphic in the upper
half-plane), indices n < 0 span H^2_-, so the Hardy projections are exact
coordinate truncations.  Spectral variables follow the convention
(F f)(p) = (2 pi)^{-1/2} int exp(-i p x) f(x) dx; data imported with the
opposite sign convention must be conjugated before use.

Functions here never mutate their inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import AliasingError, DomainError, TailBoundError

SQRT_PI = math.sqrt(math.pi)


class HardySign(enum.Enum):
    """Selects Q_+ (upper half-plane Hardy space) or Q_-."""

    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class MultiplicitySpace:
    """Finite-dimensional multiplicity space K with the standard inner product."""

    dim: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"multiplicity dimension must be a positive integer, got {self.dim!r}")

    def basis(self):
        return np.eye(self.dim, dtype=complex)


def cayley(z):
    """Map the upper half-plane onto the unit disk, w = (z - i)/(z + i)."""
    z = np.asarray(z, dtype=complex)
    return (z - 1j) / (z + 1j)


def inverse_cayley(w):
    """lam = i (1 + w)/(1 - w); the unit circle minus w = 1 maps onto R."""
    w = np.asarray(w, dtype=complex)
    return 1j * (1 + w) / (1 - w)


@dataclass(frozen=True)
class SamplingGrid:
    """Half-step offset circle grid and its image on the real line.

    The nodes are ``w_m = exp(2 pi i (m + 1/2) / M)``, which never hit the
    Cayley singularity ``w = 1``.
    """

    m_samples: int

    def __post_init__(self):
        if int(self.m_samples) != self.m_samples or self.m_samples < 2:
            raise DomainError(f"m_samples must be an integer >= 2, got {self.m_samples!r}")

    @classmethod
    def for_truncation(cls, trunc_n, factor=4):
        return cls(int(factor) * int(trunc_n))

    @cached_property
    def circle(self):
        m = np.arange(self.m_samples)
        return np.exp(2j * np.pi * (m + 0.5) / self.m_samples)

    @cached_property
    def nodes(self):
        # i(1+w)/(1-w) on the circle is -cot(theta/2), real up to roundoff
        theta = 2 * np.pi * (np.arange(self.m_samples) + 0.5) / self.m_samples
        return -1.0 / np.tan(theta / 2)

    def check(self, trunc_n):
        if self.m_samples < 4 * trunc_n:
            raise AliasingError(
                f"grid of {self.m_samples} samples is too coarse for truncation {trunc_n} "
                f"(need at least {4 * trunc_n})",
                leak=float("nan"),
                suggested_n=self.m_samples // 4,
            )


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """Element of L^2(R, K) truncated to basis indices n in [-N, N).

    ``coeffs[n + N]`` is the K-vector multiplying ``phi_n``.  ``leak`` is the
    squared coefficient mass that was discarded while producing this value
    (aliasing or window truncation); it is a diagnostic, not part of the
    function.
    """

    coeffs: np.ndarray
    leak: float = 0.0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim == 1:
            c = c[:, None]
        if c.ndim != 2 or c.shape[0] == 0 or c.shape[0] % 2 or c.shape[1] == 0:
            raise DomainError(f"coefficient array must have shape (2N, dim K), got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "leak", float(self.leak))

    @classmethod
    def zeros(cls, trunc_n, k_dim=1):
        return cls(np.zeros((2 * trunc_n, k_dim), dtype=complex))

    @classmethod
    def basis_vector(cls, n, trunc_n, k=None):
        """phi_n times the vector k (default: first unit vector of a 1-dim K)."""
        k = np.atleast_1d(np.asarray([1.0] if k is None else k, dtype=complex))
        if not -trunc_n <= n < trunc_n:
            raise DomainError(f"index {n} outside truncation window [-{trunc_n}, {trunc_n})")
        c = np.zeros((2 * trunc_n, k.size), dtype=complex)
        c[n + trunc_n] = k
        return cls(c)

    @property
    def trunc_n(self):
        return self.coeffs.shape[0] // 2

    @property
    def k_dim(self):
        return self.coeffs.shape[1]

    @property
    def indices(self):
        return np.arange(-self.trunc_n, self.trunc_n)

    def coefficient(self, n):
        return self.coeffs[n + self.trunc_n]

    def norm_squared(self):
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other):
        """<self, other>, antilinear in ``self``."""
        a, b = _common_window(self, other)
        return complex(np.vdot(a.coeffs, b.coeffs))

    def resized(self, trunc_n):
        """Same function on a window of a different truncation; cut mass goes to ``leak``."""
        n_old = self.trunc_n
        out = np.zeros((2 * trunc_n, self.k_dim), dtype=complex)
        lo = max(-trunc_n, -n_old)
        hi = min(trunc_n, n_old)
        out[lo + trunc_n : hi + trunc_n] = self.coeffs[lo + n_old : hi + n_old]
        cut = self.norm_squared() - float(np.sum(np.abs(out) ** 2))
        return SpectralFunction(out, self.leak + max(cut, 0.0))

    def h2_mass(self, sign):
        n = self.trunc_n
        part = self.coeffs[n:] if HardySign(sign) is HardySign.PLUS else self.coeffs[:n]
        return float(np.sum(np.abs(part) ** 2))

    def __add__(self, other):
        if not isinstance(other, SpectralFunction):
            return NotImplemented
        a, b = _common_window(self, other)
        return SpectralFunction(a.coeffs + b.coeffs, a.leak + b.leak)

    def __sub__(self, other):
        if not isinstance(other, SpectralFunction):
            return NotImplemented
        a, b = _common_window(self, other)
        return SpectralFunction(a.coeffs - b.coeffs, a.leak + b.leak)

    def __neg__(self):
        return SpectralFunction(-self.coeffs, self.leak)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return SpectralFunction(scalar * self.coeffs, abs(scalar) ** 2 * self.leak)

    __rmul__ = __mul__

    def __repr__(self):
        return f"SpectralFunction(trunc_n={self.trunc_n}, k_dim={self.k_dim}, norm={self.norm():.6g})"


def _common_window(a, b):
    if a.k_dim != b.k_dim:
        raise DomainError(f"multiplicity mismatch: {a.k_dim} vs {b.k_dim}")
    n = max(a.trunc_n, b.trunc_n)
    if a.trunc_n != n:
        a = a.resized(n)
    if b.trunc_n != n:
        b = b.resized(n)
    return a, b


def synthesize(f, grid):
    """Samples f(lam_m) on the grid nodes, shape (M, dim K).

    Uses f(lam) = pi^{-1/2} (lam + i)^{-1} sum_n c_n w^n and one inverse FFT.
    """
    grid.check(f.trunc_n)
    m, n = grid.m_samples, f.trunc_n
    idx = f.indices
    a = np.zeros((m, f.k_dim), dtype=complex)
    a[idx % m] = f.coeffs * np.exp(1j * np.pi * idx / m)[:, None]
    g = np.fft.ifft(a, axis=0) * m
    return g / (SQRT_PI * (grid.nodes + 1j))[:, None]


def analyze(samples, grid, trunc_n, tol=None):
    """Left inverse of :func:`synthesize`.

    Parameters
    ----------
    samples : array_like, shape (M,) or (M, dim K)
        Values on ``grid.nodes``.
    grid : SamplingGrid
    trunc_n : int
        Truncation N of the result.
    tol : float, optional
        If given, raise :class:`AliasingError` when the DFT mass outside the
        window exceeds ``tol`` times the total mass.

    Returns
    -------
    SpectralFunction
        Its ``leak`` holds the squared DFT mass outside [-N, N).
    """
    samples = np.asarray(samples, dtype=complex)
    if samples.ndim == 1:
        samples = samples[:, None]
    if samples.shape[0] != grid.m_samples:
        raise DomainError(f"{samples.shape[0]} samples given for a grid of {grid.m_samples}")
    grid.check(trunc_n)
    m = grid.m_samples
    g = SQRT_PI * (grid.nodes + 1j)[:, None] * samples
    a = np.fft.fft(g, axis=0) / m
    freq = np.fft.fftfreq(m, 1.0 / m).astype(int)
    a = a * np.exp(-1j * np.pi * freq / m)[:, None]
    idx = np.arange(-trunc_n, trunc_n)
    coeffs = a[idx % m]
    total = float(np.sum(np.abs(a) ** 2))
    leak = max(total - float(np.sum(np.abs(coeffs) ** 2)), 0.0)
    if tol is not None and leak > tol * max(total, np.finfo(float).tiny):
        raise AliasingError(
            f"samples are not representable at truncation {trunc_n}: "
            f"relative discarded mass {leak / total:.3e}",
            leak=leak,
            suggested_n=2 * trunc_n,
        )
    return SpectralFunction(coeffs, leak)


def from_callable(func, trunc_n, k_dim=None, grid_factor=8, tol=None):
    """Coefficients of a callable lam -> K-vector by sampling on a fine grid."""
    grid = SamplingGrid.for_truncation(trunc_n, grid_factor)
    vals = np.asarray(func(grid.nodes), dtype=complex)
    if vals.ndim == 1:
        vals = vals[:, None]
    if k_dim is not None and vals.shape[1] != k_dim:
        raise DomainError(f"callable returned dim {vals.shape[1]}, expected {k_dim}")
    return analyze(vals, grid, trunc_n, tol=tol)


def hardy_project(f, sign):
    """Q_+ f (``sign`` plus) or Q_- f (minus): zero the complementary coefficients."""
    sign = HardySign(sign)
    c = np.array(f.coeffs)
    n = f.trunc_n
    if sign is HardySign.PLUS:
        c[:n] = 0
    else:
        c[n:] = 0
    return SpectralFunction(c, f.leak)


def evaluate_upper(f, z):
    """(Q_+ f)(z) for Im z > 0, from sum_{n >= 0} c_n phi_n(z).

    ``z`` may be a scalar or an array; the result has shape ``z.shape + (dim K,)``.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag <= 0):
        raise DomainError("evaluate_upper needs Im z > 0; use evaluate_lower below the axis")
    n = f.trunc_n
    w = cayley(z)
    powers = w[..., None] ** np.arange(n)
    return (powers @ f.coeffs[n:]) / (SQRT_PI * (z + 1j))[..., None]


def evaluate_lower(f, z):
    """(Q_- f)(z) for Im z < 0."""
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag >= 0):
        raise DomainError("evaluate_lower needs Im z < 0")
    n = f.trunc_n
    # phi_{-m}(z) = pi^{-1/2} u^{m-1} / (z - i) with u = (z + i)/(z - i), |u| < 1
    u = (z + 1j) / (z - 1j)
    powers = u[..., None] ** np.arange(n)
    neg = f.coeffs[:n][::-1]  # c_{-1}, c_{-2}, ..., c_{-N}
    return (powers @ neg) / (SQRT_PI * (z - 1j))[..., None]


def evaluate_line(f, lam):
    """Boundary values f(lam) at arbitrary real points."""
    lam = np.asarray(lam, dtype=float)
    w = cayley(lam)
    powers = w[..., None] ** f.indices
    return (powers @ f.coeffs) / (SQRT_PI * (lam + 1j))[..., None]


# -- independent quadrature oracle on the real line --------------------------

_GL_ORDER = 20


def _line_nodes(half_width, core=4.0, core_step=0.125, shell_split=8):
    """Composite Gauss-Legendre nodes on [-L, L] with L = core * 2^k.

    Returns nodes, weights and the shell level of each node (0 for the core),
    so integrals over [-L/2^j, L/2^j] are partial sums.
    """
    levels = max(int(math.ceil(math.log2(half_width / core))), 2)
    x, wts = np.polynomial.legendre.leggauss(_GL_ORDER)
    edges = [np.arange(-core, core + core_step / 2, core_step)]
    panel_level = [np.zeros(len(edges[0]) - 1, dtype=int)]
    a = core
    for lev in range(1, levels + 1):
        e = np.linspace(a, 2 * a, shell_split + 1)
        edges.append(e)
        panel_level.append(np.full(shell_split, lev))
        edges.append(-e[::-1])
        panel_level.append(np.full(shell_split, lev))
        a *= 2
    nodes, weights, level = [], [], []
    for e, lv in zip(edges, panel_level):
        lo, hi = e[:-1], e[1:]
        mid, half = (lo + hi) / 2, (hi - lo) / 2
        nodes.append((mid[:, None] + half[:, None] * x).ravel())
        weights.append((half[:, None] * wts).ravel())
        level.append(np.repeat(lv, _GL_ORDER))
    return np.concatenate(nodes), np.concatenate(weights), np.concatenate(level), core * 2.0**levels


def line_integral(integrand, half_width=1e4, tol=1e-10):
    """Integral over R of a vector integrand decaying like |lam|^-2.

    The truncated integrals on [-L, L], [-L/2, L/2] and [-L/4, L/4] are
    Richardson-combined; for such integrands the two-sided tail is a series in
    odd powers of 1/L.  Raises :class:`TailBoundError` with the half-width
    that would be needed when the error estimate exceeds ``tol`` (absolute,
    relative to ``max(1, |value|)``).

    Returns
    -------
    value, error_estimate
    """
    nodes, weights, level, L = _line_nodes(half_width)
    vals = np.asarray(integrand(nodes), dtype=complex)
    if vals.ndim == 1:
        vals = vals[:, None]
    top = level.max()
    partial = [np.sum((weights * (level <= top - j))[:, None] * vals, axis=0) for j in range(3)]
    rich_l = 2 * partial[0] - partial[1]
    rich_half = 2 * partial[1] - partial[2]
    err = float(np.linalg.norm(rich_l - rich_half)) / 7.0
    scale = max(1.0, float(np.linalg.norm(rich_l)))
    if err > tol * scale:
        needed = L * (err / (tol * scale)) ** (1.0 / 3.0) * 1.5
        raise TailBoundError(
            f"line quadrature error estimate {err:.3e} exceeds tolerance at half-width {L:g}",
            error_estimate=err,
            required_half_width=needed,
        )
    return rich_l, err


def cauchy_project_oracle(g, z, half_width=1e4, tol=1e-10):
    """Direct quadrature of (2 pi i)^{-1} int g(lam)/(lam - z) dlam.

    ``g`` is a callable on real arrays returning values of shape (..., dim K).
    For Im z > 0 the result approximates (Q_+ g)(z); for Im z < 0 it
    approximates -(Q_- g)(z).  Independent of the rational basis, intended
    only for cross-validation.
    """
    z = complex(z)
    if z.imag == 0:
        raise DomainError("the Cauchy integral is singular on the real axis")

    def integrand(lam):
        v = np.asarray(g(lam), dtype=complex)
        if v.ndim == 1:
            v = v[:, None]
        return v / (lam - z)[:, None]

    value, _ = line_integral(integrand, half_width, tol)
    return value / (2j * np.pi)


def line_norm_squared(g, half_width=1e4, tol=1e-10):
    """Quadrature value of int ||g(lam)||^2 dlam (Parseval oracle)."""

    def integrand(lam):
        v = np.asarray(g(lam), dtype=complex)
        if v.ndim == 1:
            v = v[:, None]
        return np.sum(np.abs(v) ** 2, axis=1)

    value, _ = line_integral(integrand, half_width, tol)
    return float(value[0].real)
