"""Rational test functions with simple poles off the real axis.

A :class:`RationalFunction` is ``lam -> sum_j r_j / (lam - p_j)`` with
K-vector residues ``r_j``.  Each term has a closed-form geometric expansion
in the rational basis, so coefficients are exact up to the truncation tail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .hardy import SQRT_PI, SpectralFunction


def kernel_coefficients(pole, trunc_n):
    """Coefficients of lam -> 1/(lam - pole) on [-N, N) and the omitted tail mass."""
    p = complex(pole)
    c = np.zeros(2 * trunc_n, dtype=complex)
    n = np.arange(trunc_n)
    if p.imag < 0:
        q = (1j + p) / (1j - p)
        pref = SQRT_PI * 2j / (1j - p)
        c[trunc_n:] = pref * (-q) ** n
    elif p.imag > 0:
        r = (1j - p) / (1j + p)
        pref = SQRT_PI * 2j / (1j + p)
        q = r
        # c_{-m-1} = pref (-r)^m, stored at position N - m - 1
        c[:trunc_n] = (pref * (-r) ** n)[::-1]
    else:
        raise DomainError("1/(lam - p) is not square integrable for real p")
    rho = abs(q) ** 2
    tail = abs(pref) ** 2 * rho**trunc_n / (1 - rho)
    return c, tail


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """``sum_j residues[j] / (lam - poles[j])``; poles distinct and non-real."""

    poles: np.ndarray
    residues: np.ndarray

    def __post_init__(self):
        poles = np.atleast_1d(np.asarray(self.poles, dtype=complex))
        res = np.asarray(self.residues, dtype=complex)
        if res.ndim == 1:
            res = res[:, None]
        if res.shape[0] != poles.size:
            raise DomainError("one residue vector per pole is required")
        if np.any(poles.imag == 0):
            raise DomainError("poles must lie off the real axis")
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "residues", res)

    @classmethod
    def from_product(cls, poles, k):
        """k / prod_j (lam - p_j), decaying like |lam|^-d for d poles."""
        poles = np.atleast_1d(np.asarray(poles, dtype=complex))
        k = np.atleast_1d(np.asarray(k, dtype=complex))
        res = []
        for j, p in enumerate(poles):
            others = np.delete(poles, j)
            res.append(k / np.prod(p - others))
        return cls(poles, np.array(res))

    @property
    def k_dim(self):
        return self.residues.shape[1]

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=complex)
        terms = 1.0 / (lam[..., None] - self.poles)
        return terms @ self.residues

    def __add__(self, other):
        return RationalFunction(
            np.concatenate([self.poles, other.poles]),
            np.concatenate([self.residues, other.residues]),
        )

    def scaled(self, factor):
        return RationalFunction(self.poles, factor * self.residues)

    def coefficients(self, trunc_n):
        """Exact coefficient window; ``leak`` bounds the omitted tail mass."""
        c = np.zeros((2 * trunc_n, self.k_dim), dtype=complex)
        tail = 0.0
        for p, r in zip(self.poles, self.residues):
            ck, t = kernel_coefficients(p, trunc_n)
            c += ck[:, None] * r
            tail += t * float(np.sum(np.abs(r) ** 2))
        return SpectralFunction(c, tail)

    def plus_part(self):
        keep = self.poles.imag < 0
        return RationalFunction(self.poles[keep], self.residues[keep])

    def minus_part(self):
        keep = self.poles.imag > 0
        return RationalFunction(self.poles[keep], self.residues[keep])


def random_poles(rng, count, side, real_span=1.5, imag_range=(0.5, 2.0)):
    """Distinct poles in the lower (side 'plus', i.e. H^2_+) or upper half-plane."""
    re = rng.uniform(-real_span, real_span, count)
    im = rng.uniform(*imag_range, count)
    sign = -1.0 if side == "plus" else 1.0
    return re + 1j * sign * im


def random_probe(rng, k_dim=1, side="both", n_poles=4):
    """Random member of the rational probe family.

    Each Hardy component is ``k / prod (lam - p_j)`` over ``n_poles`` poles,
    so it decays like |lam|^-n_poles; ``side`` is 'plus', 'minus' or 'both'.
    The result is normalized to unit L^2 norm (computed from its coefficients).
    """
    sides = ["plus", "minus"] if side == "both" else [side]
    f = None
    for s in sides:
        k = rng.standard_normal(k_dim) + 1j * rng.standard_normal(k_dim)
        part = RationalFunction.from_product(random_poles(rng, n_poles, s), k)
        f = part if f is None else f + part
    norm = f.coefficients(1024).norm()
    return f.scaled(1.0 / norm)
