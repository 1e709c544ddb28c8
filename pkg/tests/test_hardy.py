import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laxphillips import (
    AliasingError,
    DomainError,
    HardySign,
    SamplingGrid,
    SpectralFunction,
    analyze,
    cauchy_project_oracle,
    evaluate_line,
    evaluate_lower,
    evaluate_upper,
    from_callable,
    hardy_project,
    synthesize,
)
from laxphillips.hardy import cayley, inverse_cayley, line_norm_squared
from laxphillips.rational import RationalFunction, kernel_coefficients


def phi_mp(n, lam):
    lam = mpmath.mpc(lam)
    return (lam - 1j) ** n / (lam + 1j) ** (n + 1) / mpmath.sqrt(mpmath.pi)


def test_basis_value_at_one():
    # phi_1(1) = (1 - i) / (sqrt(pi) (1 + i)^2) = -(1 + i) / (2 sqrt(pi))
    f = SpectralFunction.basis_vector(1, 8)
    val = evaluate_line(f, [1.0])[0, 0]
    assert abs(val - (-(1 + 1j) / (2 * math.sqrt(math.pi)))) < 1e-15


@pytest.mark.parametrize("n", [-3, -1, 0, 2, 5])
def test_basis_matches_closed_form(n):
    f = SpectralFunction.basis_vector(n, 8)
    lam = np.array([-2.5, -0.3, 0.0, 0.7, 4.0])
    got = evaluate_line(f, lam)[:, 0]
    ref = np.array([complex(phi_mp(n, x)) for x in lam])
    assert np.max(np.abs(got - ref)) < 1e-14


def test_basis_orthonormal_by_quadrature():
    for m, n in [(0, 0), (1, 1), (-2, -2), (0, 1), (-1, 2)]:
        val = mpmath.quad(lambda x: mpmath.conj(phi_mp(m, x)) * phi_mp(n, x), [-mpmath.inf, 0, mpmath.inf])
        assert abs(complex(val) - (1.0 if m == n else 0.0)) < 1e-10


def test_cayley_roundtrip():
    z = np.array([0.3 + 2j, -1 + 0.1j, 5j])
    assert np.allclose(inverse_cayley(cayley(z)), z)
    assert np.all(np.abs(cayley(z)) < 1)


def test_synthesize_analyze_roundtrip(rng):
    c = rng.standard_normal((64, 2)) + 1j * rng.standard_normal((64, 2))
    f = SpectralFunction(c)
    grid = SamplingGrid.for_truncation(32)
    g = analyze(synthesize(f, grid), grid, 32)
    assert np.max(np.abs(g.coeffs - c)) < 1e-12
    assert g.leak < 1e-12 * g.norm_squared()


def test_grid_too_coarse_is_rejected():
    with pytest.raises(AliasingError):
        SamplingGrid(64).check(32)


def test_analyze_reports_leak():
    # 1/(lam + 0.05i) has slowly decaying coefficients
    with pytest.raises(AliasingError):
        from_callable(lambda x: 1 / (x + 0.05j), 16, tol=1e-12)


def test_kernel_coefficients_by_quadrature():
    p = 0.4 - 0.8j
    c, tail = kernel_coefficients(p, 32)
    for n in (0, 1, 3, -1, -2):
        ref = mpmath.quad(lambda x: mpmath.conj(phi_mp(n, x)) / (x - p), [-mpmath.inf, 0, mpmath.inf])
        assert abs(c[n + 32] - complex(ref)) < 1e-10
    # closed-form norm: pi / |Im p|
    assert abs(np.sum(np.abs(c) ** 2) + tail - math.pi / 0.8) < 1e-12


def test_projections_split_poles():
    g = RationalFunction([0.5 - 1j, -1 + 0.5j], [[1.0], [2.0 - 1j]])
    f = g.coefficients(256)
    plus = hardy_project(f, HardySign.PLUS)
    minus = hardy_project(f, "minus")
    assert np.max(np.abs(plus.coeffs - g.plus_part().coefficients(256).coeffs)) < 1e-14
    assert np.max(np.abs(minus.coeffs - g.minus_part().coefficients(256).coeffs)) < 1e-14
    assert abs(plus.norm_squared() + minus.norm_squared() - f.norm_squared()) < 1e-12


@pytest.mark.parametrize("z", [1j, 0.5 + 0.5j, -1 + 2j])
def test_plus_projection_against_cauchy_oracle(z):
    g = RationalFunction([0.3 - 0.7j, -0.5 + 1.2j, 1.1 - 0.4j], [[1.0], [0.5j], [-0.7]])
    f = g.coefficients(512)
    got = evaluate_upper(f, z)[0]
    ref = cauchy_project_oracle(g, z)
    assert abs(got - ref[0]) < 1e-7
    # independent check against the explicit H^2_+ part
    assert abs(got - g.plus_part()(z)[0]) < 1e-12


def test_lower_evaluation():
    g = RationalFunction([0.3 - 0.7j, -0.5 + 1.2j], [[1.0], [0.5j]])
    f = g.coefficients(256)
    z = 0.2 - 1.5j
    assert abs(evaluate_lower(f, z)[0] - g.minus_part()(z)[0]) < 1e-12


def test_evaluate_wrong_half_plane():
    f = SpectralFunction.basis_vector(0, 4)
    with pytest.raises(DomainError):
        evaluate_upper(f, -1j)
    with pytest.raises(DomainError):
        evaluate_lower(f, 1j)


def test_line_norm_oracle():
    g = RationalFunction([-2j], [[1.0]])
    val = line_norm_squared(g)
    assert abs(val - math.pi / 2) < 1e-8


def test_resized_tracks_leak():
    f = SpectralFunction.basis_vector(5, 8) + SpectralFunction.basis_vector(0, 8)
    small = f.resized(4)
    assert small.norm_squared() == pytest.approx(1.0)
    assert small.leak == pytest.approx(1.0)


def test_shape_validation():
    with pytest.raises(DomainError):
        SpectralFunction(np.zeros(3))
    with pytest.raises(DomainError):
        SpectralFunction.basis_vector(4, 4)


coeff = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@settings(max_examples=40, deadline=None)
@given(st.lists(coeff, min_size=32, max_size=32), st.lists(coeff, min_size=32, max_size=32))
def test_projections_are_complementary_and_orthogonal(a, b):
    f = SpectralFunction(np.array(a))
    g = SpectralFunction(np.array(b))
    pf, mf = hardy_project(f, "plus"), hardy_project(f, "minus")
    assert np.allclose((pf + mf).coeffs, f.coeffs)
    assert abs(pf.inner(mf)) == 0
    # self-adjoint: <P f, g> = <f, P g>
    assert abs(pf.inner(g) - f.inner(hardy_project(g, "plus"))) <= 1e-12 * (1 + f.norm() * g.norm())
    assert np.allclose(hardy_project(pf, "plus").coeffs, pf.coeffs)


@settings(max_examples=30, deadline=None)
@given(st.lists(coeff, min_size=16, max_size=16))
def test_parseval_through_samples(a):
    f = SpectralFunction(np.array(a))
    grid = SamplingGrid.for_truncation(8, factor=64)
    vals = synthesize(f, grid)[:, 0]
    # trapezoid rule in the circle variable: |f|^2 d lam = |c-series|^2 d theta / pi ... check via analyze
    back = analyze(vals, grid, 8)
    assert abs(back.norm_squared() - f.norm_squared()) <= 1e-10 * (1 + f.norm_squared())
