import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laxphillips import (
    AliasingError,
    BlaschkeFactor,
    DomainError,
    Orientation,
    PoleError,
    RationalPhase,
    ScatteringMatrix,
    SpectralFunction,
    UnsupportedError,
    adjoint_scattering,
    apply_scattering,
    eval_scattering,
    pole_set,
    scattering_from_record,
)
from laxphillips.rational import RationalFunction
from laxphillips.scattering import projection_onto


def test_single_factor_values():
    S = ScatteringMatrix.blaschke([1j])
    assert eval_scattering(S, 0.0)[0, 0] == pytest.approx(-1.0)
    assert eval_scattering(S, math.inf)[0, 0] == pytest.approx(1.0)
    assert eval_scattering(S, 1j)[0, 0] == 0
    with pytest.raises(PoleError):
        eval_scattering(S, -1j)


def test_unitary_on_the_line():
    S = ScatteringMatrix.blaschke([1j, 1 + 1j, -1 + 2j])
    lam = np.linspace(-20, 20, 101)
    vals = eval_scattering(S, lam)
    assert np.max(np.abs(np.abs(vals[:, 0, 0]) - 1)) < 1e-14


def test_matrix_factor_is_unitary_and_rank_one():
    P = np.diag([1.0, 0.0])
    S = ScatteringMatrix.blaschke([1j], k_dim=2, projs=[P])
    m = eval_scattering(S, 0.7)
    assert np.allclose(m.conj().T @ m, np.eye(2))
    # kernel at the zero mu = i is the range of P
    m0 = eval_scattering(S, 1j)
    assert np.allclose(m0, np.diag([0, 1]))


def test_adjoint_is_inverse_on_the_line():
    S = ScatteringMatrix.blaschke([1j, 2 + 0.5j], "anti_inner")
    Sa = adjoint_scattering(S)
    for lam in (-3.0, 0.0, 0.4, 10.0):
        assert np.allclose(eval_scattering(Sa, lam) @ eval_scattering(S, lam), 1)


def test_anti_inner_reciprocal():
    a = ScatteringMatrix.blaschke([0.5 + 1j], "anti_inner")
    b = ScatteringMatrix.blaschke([0.5 + 1j], "inner")
    z = 0.3 + 0.2j
    assert eval_scattering(a, z)[0, 0] * eval_scattering(b, z)[0, 0] == pytest.approx(1.0)


def test_pole_set():
    S = ScatteringMatrix.blaschke([1j, 1j, 2 + 1j])
    ps = pole_set(S)
    lower = dict((complex(round(p.real, 9), round(p.imag, 9)), m) for p, m in ps.lower)
    assert lower == {-1j: 2, 2 - 1j: 1}
    assert ps.upper == [] or list(ps.upper) == []
    with pytest.raises(UnsupportedError):
        pole_set(ScatteringMatrix.phase([1.0], [1.0, 0.0, 1.0]))


def test_apply_against_partial_fractions():
    # (lam - i)/(lam + i) * 1/(lam + 2i) = -2/(lam + i) + 3/(lam + 2i)
    S = ScatteringMatrix.blaschke([1j])
    f = RationalFunction([-2j], [[1.0]]).coefficients(128)
    ref = RationalFunction([-1j, -2j], [[-2.0], [3.0]]).coefficients(128)
    out = apply_scattering(S, f).resized(128)
    assert np.max(np.abs(out.coeffs - ref.coeffs)) < 1e-13


def test_phase_is_unitary_and_bounded():
    S = ScatteringMatrix.phase([3.0], [1.0, 0.0, 1.0])
    lam = np.array([-5.0, 0.0, 2.0])
    vals = eval_scattering(S, lam)[:, 0, 0]
    assert np.allclose(vals, np.exp(3j / (1 + lam**2)))
    assert eval_scattering(S, math.inf)[0, 0] == pytest.approx(1.0)
    with pytest.raises(DomainError):
        RationalPhase([1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 1.0])  # unbounded at infinity
    with pytest.raises(DomainError):
        RationalPhase([1.0], [1.0, 0.0])  # real pole


def test_factor_validation():
    with pytest.raises(DomainError):
        BlaschkeFactor(-1j, np.eye(1), Orientation.INNER)
    with pytest.raises(DomainError):
        ScatteringMatrix.constant(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_record_parsing():
    rec = {
        "constant": [[0, 1], [[0, 1], 0]],
        "factors": [{"type": "inner", "mu": [0, 1], "proj": [[1, 0], [0, 0]]}],
    }
    S = scattering_from_record(rec, 2)
    assert S.inner_degree == 1
    assert np.allclose(S.constant_factor, [[0, 1], [1j, 0]])
    with pytest.raises(DomainError):
        scattering_from_record({"factors": [{"type": "sideways", "mu": [0, 1]}]}, 1)


def test_symbol_aliasing_detected():
    # a pole very close to the axis needs far more circle samples than 64
    S = ScatteringMatrix.blaschke([1e-3j])
    with pytest.raises(AliasingError):
        S.symbol(64)


def test_projection_onto():
    P = projection_onto([[1.0, 1.0]])
    assert np.allclose(P, 0.5 * np.ones((2, 2)))


@settings(max_examples=25, deadline=None)
@given(
    st.lists(
        st.tuples(st.floats(-2, 2), st.floats(0.3, 3)),
        min_size=1,
        max_size=3,
    ),
    st.sampled_from(["inner", "anti_inner"]),
    st.floats(-5, 5),
)
def test_blaschke_unimodular_property(mus, orient, lam):
    S = ScatteringMatrix.blaschke([complex(a, b) for a, b in mus], orient)
    v = eval_scattering(S, lam)[0, 0]
    assert abs(abs(v) - 1) < 1e-12
    assert abs(eval_scattering(adjoint_scattering(S), lam)[0, 0] - np.conj(v)) < 1e-12


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_multiplication_preserves_norm(seed):
    from laxphillips.rational import random_probe

    rng = np.random.default_rng(seed)
    S = ScatteringMatrix.blaschke([1j, 1 + 2j])
    f = random_probe(rng).coefficients(256)
    g = apply_scattering(S, f)
    assert abs(g.norm() - f.norm()) < 1e-10
