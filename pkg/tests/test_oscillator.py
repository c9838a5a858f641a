import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdeform import oracle
from qdeform.errors import DomainError
from qdeform.oscillator import (
    PureStateSpec,
    ho_reference_psi,
    make_params,
    normalization_c,
    psi,
    state_coefficients,
)
from qdeform.verification import q_limit_distances

# mpmath, 60 digits
GOLDEN_HO4_X13 = -0.385655452466583154198312
GOLDEN_C2_SQ_Q09 = 24.05229277229908381199707
GOLDEN_PSI3_Q05_X04 = complex(0.4646688864142221438226218, -0.1748650252105848938654063)


def test_make_params_reference_value():
    p = make_params(1, 1, 1, 0.001)
    assert p.lam == 0.5
    assert p.h == pytest.approx(3.716, abs=1e-3)


def test_make_params_closed_forms():
    assert make_params(q=math.exp(-1.0)).h == pytest.approx(math.sqrt(2.0), rel=1e-15)
    p = make_params(2, 3, 1, 0.5)
    assert p.lam == 3.0
    assert p.h == pytest.approx(math.sqrt(math.log(2) / 3), rel=1e-15)


@given(mass=st.floats(0.1, 10), omega=st.floats(0.1, 10), hbar=st.floats(0.1, 10), q=st.floats(1e-9, 1 - 1e-9))
def test_params_round_trip(mass, omega, hbar, q):
    p = make_params(mass, omega, hbar, q)
    assert p.lam == mass * omega / (2 * hbar)
    assert math.exp(-p.lam * p.h**2) == pytest.approx(q, rel=1e-12)


@pytest.mark.parametrize("field,kwargs", [
    ("mass", dict(mass=0.0)),
    ("hbar", dict(hbar=-1.0)),
    ("q", dict(q=1.0)),
    ("q", dict(q=1e-10)),
])
def test_make_params_rejects(field, kwargs):
    with pytest.raises(DomainError, match=field):
        make_params(**kwargs)


def test_level_cap():
    with pytest.raises(DomainError):
        PureStateSpec(65, make_params())
    PureStateSpec(64, make_params())


def test_normalization_constants():
    p = make_params(q=0.3)
    assert normalization_c(0, p) == pytest.approx((1 / math.pi) ** 0.25)
    assert normalization_c(0, p).imag == 0
    c1 = normalization_c(1, make_params(q=0.5))
    assert c1 == pytest.approx(1j * (1 / math.pi) ** 0.25, rel=1e-15)
    assert abs(normalization_c(2, make_params(q=0.9))) ** 2 == pytest.approx(GOLDEN_C2_SQ_Q09, rel=1e-13)


def test_psi_ground_state_is_ho_for_every_q():
    x = np.linspace(-4, 4, 81)
    for q in (1e-6, 0.3, 0.99):
        p = make_params(q=q)
        np.testing.assert_allclose(psi(PureStateSpec(0, p), x), ho_reference_psi(0, p.lam, x), rtol=1e-15, atol=0)


def test_psi_two_term_sum():
    p = make_params(q=0.5)
    expected = normalization_c(1, p) * (1 - math.sqrt(2.0))
    assert psi(PureStateSpec(1, p), 0.0) == pytest.approx(expected, rel=1e-14)


def test_psi_golden():
    assert psi(PureStateSpec(3, make_params(q=0.5)), 0.4) == pytest.approx(GOLDEN_PSI3_Q05_X04, rel=1e-13)


def test_ho_reference():
    assert ho_reference_psi(0, 0.5, 0.0) == pytest.approx((1 / math.pi) ** 0.25)
    assert ho_reference_psi(1, 0.5, 0.0) == 0.0
    assert ho_reference_psi(4, 0.5, 1.3) == pytest.approx(GOLDEN_HO4_X13, rel=1e-14)


@pytest.mark.parametrize("q", [0.001, 0.5, 0.9, 0.99])
def test_normalization_and_orthogonality(q):
    p = make_params(q=q)
    s = oracle.settings_for(p, 8)
    states = {n: (lambda x, n=n: psi(PureStateSpec(n, p), x)) for n in range(9)}
    for n in range(9):
        assert oracle.inner_product(states[n], states[n], s) == pytest.approx(1.0, abs=1e-8)
    for n in range(7):
        for m in range(n + 1, 7):
            assert abs(oracle.inner_product(states[n], states[m], s)) < 1e-8


def test_envelope_bound():
    x = np.linspace(-8, 8, 401)
    for q in (0.001, 0.5, 0.9):
        p = make_params(q=q)
        for n in range(6):
            log_mag, _ = state_coefficients(n, q)
            C = abs(normalization_c(n, p)) * np.exp(log_mag).sum()
            assert np.all(np.abs(psi(PureStateSpec(n, p), x)) <= C * np.exp(-p.lam * x**2) * (1 + 1e-12))


@pytest.mark.parametrize("n", range(1, 5))
def test_q_to_one_convergence(n):
    d = q_limit_distances(n)
    assert d[0] > d[1] > d[2]
    # the distance to the ordinary state at q = 0.999 is already small
    assert d[2] < 1e-3


def test_psi_scalar_and_array_agree():
    spec = PureStateSpec(4, make_params(q=0.2))
    xs = np.array([-1.0, 0.3, 2.0])
    np.testing.assert_array_equal(psi(spec, xs), [psi(spec, float(x)) for x in xs])
