import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdeform import oracle
from qdeform.bell import (
    _PATTERNS,
    BellSpec,
    BellVariant,
    PhasePoint4,
    bell_interference_term,
    bell_terms,
    bell_wavefunction,
    bell_wigner,
    conditional_center,
    epsilon,
    kappa,
    midpoint_momentum,
)
from qdeform.errors import DomainError
from qdeform.oscillator import PureStateSpec, make_params, psi
from qdeform.verification import bell_total_integral


@pytest.fixture
def p05():
    return make_params(q=0.5)


def test_spec_validation(p05):
    with pytest.raises(DomainError):
        BellSpec(BellVariant.PSI_PLUS, 2, 2, p05, p05)
    with pytest.raises(DomainError):
        BellSpec(BellVariant.PSI_PLUS, 0, 1, p05, make_params(hbar=2.0, q=0.5))
    assert BellSpec("phi-", 0, 1, p05, p05).variant is BellVariant.PHI_MINUS


def test_wavefunction_symmetries(p05):
    t = np.linspace(-2, 2, 9)
    psi_minus = BellSpec(BellVariant.PSI_MINUS, 1, 3, p05, p05)
    np.testing.assert_allclose(bell_wavefunction(psi_minus, t, t), 0, atol=1e-16)
    psi_plus = psi_minus.with_variant("psi+")
    a, b = np.meshgrid(t, t)
    np.testing.assert_allclose(bell_wavefunction(psi_plus, a, b), bell_wavefunction(psi_plus, b, a), rtol=1e-15)


def test_wavefunction_assembly(p05):
    spec = BellSpec(BellVariant.PHI_PLUS, 0, 1, p05, p05)
    a0 = psi(PureStateSpec(0, p05), 0.3)
    b0 = psi(PureStateSpec(0, p05), -0.2)
    a1 = psi(PureStateSpec(1, p05), 0.3)
    b1 = psi(PureStateSpec(1, p05), -0.2)
    assert bell_wavefunction(spec, 0.3, -0.2) == pytest.approx((a0 * b0 + a1 * b1) / math.sqrt(2), rel=1e-15)


def test_kappa(p05):
    spec = BellSpec(BellVariant.PSI_PLUS, 0, 1, p05, p05)
    assert kappa(2, 2, 1, 1, spec, 0.7, -1.3) == 1.0
    assert kappa(3, 1, 0, 2, spec, 0.0, 0.0) == 1.0
    p = make_params(q=math.exp(-2.0))  # lam = 1/2, h = 2
    spec2 = BellSpec(BellVariant.PSI_PLUS, 0, 1, p, p)
    assert kappa(1, 0, 0, 0, spec2, math.pi / 4, 5.0) == pytest.approx(0.0, abs=1e-15)


def test_epsilon(p05):
    spec = BellSpec(BellVariant.PSI_PLUS, 0, 1, p05, p05)
    assert epsilon(0, 0, 0, 0, spec, 0.0, 0.0) == 1.0
    assert epsilon(0, 0, 0, 0, spec, 0.6, -0.9) == pytest.approx(math.exp(-(0.6**2) / 1.0 - 0.9**2 / 1.0))
    p = make_params(q=0.001)
    spec3 = BellSpec(BellVariant.PSI_PLUS, 0, 1, p, p)
    ps = np.linspace(-20, 5, 25001)
    values = epsilon(3, 1, 0, 0, spec3, ps, 0.0)
    assert ps[np.argmax(values)] == pytest.approx(-4 * p.h * p.lam * p.hbar, abs=1e-3)


def mp_kernel(j, l, q, x, p):
    """50-digit ``c_j* c_l sum B e^{...} e^{-2 lam x^2}`` with lam = 1/2, hbar = 1."""
    with mpmath.workdps(50):
        Q, lam = mpmath.mpf(q), mpmath.mpf(1) / 2
        h = mpmath.sqrt(-mpmath.log(Q) / lam)
        x, p = mpmath.mpf(x), mpmath.mpf(p)

        def poch(a, k):
            return mpmath.fprod(1 - a * Q**i for i in range(k))

        def b(nn, k):
            return poch(Q**-nn, k) / poch(Q, k) * Q ** (nn * k - mpmath.mpf(k) ** 2 / 2)

        def c(nn):
            return (2 * lam / mpmath.pi) ** mpmath.mpf(0.25) * mpmath.j**nn * Q ** (mpmath.mpf(nn) / 2) / mpmath.sqrt(poch(Q, nn))

        total = mpmath.fsum(
            b(j, k) * b(l, t) * mpmath.exp(2j * lam * x * h * (k - t) - (lam * h * (k + t) + p) ** 2 / (2 * lam))
            for k in range(j + 1) for t in range(l + 1)
        )
        return mpmath.conj(c(j)) * c(l) * total * mpmath.exp(-2 * lam * x**2)


@pytest.mark.parametrize("variant", list(BellVariant))
@pytest.mark.parametrize("n,m,q", [(0, 1, 0.5), (1, 2, 0.9), (2, 6, 0.001), (3, 1, 0.3)])
def test_both_paths_against_high_precision(variant, n, m, q):
    p = make_params(q=q)
    spec = BellSpec(variant, n, m, p, p)
    levels = {"n": n, "m": m}
    rng = np.random.default_rng(7)
    top = max(n, m)
    for _ in range(4):
        pt = PhasePoint4(rng.uniform(-1.2, 1.2), rng.uniform(-2 * top * p.lam * p.h - 1, 1),
                         rng.uniform(-1.2, 1.2), rng.uniform(-2 * top * p.lam * p.h - 1, 1))
        ref = []
        for weight, (_, (a1, a2), (b1, b2)) in zip((1, 2, 1), _PATTERNS[variant.family]):
            ka = mp_kernel(levels[a1], levels[a2], q, pt.x_A, pt.p_A)
            kb = mp_kernel(levels[b1], levels[b2], q, pt.x_B, pt.p_B)
            ref.append(float(weight * mpmath.re(ka * kb) / (4 * mpmath.pi * p.lam)))
        sep = bell_terms(spec, pt, "separable")
        direct = bell_terms(spec, pt, "direct")
        # the quadruple sum cancels large q^(-k) coefficients and keeps fewer digits
        for got_sep, got_direct, r in zip((sep.w1, sep.w2, sep.w3), (direct.w1, direct.w2, direct.w3), ref):
            assert float(got_sep) == pytest.approx(r, abs=1e-14)
            assert float(got_direct) == pytest.approx(r, abs=1e-10)


def test_mixed_particle_deformations_against_oracle():
    pa, pb = make_params(q=0.4), make_params(q=0.8)
    s = oracle.QuadratureSettings(oracle.default_settings(0.5).half_width, 16)
    for variant in BellVariant:
        spec = BellSpec(variant, 0, 2, pa, pb)
        for pt in (PhasePoint4(0.2, -0.5, -0.3, -1.0), PhasePoint4(-0.6, 0.4, 0.5, -2.0)):
            num = oracle.wigner_numeric_2p(lambda a, b: bell_wavefunction(spec, a, b), pt, s)
            assert bell_wigner(spec, pt) == pytest.approx(num.real, abs=1e-8)
            assert bell_wigner(spec, pt, "direct") == pytest.approx(num.real, abs=1e-8)


def test_psi_plus_lattice_against_oracle(p05):
    spec = BellSpec(BellVariant.PSI_PLUS, 0, 1, p05, p05)
    s = oracle.QuadratureSettings(oracle.default_settings(p05.lam).half_width, 16)
    f = lambda a, b: bell_wavefunction(spec, a, b)
    for xa, pa, xb, pb in itertools.product((-0.5, 0.0, 0.5), (-1.0, 0.0, 1.0), (-0.5, 0.0, 0.5), (-1.0, 0.0, 1.0)):
        pt = PhasePoint4(xa, pa, xb, pb)
        assert bell_wigner(spec, pt) == pytest.approx(oracle.wigner_numeric_2p(f, pt, s).real, abs=1e-6)


def test_interference_identities(p05):
    rng = np.random.default_rng(3)
    pts = tuple(rng.uniform(-1.5, 1.5, 50) for _ in range(4))
    for plus, minus in ((BellVariant.PSI_PLUS, BellVariant.PSI_MINUS), (BellVariant.PHI_PLUS, BellVariant.PHI_MINUS)):
        spec = BellSpec(plus, 1, 3, p05, p05)
        diff = bell_wigner(spec, pts) - bell_wigner(spec.with_variant(minus), pts)
        np.testing.assert_allclose(diff, 2 * bell_interference_term(spec, pts), rtol=1e-12, atol=1e-16)
        assert np.array_equal(bell_interference_term(spec, pts), bell_interference_term(spec.with_variant(minus), pts))


def test_interference_term_oscillates_at_midpoint():
    p = make_params(q=0.001)
    spec = BellSpec(BellVariant.PSI_PLUS, 2, 6, p, p)
    xs = np.linspace(-1.5, 1.5, 301)
    mid = midpoint_momentum(2, 6, p)
    w2 = bell_interference_term(spec, (xs, np.full_like(xs, mid), 0.0, mid))
    assert np.max(np.abs(w2)) > 1e-3
    assert np.sum(np.diff(np.sign(w2)) != 0) >= 4


@given(
    variant=st.sampled_from(list(BellVariant)), q=st.floats(0.01, 0.95),
    levels=st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(lambda t: t[0] != t[1]),
    coords=st.tuples(*(st.floats(-2, 2),) * 2, *(st.floats(-12, 3),) * 2),
)
@settings(max_examples=100, deadline=None)
def test_exchange_symmetry_and_bound(variant, q, levels, coords):
    p = make_params(q=q)
    spec = BellSpec(variant, *levels, p, p)
    xa, xb, pa, pb = coords
    w = bell_wigner(spec, PhasePoint4(xa, pa, xb, pb))
    assert w == pytest.approx(bell_wigner(spec, PhasePoint4(xb, pb, xa, pa)), abs=1e-12)
    assert abs(w) <= 1 / math.pi**2 + 1e-9


def test_grand_normalization(p05):
    assert bell_total_integral(BellSpec(BellVariant.PSI_PLUS, 0, 1, p05, p05)) == pytest.approx(1.0, abs=1e-4)
    assert bell_total_integral(BellSpec(BellVariant.PHI_MINUS, 1, 2, p05, p05)) == pytest.approx(1.0, abs=1e-4)


def test_centers():
    p = make_params(q=0.001)
    assert conditional_center(2, p) == pytest.approx(-2 * p.h)
    assert midpoint_momentum(2, 6, p) == pytest.approx(-4 * p.h)
