import math
import warnings

import numpy as np
import pytest

from qdeform import oracle
from qdeform.bell import BellSpec, BellVariant, PhasePoint4, bell_wavefunction, bell_wigner
from qdeform.errors import DomainError
from qdeform.oscillator import PureStateSpec, make_params, psi
from qdeform.wigner2 import SuperpositionSpec, wigner_superposition

LAM = 0.5


def ground(x):
    return (2 * LAM / math.pi) ** 0.25 * np.exp(-LAM * np.asarray(x) ** 2)


@pytest.fixture
def settings():
    return oracle.default_settings(LAM)


def test_settings_validation():
    with pytest.raises(DomainError):
        oracle.QuadratureSettings(0.0)
    with pytest.raises(DomainError):
        oracle.QuadratureSettings(1.0, points_per_unit=8)
    s = oracle.QuadratureSettings(1.0, 16).with_frequency(100.0)
    assert s.points_per_unit >= 16 * 100 / (2 * math.pi)


@pytest.mark.parametrize("rule", list(oracle.Rule))
def test_rules_integrate_gaussian(rule):
    s = oracle.QuadratureSettings(12.0, 32, rule)
    y, w = oracle.nodes_and_weights(s)
    assert np.sum(w * np.exp(-(y**2))) == pytest.approx(math.sqrt(math.pi), rel=1e-13)


def test_ground_state_calibration(settings):
    # self-calibration: the oracle must reproduce the analytic Gaussian first
    assert oracle.wigner_numeric_1p(ground, 0.0, 0.0, settings) == pytest.approx(1 / math.pi, abs=1e-10)
    for x, p in [(0.5, -1.0), (-1.3, 2.2), (2.0, 0.1)]:
        expected = math.exp(-2 * LAM * x**2 - p**2 / (2 * LAM)) / math.pi
        assert oracle.wigner_numeric_1p(ground, x, p, settings) == pytest.approx(expected, abs=1e-9)


def test_two_particle_separable_gaussians(settings):
    f = lambda a, b: ground(a) * ground(b)
    pt = PhasePoint4(0.3, -0.4, -0.8, 1.1)
    expected = math.exp(-2 * LAM * 0.3**2 - 0.4**2 / (2 * LAM)) * math.exp(-2 * LAM * 0.8**2 - 1.1**2 / (2 * LAM))
    small = oracle.QuadratureSettings(settings.half_width, 16)
    assert oracle.wigner_numeric_2p(f, pt, small) == pytest.approx(expected / math.pi**2, abs=1e-8)


def test_matches_closed_form_pure_state(settings):
    p = make_params(q=0.5)
    f = lambda x: psi(PureStateSpec(2, p), x)
    value = oracle.wigner_numeric_1p(f, 0.4, -1.0, settings)
    assert abs(value.imag) < 1e-10 * (1 + abs(value.real))
    assert value.real == pytest.approx(wigner_superposition(SuperpositionSpec.pure(2, p), 0.4, -1.0), abs=1e-8)


def test_psi_minus_diagonal_matches_closed_form():
    p = make_params(q=0.5)
    spec = BellSpec(BellVariant.PSI_MINUS, 0, 1, p, p)
    s = oracle.QuadratureSettings(oracle.default_settings(p.lam).half_width, 16)
    for t, pp in [(0.0, -0.5), (0.4, -1.2), (-0.7, 0.3)]:
        pt = PhasePoint4(t, pp, t, pp)
        num = oracle.wigner_numeric_2p(lambda a, b: bell_wavefunction(spec, a, b), pt, s)
        assert num.real == pytest.approx(bell_wigner(spec, pt), abs=1e-8)


def test_inner_products():
    p = make_params(q=0.5)
    s = oracle.default_settings(p.lam)
    f0 = lambda x: psi(PureStateSpec(0, p), x)
    f1 = lambda x: psi(PureStateSpec(1, p), x)
    assert oracle.inner_product(f0, f0, s) == pytest.approx(1.0, abs=1e-10)
    assert abs(oracle.inner_product(f0, f1, s)) < 1e-8
    p3 = make_params(q=0.001)
    f2 = lambda x: psi(PureStateSpec(2, p3), x)
    assert oracle.inner_product(f2, f2, oracle.settings_for(p3, 2)) == pytest.approx(1.0, abs=1e-8)


def test_marginal_of_ground_state(settings):
    w = lambda x, p: np.exp(-2 * LAM * x**2 - p**2 / (2 * LAM)) / math.pi
    assert oracle.marginal_p(w, 0.0, settings) == pytest.approx(math.sqrt(2 * LAM / math.pi), abs=1e-9)
    assert oracle.marginal_p(w, 1.0, settings) == pytest.approx(math.sqrt(2 * LAM / math.pi) * math.exp(-2 * LAM), abs=1e-9)


def test_marginal_of_fig1_superposition():
    p = make_params(q=0.001)
    spec = SuperpositionSpec(1 / math.sqrt(2), 1 / math.sqrt(2), 3, 5, p, p)
    s = oracle.QuadratureSettings(1.0, 64)
    f = lambda x: spec.amp_a * psi(PureStateSpec(3, p), x) + spec.amp_b * psi(PureStateSpec(5, p), x)
    for x in np.linspace(-1.5, 1.5, 7):
        m = oracle.marginal_p(lambda xx, pp: wigner_superposition(spec, xx, pp), x, s, (-5 * p.h - 6.0, 6.0))
        assert m == pytest.approx(abs(f(x)) ** 2, abs=1e-7)


def test_doubling_density_is_stable():
    p = make_params(q=0.5)
    f = lambda x: psi(PureStateSpec(3, p), x)
    base = oracle.default_settings(p.lam)
    dense = oracle.QuadratureSettings(base.half_width, 2 * base.points_per_unit)
    for x, pp in [(0.1, -0.2), (0.9, -2.3)]:
        a = oracle.wigner_numeric_1p(f, x, pp, base)
        b = oracle.wigner_numeric_1p(f, x, pp, dense)
        assert abs(a - b) < 1e-10


def test_truncation_is_reported():
    narrow = oracle.QuadratureSettings(1.0, 32)
    with pytest.warns(oracle.TruncationWarning):
        oracle.wigner_numeric_1p(ground, 0.0, 0.0, narrow)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        oracle.wigner_numeric_1p(ground, 0.0, 0.0, oracle.default_settings(LAM))
