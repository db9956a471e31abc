import math

import numpy as np
import pytest
from scipy.special import loggamma

from stepnls import background as bg
from stepnls.asymptotics.left import (D_left, Db_left, Dinf_left, J_integral, arg_gamma_i, g_left,
                                      k0_left, left_quantities, psi_k0, psi_k0_printed, u_a, u_left,
                                      ux_left)
from stepnls.background import make_params
from stepnls.scattering import Reflection

XI = -4.0
EULER_GAMMA = 0.5772156649015329


def synthetic_cut_only(p, phase=0.4):
    """r = exp(i phase) on the cut and zero elsewhere."""
    def cf(k):
        k = np.asarray(k, float)
        cut = bg.on_cut(p, k)
        r = np.where(cut, np.exp(1j * phase), 0j)
        return np.ones(k.shape, complex), r

    out = Reflection(p, closed_form=cf)
    out.K_max = 50.0
    return out


def test_k0_value():
    p = make_params(1.0, 1.0)
    k0 = k0_left(p, 0.0)
    assert k0 == pytest.approx(-0.5 + math.sqrt(0.75), abs=1e-15)
    assert k0 > p.E2


def test_gamma_modulus_identity():
    nu = 0.1
    mod2 = np.exp(2 * loggamma(1j * nu).real)
    assert abs(mod2 - math.pi / (nu * math.sinh(math.pi * nu))) < 1e-8
    assert math.sqrt(mod2) == pytest.approx(9.918, abs=1e-3)


def test_gamma_argument_small_nu():
    # arg Gamma(i nu) = -pi/2 - gamma nu + O(nu^3)
    for nu in (1e-3, 1e-4):
        assert abs(arg_gamma_i(nu) + math.pi / 2 + EULER_GAMMA * nu) < 1e-9


def test_gamma_argument_recurrence():
    nu = 0.37
    # Gamma(1 + i nu) = i nu Gamma(i nu)
    assert float(np.angle(np.exp(loggamma(1 + 1j * nu) - loggamma(1j * nu)))) == pytest.approx(math.pi / 2)


def test_stationary_point(p_default):
    k0 = k0_left(p_default, XI)
    h = 1e-5
    d = (g_left(p_default, XI, k0 + h) - g_left(p_default, XI, k0 - h)) / (2 * h)
    assert abs(d) < 1e-6


def test_psi_is_sqrt_twice_second_derivative(p_default):
    for xi in (-4.0, -1.0, 0.0):
        k0 = k0_left(p_default, xi)
        h = 1e-4
        g2 = np.real(g_left(p_default, xi, k0 + h) - 2 * g_left(p_default, xi, k0)
                     + g_left(p_default, xi, k0 - h)) / h**2
        assert psi_k0(p_default, xi) ** 2 == pytest.approx(2 * g2, rel=1e-6)
        assert psi_k0_printed(p_default, xi) ** 2 == pytest.approx(g2, rel=1e-6)


@pytest.fixture(scope="module")
def lq(p_default, r_tanh):
    return left_quantities(p_default, r_tanh, XI)


def test_Dinf_unimodular(p_default, r_tanh):
    for xi in (-10.0, -4.0, 0.0):
        assert abs(abs(Dinf_left(p_default, r_tanh, xi)) - 1) < 1e-6


def test_Dinf_limit(p_default, r_tanh):
    assert abs(Dinf_left(p_default, r_tanh, -50.0) ** -2 + 1) < 1e-2


def test_D_tends_to_Dinf(p_default, r_tanh, lq):
    assert abs(D_left(p_default, r_tanh, XI, 1e6j) - lq.Dinf) < 1e-4


def test_D_schwarz_symmetry(p_default, r_tanh):
    k = 0.8 + 0.6j
    d = D_left(p_default, r_tanh, XI, k) * np.conj(D_left(p_default, r_tanh, XI, np.conj(k)))
    assert abs(d - 1) < 1e-6


def test_Db_against_richardson(p_default, r_tanh, lq):
    k0, nu = lq.k0, lq.nu
    v = [D_left(p_default, r_tanh, XI, k0 + 2.0**-m) * (2.0**-m) ** (-1j * nu) for m in range(10, 18, 2)]
    rich = [(4 * b - a) / 3 for a, b in zip(v, v[1:])]
    assert abs(rich[-1] - lq.Db_k0) < 1e-7


def test_leading_modulus_is_alpha(p_default, r_tanh):
    for x, t in ((-80.0, 20.0), (-300.0, 30.0), (-20.0, 40.0)):
        lead, _ = u_left(p_default, r_tanh, x, t)
        assert abs(abs(lead) - p_default.alpha) < 1e-6


def test_branch_shift_invariance(p_default, r_tanh):
    t = 20.0
    a = u_left(p_default, r_tanh, XI * t, t)
    b = u_left(p_default, r_tanh, XI * t, t, shift=1)
    assert abs(a[0] - b[0]) < 1e-8 and abs(a[1] - b[1]) < 1e-8


def test_derivative_leading_term(p_default, r_tanh):
    x, t = -60.0, 20.0
    lead, _ = u_left(p_default, r_tanh, x, t)
    ux = ux_left(p_default, r_tanh, x, t)
    assert ux / lead == pytest.approx(2j * p_default.beta, abs=1e-12)
    assert abs(ux) == pytest.approx(2 * abs(p_default.beta) * p_default.alpha, abs=1e-6)
    p0 = make_params(1.0, 0.0)
    assert ux_left(p0, synthetic_cut_only(p0), -60.0, 20.0) == 0


def test_zero_reflection_kills_correction(p_default):
    r = synthetic_cut_only(p_default)
    q = left_quantities(p_default, r, XI)
    assert q.nu == 0 and q.betaX == 0
    assert u_a(p_default, q, XI * 20, 20.0) == 0


@pytest.mark.parametrize("which", ["tanh", "pure"])
def test_J_parity_zero_beta(which, r_tanh_zero, r_pure_zero, p_zero):
    r = r_tanh_zero if which == "tanh" else r_pure_zero
    J, odd, res = J_integral(p_zero, r)
    assert odd % 2 == 1
    assert res < 1e-2


def test_J_parity_default(p_default, r_tanh):
    _, odd, res = J_integral(p_default, r_tanh)
    assert odd % 2 == 1 and res < 1e-2


def test_J_parity_branch_shift(p_default, r_tanh):
    J0, _, _ = J_integral(p_default, r_tanh)
    J1, _, res = J_integral(p_default, r_tanh, shift=1)
    # the shift moves J by 2 pi^2, which preserves the odd parity
    assert (J1 - J0) / np.pi**2 == pytest.approx(2.0, abs=1e-8)
    assert res < 1e-2


def test_rejects_points_outside_sector(p_default, r_tanh):
    with pytest.raises(ValueError):
        u_left(p_default, r_tanh, 3.0, 1.0)
