import math

import numpy as np
import pytest

from stepnls.asymptotics import (family_params, halfline_family, matching_report, right_quantities,
                                 u_right)
from stepnls.asymptotics.right import nu_from_abs_r
from stepnls.background import make_params
from stepnls.scattering import Reflection


def constant_modulus(p, mod=0.5):
    """Synthetic reflection with |r| = mod and a smooth phase everywhere."""
    def cf(k):
        k = np.asarray(k, float)
        a = np.full(k.shape, 1 / math.sqrt(1 - mod**2), complex)
        return a, mod * np.exp(1j * 0.3 * k)

    out = Reflection(p, closed_form=cf)
    out.K_max = 50.0
    return out


def vanishing(p):
    return Reflection(p, closed_form=lambda k: (np.ones(np.shape(k), complex), np.zeros(np.shape(k), complex)))


def test_k0_right(p_default):
    q = right_quantities(p_default, constant_modulus(p_default), 8.0)
    assert q.k0 == -2.0


def test_nu_hat_value():
    assert nu_from_abs_r(0.5) == pytest.approx(-math.log(0.75) / (2 * math.pi), rel=1e-14)
    assert nu_from_abs_r(0.5) == pytest.approx(0.04578, abs=1e-5)


def test_modulus_synthetic(p_default):
    r = constant_modulus(p_default)
    nu = nu_from_abs_r(0.5)
    assert abs(u_right(p_default, r, 8.0, 1.0)) == pytest.approx(0.1513, abs=1e-4)
    for t in (5.0, 20.0, 40.0):
        assert abs(u_right(p_default, r, 8.0 * t, t)) * math.sqrt(8 * t) == pytest.approx(2 * math.sqrt(nu), rel=1e-12)


def test_zero_reflection_gives_zero(p_default):
    assert u_right(p_default, vanishing(p_default), 80.0, 10.0) == 0


def test_phase_rate(p_default):
    # at fixed xi the phase grows like xi^2 t / 4 - nu_hat log t
    r = constant_modulus(p_default)
    q = right_quantities(p_default, r, 8.0)
    t, h = 10.0, 1e-4
    rate = (q.phi(t + h) - q.phi(t - h)) / (2 * h)
    assert rate == pytest.approx(8.0**2 / 4 - q.nu_hat / t, rel=1e-8)


def test_rejects_left_points(p_default):
    with pytest.raises(ValueError):
        u_right(p_default, vanishing(p_default), -10.0, 1.0)


def test_halfline_family_values():
    c, beta = halfline_family(1.0, -4.0)
    assert c == pytest.approx(1j * math.sqrt(2), abs=1e-15)
    assert beta == pytest.approx(math.sqrt(2) / 2, abs=1e-15)


@pytest.mark.parametrize("omega", [-3.0, -2.0, 0.0])
def test_halfline_family_rejects(omega):
    with pytest.raises(ValueError):
        halfline_family(1.0, omega)


@pytest.mark.parametrize("alpha,omega", [(1.0, -4.0), (0.5, -2.0), (2.0, -20.0)])
def test_halfline_pair_is_consistent(alpha, omega):
    # the plane-wave background with this beta has the requested frequency,
    # and u_x / u = 2 i beta on it
    c, beta = halfline_family(alpha, omega)
    p = family_params(alpha, omega)
    assert p.omega == pytest.approx(omega, rel=1e-14)
    assert c / alpha == pytest.approx(2j * beta, abs=1e-14)
    assert p.beta == beta


def test_family_places_origin_in_left_sector():
    from stepnls.background import Sector, sector_of_xi
    p = family_params(1.0, -4.0)
    assert sector_of_xi(p, 0.0) is Sector.LEFT


@pytest.mark.parametrize("delta", [0.1, 0.25])
def test_matching_across_sectors(delta, r_tanh):
    p = make_params(1.0, 0.6, delta)
    for row in matching_report(p, r_tanh):
        assert row["residual"] < 1e-3
