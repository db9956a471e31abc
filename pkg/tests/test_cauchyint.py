import math

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad

from stepnls import background as bg
from stepnls.background import make_params
from stepnls.cauchyint import (cauchy_cut_weighted, cauchy_halfline, cauchy_sqrt_endpoint,
                               endpoint_expansion, gauss_jacobi, h_closed, h_coeff,
                               stieltjes_dlog)


def cquad(f, a, b, **kw):
    re = quad(lambda s: f(s).real, a, b, **kw)[0]
    im = quad(lambda s: f(s).imag, a, b, **kw)[0]
    return re + 1j * im


@pytest.mark.parametrize("a,b", [(-0.5, 0.0), (-0.5, 1.5), (0.3, -0.2)])
def test_gauss_jacobi_exact_for_polynomials(a, b):
    x, w = gauss_jacobi(10, a, b)
    for deg in range(0, 19):
        exact = quad(lambda t: t**deg, -1, 1, weight="alg", wvar=(b, a))[0]
        assert np.dot(w, x**deg) == pytest.approx(exact, abs=1e-12)


def test_h_coefficients_table():
    assert [h_coeff(0.0, 1.0, n) for n in range(3)] == pytest.approx([2, -2 / 3, 2 / 5])


def test_h_closed_matches_brute_force():
    z = 2.5 + 0.3j
    brute = cquad(lambda s: 1 / (s - z), 0.0, 1.0, weight="alg", wvar=(0, -0.5))
    assert h_closed(0.0, 1.0, z) == pytest.approx(brute, abs=1e-12)


def test_endpoint_closed_form_value():
    v = cauchy_sqrt_endpoint(lambda s: np.ones_like(s), 0.0, 1.0, 2.0)
    assert v == pytest.approx(-math.pi / 2, abs=1e-10)


def test_endpoint_near_singularity():
    z = 1 + 1e-4
    v = cauchy_sqrt_endpoint(lambda s: np.ones_like(s), 0.0, 1.0, z)
    approx = -math.pi / math.sqrt(z - 1) + 2
    assert abs(v - approx) / abs(approx) < 1e-3


def test_endpoint_linearity():
    g = lambda s: np.cos(3 * s) + s**2  # noqa: E731
    z = 3 + 1j
    assert abs(cauchy_sqrt_endpoint(lambda s: 2.5 * g(s), 0, 1, z)
               - 2.5 * cauchy_sqrt_endpoint(g, 0, 1, z)) < 1e-12


def test_endpoint_matches_high_precision_near_interval():
    mp.mp.dps = 30
    for z in (0.5 + 0.01j, 0.5 + 0.001j, 0.2 + 1e-4j, 1.001, 0.999 + 1e-3j, -0.01 + 1e-3j):
        zz = mp.mpc(z.real, z.imag)
        tf = mp.sqrt(1 - min(max(z.real, 0), 1))
        pts = sorted({0, max(tf - 0.05, 0), tf, min(tf + 0.05, 1), 1})
        # s = 1 - tau^2 removes the square-root weight
        ref = complex(mp.quad(lambda t: 2 * mp.exp(1 - t * t) / (1 - t * t - zz), pts))
        v = cauchy_sqrt_endpoint(np.exp, 0.0, 1.0, z)
        assert abs(v - ref) < 1e-12 * abs(ref)


def test_expansion_constant_density():
    ex = endpoint_expansion(lambda s: np.ones_like(s), [1.0, 0.0], 0.0, 1.0, 1)
    assert ex.singular_coeffs[0] == pytest.approx(-math.pi)
    assert ex.singular_coeffs[1] == pytest.approx(0.0, abs=1e-14)
    assert ex.regular_coeffs[0] == pytest.approx(2.0, abs=1e-12)


def test_expansion_error_ratio_decreases():
    ex = endpoint_expansion(np.exp, [math.e] * 8, 0.0, 1.0, 2)
    ratios = []
    for m in range(4, 11):
        z = 1 + 2.0**-m
        ratios.append(abs(cauchy_sqrt_endpoint(np.exp, 0.0, 1.0, z) - ex(z)) / (z - 1) ** 1.5)
    assert all(b < a for a, b in zip(ratios, ratios[1:]))


def test_left_endpoint_expansion_against_brute_force():
    g = lambda s: np.exp(-s)  # noqa: E731
    ex = endpoint_expansion(g, [1.0, -1.0, 1.0, -1.0, 1.0], 0.0, 1.0, 2, endpoint="left")
    ratios = []
    for m in range(4, 9):
        z = -(2.0**-m)
        brute = quad(lambda s: g(s) / (s - z), 0.0, 1.0, weight="alg", wvar=(-0.5, 0),
                     limit=400, epsabs=1e-14)[0]
        ratios.append(abs(brute - ex(z)) / abs(z) ** 1.5)
    assert ratios[-1] < ratios[0]


def test_cut_integral_of_inverse_root():
    p = make_params(1.0, 0.0)
    k = 5.0
    # a density linear in s turns the Cauchy kernel into the plain weight
    v = cauchy_cut_weighted(lambda s: s - k, p.E1, p.E2, k)
    assert v == pytest.approx(-math.pi * 1j, abs=1e-12)


def test_cut_weighted_half_identity():
    p = make_params(1.0, 0.6)
    k0 = 0.1
    v = cauchy_cut_weighted(lambda s: np.ones_like(s), p.E1, p.E2, k0, "plus")
    assert bg.X(p, k0, "plus") / (2j * math.pi) * v == pytest.approx(0.5, abs=1e-12)


def test_partial_cut_identity():
    # the same identity on [E1, k0] with the square root of that interval
    E1, k0 = -1.6, 0.2
    v = cauchy_cut_weighted(lambda s: s - 7.0, E1, k0, 7.0)
    assert v == pytest.approx(-math.pi * 1j, abs=1e-12)


def test_cut_weighted_against_brute_force():
    Ea, Eb = -1.6, 0.4
    dens = lambda s: np.cos(s) + 0.3 * s  # noqa: E731
    for k in (1.5 + 0.2j, -0.5 + 0.01j, 0.45, -1.65):
        v = cauchy_cut_weighted(dens, Ea, Eb, k)
        brute = cquad(lambda s: dens(s) / (1j * (s - k)), Ea, Eb, weight="alg", wvar=(-0.5, -0.5),
                      limit=400, epsabs=1e-13)
        assert abs(v - brute) < 1e-8


def test_plemelj_jump():
    Ea, Eb = -1.6, 0.4
    dens = lambda s: np.exp(s)  # noqa: E731
    for k in np.linspace(Ea + 0.2, Eb - 0.2, 5):
        jump = cauchy_cut_weighted(dens, Ea, Eb, k, "plus") - cauchy_cut_weighted(dens, Ea, Eb, k, "minus")
        Xp = 1j * math.sqrt((k - Ea) * (Eb - k))
        assert abs(jump - 2j * math.pi * dens(k) / Xp) < 1e-10
        eps = 1e-7
        assert abs(cauchy_cut_weighted(dens, Ea, Eb, k + 1j * eps)
                   - cauchy_cut_weighted(dens, Ea, Eb, k, "plus")) < 1e-5


def test_cut_superposition():
    Ea, Eb, k = -1.0, 1.0, 0.3 + 0.02j
    f, g = np.sin, np.exp
    lhs = cauchy_cut_weighted(lambda s: 2 * f(s) - 3 * g(s), Ea, Eb, k)
    rhs = 2 * cauchy_cut_weighted(f, Ea, Eb, k) - 3 * cauchy_cut_weighted(g, Ea, Eb, k)
    assert abs(lhs - rhs) < 1e-12


def test_halfline_zero_density():
    assert cauchy_halfline(lambda s: 0 * s, -1.0, 1j, other=1.0, K_max=50) == 0


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_halfline_against_brute_force():
    E1, E2 = -1.0, 1.0

    def brute(dens, k):
        f = lambda s: dens(s) / (-np.sqrt((E1 - s) * (E2 - s)) * (s - k))  # noqa: E731
        return cquad(f, -np.inf, E1, limit=800, epsabs=1e-13, epsrel=1e-12)

    dens = lambda s: 1 / (1 + s * s) ** 2  # noqa: E731
    v = cauchy_halfline(dens, E1, 1j, other=E2, K_max=1e4)
    assert abs(v - brute(dens, 1j)) < 1e-8
    dens = lambda s: np.log(np.abs(E1 - s) + 1e-300) * np.exp(s - E1)  # noqa: E731
    v = cauchy_halfline(dens, E1, 0.5 + 0.5j, other=E2, K_max=60)
    assert abs(v - brute(dens, 0.5 + 0.5j)) < 1e-6


def test_stieltjes_zero():
    assert stieltjes_dlog(lambda s: 0 * s, 0.3, 50.0) == 0


def test_stieltjes_truncated_gaussian():
    k0 = 0.3
    h = lambda s: np.log(1 - 0.5 * np.exp(-(s - k0) ** 2))  # noqa: E731
    v = stieltjes_dlog(h, k0, 40.0)
    # Riemann-Stieltjes partial sums on a fine mesh in u = k0 - s
    u = np.concatenate([np.geomspace(1e-12, 1, 200001)[::-1], [0.0]])
    s = k0 - u
    hs = h(s)
    mid = 0.5 * (u[:-1] + u[1:])
    rs = np.sum(np.log(mid) * np.diff(hs))
    # far part (-40, k0-1) by parts on a plain mesh
    sf = np.linspace(-40, k0 - 1, 400001)
    hf = h(sf)
    rs += np.sum(np.log(k0 - 0.5 * (sf[:-1] + sf[1:])) * np.diff(hf))
    assert abs(v - rs) < 1e-5
    assert abs(stieltjes_dlog(h, k0, 40.0, n=32) - v) < 1e-6
