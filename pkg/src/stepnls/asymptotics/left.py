"""Left sector: plane wave of amplitude alpha with a t^{-1/2} correction
from the stationary point k0 > E2."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma

from .. import background as bg
from ..background import Params, Sector, classify_sector, sector_of_xi
from ..cauchyint import (_tau_integral, cauchy_cut_weighted, cauchy_halfline, composite, graded_edges,
                         halfline_sqrt_integral)
from .common import cut_log, reflection_source

NU_FLOOR = 1e-12


def k0_left(p: Params, xi: float) -> float:
    q = (4 * p.beta - xi) / 8
    return -(4 * p.beta + xi) / 8 + math.sqrt(p.alpha**2 / 2 + q * q)


def g_left(p: Params, xi: float, k):
    return (2 * np.asarray(k) - 2 * p.beta + xi) * bg.X(p, k)


def psi_k0_printed(p: Params, xi: float) -> float:
    """2 sqrt(2) (alpha^2/2 + ((4 beta - xi)/8)^2)^{1/4} / sqrt(X(k0)), which equals sqrt(g''(k0))."""
    q = (4 * p.beta - xi) / 8
    k0 = k0_left(p, xi)
    return 2 * math.sqrt(2) * (p.alpha**2 / 2 + q * q) ** 0.25 / math.sqrt(float(np.real(bg.X(p, k0))))


def psi_k0(p: Params, xi: float) -> float:
    """Local scale at k0: sqrt(2 g''(k0)), so that 2 t (g - g(k0)) ~ (psi sqrt(t) (k - k0))^2 / 2.

    This is sqrt(2) times ``psi_k0_printed``; the factor is fixed by the
    same scaling that gives sqrt(8 t) in the right sector (g'' = 4 there)
    and is confirmed by fitting the correction against the PDE solution.
    """
    return math.sqrt(2) * psi_k0_printed(p, xi)


def arg_gamma_i(nu: float) -> float:
    """arg Gamma(i nu), continuous in nu > 0."""
    return float(np.imag(loggamma(1j * nu)))


def _require_left(p: Params, xi: float):
    if sector_of_xi(p, xi) is not Sector.LEFT:
        raise ValueError(f"xi = {xi} is not in the left sector")


@dataclass(frozen=True)
class LeftQuantities:
    xi: float
    k0: float
    nu: float
    g_k0: float
    psi_k0: float
    Dinf: complex
    Db_k0: complex
    betaX: complex
    Delta_k0: float

    @property
    def Dinf_m2(self) -> complex:
        return self.Dinf ** -2


def _pieces_inf(p: Params, src, k0: float, shift: int, n_panels: int = 8):
    """The three integrals of the exponent with 1/(s - k) replaced by 1 (k -> infinity)."""
    h = src.log_one_minus_abs2
    K = src.K_max
    i1 = halfline_sqrt_integral(lambda s: h(s) / (-np.sqrt(p.E2 - s)), p.E1, -1, p.E1 + K)
    i2 = halfline_sqrt_integral(lambda s: h(s) / np.sqrt(s - p.E1), p.E2, 1, k0 - p.E2)
    th, w = composite(np.linspace(0, np.pi, n_panels + 1), 16)
    s = (p.E1 + p.E2) / 2 - (p.E2 - p.E1) / 2 * np.cos(th)
    i3 = np.dot(w, cut_log(src, shift)(s)) / 1j
    return i1, i2, i3


def D_left(p: Params, r, xi: float, k, *, shift: int = 0) -> complex:
    """D(xi, k) for k off (-inf, E1] and off [E2, k0]."""
    _require_left(p, xi)
    src = reflection_source(r)
    k0 = k0_left(p, xi)
    k = complex(k)
    if k.imag == 0 and (k.real <= p.E1 or p.E2 <= k.real <= k0 or p.E1 < k.real < p.E2):
        raise ValueError("k lies on a contour of D")
    h = src.log_one_minus_abs2
    i1 = cauchy_halfline(h, p.E1, k, other=p.E2, K_max=src.K_max)
    # [E2, k0]: square-root substitution at E2, panels graded toward k0 on the upper half
    mid = (p.E2 + k0) / 2
    i2 = halfline_sqrt_integral(lambda s: h(s) / (np.sqrt(s - p.E1) * (s - k)), p.E2, 1, mid - p.E2)
    sn, wn = composite(graded_edges(mid, k0, k0, max(abs(k - k0), 1e-14) / 4), 16)
    i2 += np.dot(wn, h(sn) / (np.real(bg.X(p, sn)) * (sn - k)))
    i3 = cauchy_cut_weighted(cut_log(src, shift), p.E1, p.E2, k)
    return complex(np.exp(complex(bg.X(p, k)) / (2j * np.pi) * (i1 + i2 + i3)))


def Dinf_left(p: Params, r, xi: float, *, shift: int = 0) -> complex:
    src = reflection_source(r)
    i1, i2, i3 = _pieces_inf(p, src, k0_left(p, xi), shift)
    return complex(np.exp(-(i1 + i2 + i3) / (2j * np.pi)))


def Db_left(p: Params, r, xi: float, *, shift: int = 0) -> complex:
    """lim_{k -> k0+} (k - k0)^{-i nu} D(xi, k).

    The part of the [E2, k0] integral that is singular at k0 is
    f(k0) log((k - k0)/(k - E2)) with f = log(1-|r|^2)/X; the log(k - k0)
    term cancels the prefactor and the rest is finite at k = k0.
    """
    src = reflection_source(r)
    k0 = k0_left(p, xi)
    h = src.log_one_minus_abs2
    Xk0 = float(np.real(bg.X(p, k0)))
    hk0 = float(h(np.array([k0]))[0])
    fk0 = hk0 / Xk0
    i1 = cauchy_halfline(h, p.E1, k0, other=p.E2, K_max=src.K_max)
    i3 = cauchy_cut_weighted(cut_log(src, shift), p.E1, p.E2, k0)

    def fun(tau):
        s = p.E2 + tau * tau
        # 2 tau (f(s) - f(k0)) / (s - k0), with tau f(s) = h(s)/sqrt(s - E1)
        return 2 * (h(s) / np.sqrt(s - p.E1) - tau * fk0) / (s - k0)

    reg = _tau_integral(fun, math.sqrt(k0 - p.E2))
    total = i1 + i3 + reg - fk0 * math.log(k0 - p.E2)
    return complex(np.exp(Xk0 / (2j * np.pi) * total))


def left_quantities(p: Params, r, xi: float, *, shift: int = 0) -> LeftQuantities:
    _require_left(p, xi)
    src = reflection_source(r)
    k0 = k0_left(p, xi)
    rk0 = complex(src(np.array([k0]))[0])
    nu = -float(src.log_one_minus_abs2(np.array([k0]))[0]) / (2 * np.pi)
    if nu < NU_FLOOR:
        betaX = 0j
    else:
        betaX = math.sqrt(nu) * np.exp(1j * (3 * np.pi / 4 - np.angle(-rk0) + arg_gamma_i(nu)))
    return LeftQuantities(
        xi=xi, k0=k0, nu=nu,
        g_k0=float(np.real(g_left(p, xi, k0))),
        psi_k0=psi_k0(p, xi),
        Dinf=Dinf_left(p, src, xi, shift=shift),
        Db_k0=Db_left(p, src, xi, shift=shift),
        betaX=complex(betaX),
        Delta_k0=float(np.real(bg.Delta(p, k0))),
    )


def u_a(p: Params, q: LeftQuantities, x: float, t: float) -> complex:
    """The coefficient of t^{-1/2} in the left-sector asymptotics."""
    nu, psi, d2 = q.nu, q.psi_k0, q.Delta_k0**2
    e = np.exp(2j * t * q.g_k0)
    t1 = 1j * t ** (-1j * nu) * q.betaX * (d2 + 1) ** 2 / (
        2 * e * d2 * psi ** (1 + 2j * nu) * q.Db_k0 ** -2)
    t2 = 1j * t ** (1j * nu) * np.conj(q.betaX) * (d2 - 1) ** 2 / (
        2 / e * d2 * psi ** (1 - 2j * nu) * q.Db_k0**2)
    return complex(-q.Dinf_m2 * bg.plane_wave(p, x, t) * (t1 + t2))


def _require_left_xt(p: Params, x: float, t: float):
    if classify_sector(p, x, t) is not Sector.LEFT:
        raise ValueError(f"(x, t) = ({x}, {t}) is not in the left sector")


def u_left(p: Params, r, x: float, t: float, *, shift: int = 0):
    """(leading, correction) with correction = u_a / sqrt(t)."""
    _require_left_xt(p, x, t)
    q = left_quantities(p, r, x / t, shift=shift)
    lead = -q.Dinf_m2 * p.alpha * bg.plane_wave(p, x, t)
    return complex(lead), u_a(p, q, x, t) / math.sqrt(t)


def ux_left(p: Params, r, x: float, t: float, *, shift: int = 0) -> complex:
    _require_left_xt(p, x, t)
    dinf = Dinf_left(p, reflection_source(r), x / t, shift=shift)
    return complex(-dinf ** -2 * 2j * p.beta * p.alpha * bg.plane_wave(p, x, t))


def J_integral(p: Params, r, *, shift: int = 0):
    """(J, nearest odd integer to J/pi^2, residual)."""
    src = reflection_source(r)
    h = src.log_one_minus_abs2
    K = src.K_max
    i1 = halfline_sqrt_integral(lambda s: h(s) / (-np.sqrt(p.E2 - s)), p.E1, -1, p.E1 + K)
    i2 = halfline_sqrt_integral(lambda s: h(s) / np.sqrt(s - p.E1), p.E2, 1, K - p.E2)
    th, w = composite(np.linspace(0, np.pi, 9), 16)
    s = (p.E1 + p.E2) / 2 - (p.E2 - p.E1) / 2 * np.cos(th)
    # i arg r / X_+ ds = arg r d theta
    i3 = np.dot(w, cut_log(src, shift).arg(s) + 2 * np.pi * shift)
    J = float(np.real(i1 + i2 + i3))
    ratio = J / np.pi**2
    odd = int(2 * round((ratio - 1) / 2) + 1)
    return J, odd, abs(ratio - odd)
