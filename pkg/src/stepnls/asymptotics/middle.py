"""Middle sector: genus-0 g-function on [E1, k0] and the modulated plane wave."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..background import Params, Sector, classify_sector, sector_of_xi
from ..cauchyint import (cauchy_cut_weighted, cauchy_halfline, composite, cut_values,
                         halfline_sqrt_integral)
from .common import cut_log, reflection_source


def k0_middle(p: Params, xi: float) -> float:
    return (p.beta + p.alpha - xi) / 3


def g_inf(p: Params, xi: float) -> float:
    return (xi * xi - 4 * p.E1 * xi - 8 * p.E1**2) / 12


def scriptX(p: Params, xi: float, k, side: str = "interior"):
    """sqrt((k - E1)(k - k0)), cut [E1, k0], ~ k at infinity."""
    return cut_values(p.E1, k0_middle(p, xi), k, side)


def g_middle(p: Params, xi: float, k, side: str = "interior"):
    k0 = k0_middle(p, xi)
    kc = np.asarray(k, dtype=complex)
    if np.any((kc.imag == 0) & ((kc.real == p.E1) | (kc.real == k0))):
        raise ValueError("g is not evaluated at the branch points")
    if side != "interior" and not np.all((kc.imag == 0) & (kc.real > p.E1) & (kc.real < k0)):
        raise ValueError("side given for k off (E1, k0)")
    return 2 * (kc - k0) * scriptX(p, xi, kc, side)


def _require_middle(p: Params, xi: float):
    if sector_of_xi(p, xi) is not Sector.MIDDLE:
        raise ValueError(f"xi = {xi} is not in the middle sector")


def _theta_rule(n_panels: int = 8):
    return composite(np.linspace(0.0, np.pi, n_panels + 1), 16)


def _theta_nodes(a: float, b: float, th):
    return (a + b) / 2 - (b - a) / 2 * np.cos(th)


@dataclass(frozen=True)
class MiddleQuantities:
    xi: float
    k0: float
    g_inf: float
    C_k0: complex
    Dinf: complex
    errors: dict = field(default_factory=dict, compare=False)

    @property
    def Dinf_m2(self) -> complex:
        return self.Dinf ** -2


def _integrals(p: Params, src, xi: float, shift: int, n_panels: int):
    k0 = k0_middle(p, xi)
    L = k0 - p.E1
    h = src.log_one_minus_abs2
    logr = cut_log(src, shift)
    K = src.K_max
    # integral of h / scriptX over (-inf, E1]; scriptX = -sqrt(E1-s) sqrt(k0-s) there
    a_inf = halfline_sqrt_integral(lambda s: h(s) / (-np.sqrt(k0 - s)), p.E1, -1, p.E1 + K)
    # integral of log r / scriptX_+ over the cut: ds / scriptX_+ = d theta / i
    th, w = _theta_rule(n_panels)
    s = _theta_nodes(p.E1, k0, th)
    lr = logr(s)
    b_inf = np.dot(w, lr) / 1j
    a_k0 = cauchy_halfline(h, p.E1, k0, other=k0, K_max=K)
    ell = complex(logr(np.array([k0]))[0])
    quotient = np.dot(w, (lr - ell) / (s - k0) - ell / (L * (1 + np.sin(th / 2))))
    return a_inf, b_inf, a_k0, quotient, ell


def quotient_integral(logr, E1: float, k0: float, n_panels: int = 8) -> complex:
    """Integral over (E1, k0) of (logr(s)/sqrt(s-E1) - logr(k0)/sqrt(k0-E1)) / ((s-k0) sqrt(k0-s))."""
    L = k0 - E1
    th, w = _theta_rule(n_panels)
    s = _theta_nodes(E1, k0, th)
    ell = complex(np.asarray(logr(np.array([k0])))[0])
    return np.dot(w, (logr(s) - ell) / (s - k0) - ell / (L * (1 + np.sin(th / 2))))


def middle_quantities(p: Params, r, xi: float, *, shift: int = 0) -> MiddleQuantities:
    _require_middle(p, xi)
    src = reflection_source(r)
    k0 = k0_middle(p, xi)
    L = k0 - p.E1
    res = []
    for n_panels in (8, 16):
        a_inf, b_inf, a_k0, quotient, ell = _integrals(p, src, xi, shift, n_panels)
        dinf = np.exp(-(a_inf + b_inf) / (2j * np.pi))
        C = math.sqrt(L) / (2 * np.pi) * (1j * a_k0 + quotient + 2 * ell / L)
        res.append((dinf, C))
    (d1, c1), (d2, c2) = res
    return MiddleQuantities(xi, k0, g_inf(p, xi), complex(c2), complex(d2),
                            {"C_k0": abs(c2 - c1), "Dinf": abs(d2 - d1)})


def scriptD(p: Params, r, xi: float, k, side: str = "interior", *, shift: int = 0) -> complex:
    """The scalar that conjugates the jump r on (E1, k0) and 1 - |r|^2 on (-inf, E1)."""
    _require_middle(p, xi)
    src = reflection_source(r)
    k0 = k0_middle(p, xi)
    k = complex(k)
    if k.imag == 0 and k.real <= p.E1:
        raise ValueError("k on (-inf, E1]")
    if k.imag == 0 and k.real < k0 and side == "interior":
        raise ValueError("k on the cut needs a side")
    if k == k0:
        raise ValueError("k = k0")
    A = cauchy_halfline(src.log_one_minus_abs2, p.E1, k, other=k0, K_max=src.K_max)
    B = cauchy_cut_weighted(cut_log(src, shift), p.E1, k0, k, side)
    Xk = complex(scriptX(p, xi, k, side))
    return complex(np.exp(Xk / (2j * np.pi) * (A + B)))


def u_middle(p: Params, r, x: float, t: float, *, shift: int = 0):
    """(leading, subleading) parts of the middle-sector asymptotics."""
    if classify_sector(p, x, t) is not Sector.MIDDLE:
        raise ValueError(f"(x, t) = ({x}, {t}) is not in the middle sector")
    xi = x / t
    q = middle_quantities(p, r, xi, shift=shift)
    L = q.k0 - p.E1
    pref = -q.Dinf_m2 * np.exp(2j * t * q.g_inf)
    lead = pref * (4 * (p.alpha + p.beta) - xi) / 6
    C = q.C_k0
    sub = pref * (12 * C * C - 24 * C / math.sqrt(L) + 7 / L) / (144j * t)
    return complex(lead), complex(sub)


def residue_matrix(C: complex, L: float) -> np.ndarray:
    s = math.sqrt(L)
    d = 12j * C * C - 7j / L
    return np.array([[d, 12 * C * C - 24 * C / s + 7 / L],
                     [12 * C * C + 24 * C / s + 7 / L, -d]]) / 288


def subleading_residue(p: Params, r, xi: float) -> np.ndarray:
    q = middle_quantities(p, r, xi)
    return residue_matrix(q.C_k0, q.k0 - p.E1)


def subleading_from_residue(p: Params, r, x: float, t: float) -> complex:
    """The 1/t term rebuilt from the (1,2) entry of the local residue."""
    xi = x / t
    q = middle_quantities(p, r, xi)
    R = residue_matrix(q.C_k0, q.k0 - p.E1)
    return complex(-q.Dinf_m2 * np.exp(2j * t * q.g_inf) * (-2j * R[0, 1]) / t)
