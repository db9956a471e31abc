"""Complex Airy function Ai and its derivative.

Outside |z| = SEAM the Poincare asymptotic series is used, continued to
|arg z| > 2pi/3 by the connection formula Ai(z) = -w Ai(wz) - w^2 Ai(w^2 z),
w = exp(2 pi i / 3).  Inside, the Maclaurin series is used except in the
sector |arg z| < pi/4 where Ai is recessive and the series cancels
catastrophically; there the Airy equation is integrated inward from the
seam by Taylor steps, which is stable because Ai grows in that direction.
"""
from __future__ import annotations

import math

import numpy as np

SEAM = 7.0
RECESSIVE_ARG = 0.34 * np.pi
RECESSIVE_RADIUS = 2.0
AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)
OMEGA = np.exp(2j * np.pi / 3)


def series_coeffs(n: int):
    """u_k and v_k, k = 0..n-1, of the large-argument expansion."""
    u = np.empty(n)
    u[0] = 1.0
    for k in range(1, n):
        # u_k = (2k+1)(2k+3)...(6k-1) / (216^k k!)
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
    k = np.arange(n)
    v = (6 * k + 1) / (1 - 6 * k) * u
    return u, v


_U, _V = series_coeffs(60)


def _maclaurin(z: complex):
    z3 = z * z * z
    z2 = z * z
    f, fp = 1.0 + 0j, 0j
    g, gp = z, 1.0 + 0j
    tf, tg = 1.0 + 0j, z
    k = 1
    while True:
        fp_term = tf * z2 / (3 * k - 1)
        gp_term = tg * z2 / (3 * k)
        tf = tf * z3 / ((3 * k - 1) * (3 * k))
        tg = tg * z3 / ((3 * k) * (3 * k + 1))
        f += tf
        g += tg
        fp += fp_term
        gp += gp_term
        if k > 4 and max(abs(tf), abs(tg), abs(fp_term), abs(gp_term)) < 1e-18 * max(abs(f), abs(g), 1e-300):
            break
        k += 1
        if k > 400:
            break
    return AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp


def _asymptotic_principal(z: complex):
    """Valid for |arg z| <= 2pi/3, large |z|."""
    zeta = 2.0 / 3.0 * z ** 1.5
    sa, sb = 0j, 0j
    p = 1.0 + 0j
    last = np.inf
    for k in range(len(_U)):
        ta, tb = _U[k] * p, _V[k] * p
        size = max(abs(ta), abs(tb))
        if size > last:
            break
        sa += ta
        sb += tb
        if size < 1e-17:
            break
        last = size
        p = -p / zeta
    e = np.exp(-zeta) / (2 * math.sqrt(math.pi))
    q = z ** 0.25
    return e / q * sa, -e * q * sb


def _asymptotic(z: complex):
    if abs(np.angle(z)) <= 2 * np.pi / 3 + 1e-14:
        return _asymptotic_principal(z)
    a1, d1 = _asymptotic_principal(OMEGA * z)
    a2, d2 = _asymptotic_principal(OMEGA**2 * z)
    # Ai(z) = -w Ai(wz) - w^2 Ai(w^2 z); Ai'(z) = -w^2 Ai'(wz) - w^4 Ai'(w^2 z)
    return -OMEGA * a1 - OMEGA**2 * a2, -OMEGA**2 * d1 - OMEGA * d2


def _taylor_inward(z: complex, h_max: float = 0.5, terms: int = 40):
    """Integrate y'' = z y from the seam along the ray through z."""
    z0 = SEAM * z / abs(z)
    y, yp = _asymptotic_principal(z0)
    n_steps = max(1, int(math.ceil(abs(z - z0) / h_max)))
    h = (z - z0) / n_steps
    for _ in range(n_steps):
        a_prev, a0, a1 = 0j, y, yp
        coef = [a0, a1]
        for n in range(terms - 2):
            coef.append((z0 * coef[n] + (coef[n - 1] if n >= 1 else 0j)) / ((n + 1) * (n + 2)))
        hp = 1.0 + 0j
        y_new, yp_new = 0j, 0j
        for n, c in enumerate(coef):
            y_new += c * hp
            if n + 1 < len(coef):
                yp_new += (n + 1) * coef[n + 1] * hp
            hp *= h
        y, yp = y_new, yp_new
        z0 = z0 + h
    return y, yp


def _interior(z: complex):
    if abs(z) > RECESSIVE_RADIUS and abs(np.angle(z)) < RECESSIVE_ARG:
        return _taylor_inward(z)
    return _maclaurin(z)


def airy_series(z):
    """Maclaurin evaluation (any z, accurate for moderate |z|)."""
    return _maclaurin(complex(z))


def airy_asymptotic(z):
    """Large-argument evaluation (any z, accurate for large |z|)."""
    return _asymptotic(complex(z))


def airy(z):
    """(Ai(z), Ai'(z)) for scalar or array z."""
    z = np.asarray(z, dtype=complex)
    ai = np.empty(z.shape, complex)
    aip = np.empty(z.shape, complex)
    for idx, zz in np.ndenumerate(z):
        ai[idx], aip[idx] = _interior(zz) if abs(zz) <= SEAM else _asymptotic(zz)
    if z.ndim == 0:
        return complex(ai), complex(aip)
    return ai, aip


def seam_mismatch(n: int = 48, radius: float = SEAM) -> dict:
    """Largest difference between the series and asymptotic evaluations on |z| = radius.

    Only directions where the Maclaurin series is in use are compared; in
    the recessive sector the interior value is continued from the seam.
    """
    worst_abs, worst_rel = 0.0, 0.0
    for th in np.linspace(-np.pi, np.pi, n, endpoint=False):
        if abs(th) < RECESSIVE_ARG:
            continue
        z = radius * np.exp(1j * th)
        a = np.array(_maclaurin(z))
        b = np.array(_asymptotic(z))
        d = np.abs(a - b)
        worst_abs = max(worst_abs, float(d.max()))
        worst_rel = max(worst_rel, float(np.max(d / np.maximum(np.abs(a), 1e-300))))
    return {"abs": worst_abs, "rel": worst_rel}
