"""Plane-wave boundary data on the half-line and the matching of sector formulas."""
from __future__ import annotations

import math

import numpy as np

from ..background import Params, make_params
from .middle import middle_quantities


def halfline_family(alpha: float, omega: float):
    """(c, beta) for boundary values u(0,t) = alpha e^{i omega t}, u_x(0,t) = c e^{i omega t}."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not omega < -3 * alpha**2:
        raise ValueError("the family needs omega < -3 alpha^2")
    root = math.sqrt(-2 * alpha**2 - omega)
    c = 1j * alpha * root
    beta = root / 2
    assert 4 * beta - 2 * alpha > 0
    return c, beta


def family_params(alpha: float, omega: float, delta: float = 0.25) -> Params:
    _, beta = halfline_family(alpha, omega)
    return make_params(alpha, beta, delta)


def _extrapolate(xs, ys, x_target: float) -> float:
    coef = np.polyfit(np.asarray(xs) - x_target, ys, len(xs) - 1)
    return float(coef[-1])


def matching_report(p: Params, r, *, n: int = 4, spacing: float = 0.05) -> list[dict]:
    """Leading-order middle-sector modulus extrapolated to both sector edges."""
    rows = []
    for edge, side, target in ((p.left_edge, 1, p.alpha), (p.right_edge, -1, 0.0)):
        xs = [edge + side * (p.delta + j * spacing) for j in range(n)]
        mods = []
        for xi in xs:
            q = middle_quantities(p, r, xi)
            mods.append(abs(q.Dinf_m2) * abs(4 * (p.alpha + p.beta) - xi) / 6)
        lim = _extrapolate(xs, mods, edge)
        rows.append({"edge": edge, "samples": xs, "moduli": mods, "limit": lim, "target": target,
                     "residual": abs(lim - target)})
    return rows
