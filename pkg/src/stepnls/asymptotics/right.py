"""Right sector: decaying oscillation with amplitude sqrt(nu_hat / 2t)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..background import Params, Sector, classify_sector, sector_of_xi
from ..cauchyint import stieltjes_dlog
from .common import reflection_source
from .left import NU_FLOOR, arg_gamma_i


@dataclass(frozen=True)
class RightQuantities:
    xi: float
    k0: float
    nu_hat: float
    log1m: float          # log(1 - |r(k0)|^2)
    arg_minus_r: float    # arg(-r(k0))
    stieltjes: float      # int_{-inf}^{k0} log(k0 - s) d log(1 - |r|^2)
    negligible: bool = False

    def phi(self, t: float) -> float:
        if self.negligible:
            return 0.0
        return ((3 * np.pi + self.xi**2 * t) / 4 - self.arg_minus_r + arg_gamma_i(self.nu_hat)
                + self.log1m * math.log(8 * t) / (2 * np.pi) + self.stieltjes / np.pi)


def nu_from_abs_r(abs_r: float) -> float:
    return -math.log1p(-abs_r * abs_r) / (2 * np.pi)


def right_quantities(p: Params, r, xi: float) -> RightQuantities:
    if sector_of_xi(p, xi) is not Sector.RIGHT:
        raise ValueError(f"xi = {xi} is not in the right sector")
    src = reflection_source(r)
    k0 = -xi / 4
    rk0 = complex(src(np.array([k0]))[0])
    log1m = float(src.log_one_minus_abs2(np.array([k0]))[0])
    nu = -log1m / (2 * np.pi)
    if nu < NU_FLOOR:
        return RightQuantities(xi, k0, 0.0, 0.0, 0.0, 0.0, negligible=True)
    S = stieltjes_dlog(src.log_one_minus_abs2, k0, src.K_max)
    return RightQuantities(xi, k0, nu, log1m, float(np.angle(-rk0)), S)


def u_right(p: Params, r, x: float, t: float) -> complex:
    if classify_sector(p, x, t) is not Sector.RIGHT:
        raise ValueError(f"(x, t) = ({x}, {t}) is not in the right sector")
    q = right_quantities(p, r, x / t)
    if q.negligible:
        return 0j
    return complex(-2j / math.sqrt(8 * t) * math.sqrt(q.nu_hat) * np.exp(1j * q.phi(t)))
