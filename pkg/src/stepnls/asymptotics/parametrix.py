"""Model Riemann-Hilbert solutions: the genus-0 outer solution on [E1, k0]
and the Airy model problem near a cubic-root critical point."""
from __future__ import annotations

import math

import numpy as np

from ..background import Params
from .airy import airy

N_MATRIX = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
OMEGA = np.exp(2j * np.pi / 3)
# jump of the outer solution on (E1, k0): m+ = m- V_OUTER
V_OUTER = np.array([[0, 1], [-1, 0]], dtype=complex)
# constant left factor that gives the sectorial Airy matrix unit determinant
# and the normalisation z^{-sigma3/4} N (I + O(z^{-3/2})); it does not
# affect any jump relation
AIRY_NORMALISER = math.sqrt(2 * math.pi) * np.diag([np.exp(1j * np.pi / 6), np.exp(-1j * np.pi / 3)])


def _k0_middle(p: Params, xi: float) -> float:
    return (p.beta + p.alpha - xi) / 3


def delta0(p: Params, xi: float, k, side: str = "interior"):
    """((k - k0)/(k - E1))^{1/4} with its cut on [E1, k0]."""
    k0 = _k0_middle(p, xi)
    k = complex(k)
    if k in (complex(p.E1), complex(k0)):
        raise ValueError("k at a branch point")
    if side == "interior":
        return (k - k0) ** 0.25 / (k - p.E1) ** 0.25
    if not (k.imag == 0 and p.E1 < k.real < k0):
        raise ValueError("side given for k off the cut")
    mod = ((k0 - k.real) / (k.real - p.E1)) ** 0.25
    return mod * np.exp((1j if side == "plus" else -1j) * np.pi / 4)


def global_parametrix(p: Params, xi: float, k, side: str = "interior") -> np.ndarray:
    d = delta0(p, xi, k, side)
    s, m = d + 1 / d, d - 1 / d
    return 0.5 * np.array([[s, -1j * m], [1j * m, s]])


def _A(z: complex) -> np.ndarray:
    ph = np.diag([np.exp(-1j * np.pi / 6), np.exp(1j * np.pi / 6)])
    ai, aip = airy(z)
    if z.imag > 0:
        a2, a2p = airy(OMEGA**2 * z)
        M = np.array([[ai, a2], [aip, OMEGA**2 * a2p]])
    else:
        a1, a1p = airy(OMEGA * z)
        M = np.array([[ai, -OMEGA**2 * a1], [aip, -a1p]])
    return M @ ph


def airy_sector(z: complex) -> int:
    """Sector index 1..4 (arguments measured in (0, 2pi))."""
    th = np.angle(z) % (2 * np.pi)
    for j, edge in enumerate((0.0, 2 * np.pi / 3, np.pi, 4 * np.pi / 3)):
        if abs(th - edge) < 1e-14 or abs(th - edge - 2 * np.pi) < 1e-14:
            raise ValueError("z lies on a jump ray")
    if z == 0:
        raise ValueError("z = 0")
    if th < 2 * np.pi / 3:
        return 1
    if th < np.pi:
        return 2
    if th < 4 * np.pi / 3:
        return 3
    return 4


def airy_model(z) -> np.ndarray:
    z = complex(z)
    sec = airy_sector(z)
    M = _A(z)
    if sec == 2:
        M = M @ np.array([[1, 0], [-1, 1]])
    elif sec == 3:
        M = M @ np.array([[1, 0], [1, 1]])
    e = 2.0 / 3.0 * z**1.5
    return AIRY_NORMALISER @ M @ np.diag([np.exp(e), np.exp(-e)])


def airy_jump(z) -> np.ndarray:
    """Jump matrix on the ray through z (m+ = m- v)."""
    z = complex(z)
    th = np.angle(z) % (2 * np.pi)
    e = 4.0 / 3.0 * z**1.5
    if abs(th - np.pi) < 1e-12:
        return np.array([[0, -1], [1, 0]], dtype=complex)
    if th < 1e-12 or th > 2 * np.pi - 1e-12:
        return np.array([[1, -np.exp(-e)], [0, 1]])
    return np.array([[1, 0], [-np.exp(e), 1]])


def airy_series_coeff(j: int) -> np.ndarray:
    """Coefficient m_j of the large-z expansion of the Airy model solution."""
    if j < 1:
        raise ValueError("j must be >= 1")
    poch = math.prod(j + 0.5 + i for i in range(2 * j))
    pref = -(6.0 ** (-2 * j)) * poch / ((6 * j - 1) * math.factorial(j))
    sg = (-1) ** j
    return pref * np.array([[sg, -6j * j], [sg * 6j * j, 1]])


def airy_series_coeff_uv(j: int) -> np.ndarray:
    """The same coefficient assembled from the scalar u_j, v_j of the Ai expansion."""
    if j < 1:
        raise ValueError("j must be >= 1")
    u = math.prod(range(2 * j + 1, 6 * j, 2)) / (216.0**j * math.factorial(j))
    v = (6 * j + 1) / (1 - 6 * j) * u
    sg = (-1) ** j
    core = np.array([[sg * u, u], [-sg * v, v]]) * 1.5**j
    right = np.diag([np.exp(-1j * np.pi / 4), np.exp(1j * np.pi / 4)])
    return np.exp(1j * np.pi / 4) / math.sqrt(2) * np.linalg.inv(N_MATRIX) @ np.diag([1, -1j]) @ core @ right


def airy_normalised(z) -> np.ndarray:
    """N^{-1} z^{sigma3/4} m^{Ai}(z), which tends to I."""
    z = complex(z)
    q = z**0.25
    return np.linalg.inv(N_MATRIX) @ np.diag([q, 1 / q]) @ airy_model(z)


def airy_truncation_error(z, J: int) -> float:
    """Max-entry error of the J-term expansion of the normalised model solution."""
    z = complex(z)
    approx = np.eye(2, dtype=complex)
    for j in range(1, J + 1):
        approx = approx + airy_series_coeff(j) / z ** (1.5 * j)
    return float(np.max(np.abs(airy_normalised(z) - approx)))
