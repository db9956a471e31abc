"""Plane-wave background of the defocusing NLS with step-like data.

The background is ``alpha * exp(i(2 beta x + omega t))`` with
``omega = -4 beta**2 - 2 alpha**2``.  Its Lax pair has the branch points
``E1 = -beta - alpha`` and ``E2 = -beta + alpha``; the functions ``X``,
``Omega`` and ``Delta`` below carry the cut ``[E1, E2]``.

2x2 objects are numpy arrays of shape ``(..., 2, 2)``.  Every function is
vectorised over ``k``.

``side`` selects how points on the open cut are evaluated:

``"interior"``
    ordinary evaluation, rejected on the cut itself;
``"plus"`` / ``"minus"``
    boundary values from the upper / lower half plane, built from the
    closed forms (e.g. ``X+ = i sqrt((k-E1)(E2-k))``) rather than from a
    small imaginary offset.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

SIDES = ("interior", "plus", "minus")

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class Params:
    alpha: float
    beta: float
    omega: float
    E1: float
    E2: float
    delta: float

    @property
    def left_edge(self) -> float:
        """Boundary between the left and middle sectors, 4 beta - 2 alpha."""
        return 4 * self.beta - 2 * self.alpha

    @property
    def right_edge(self) -> float:
        """Boundary between the middle and right sectors, 4 beta + 4 alpha."""
        return 4 * self.beta + 4 * self.alpha


def make_params(alpha: float, beta: float, delta: float = 0.25) -> Params:
    alpha = float(alpha)
    beta = float(beta)
    delta = float(delta)
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not 0 < delta < alpha:
        raise ValueError(f"delta must lie in (0, alpha), got {delta}")
    return Params(alpha=alpha, beta=beta, omega=-4 * beta**2 - 2 * alpha**2,
                  E1=-beta - alpha, E2=-beta + alpha, delta=delta)


def plane_wave(p: Params, x, t):
    return p.alpha * np.exp(1j * (2 * p.beta * np.asarray(x) + p.omega * np.asarray(t)))


def on_cut(p: Params, k) -> np.ndarray:
    k = np.asarray(k)
    return (np.imag(k) == 0) & (np.real(k) > p.E1) & (np.real(k) < p.E2)


def _check_side(p: Params, k, side: str) -> np.ndarray:
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    k = np.asarray(k, dtype=complex)
    cut = on_cut(p, k)
    if side == "interior":
        if np.any(cut):
            raise ValueError("interior evaluation requested on the open cut (E1, E2)")
    elif not np.all(cut):
        raise ValueError("side='plus'/'minus' requires k on the open cut (E1, E2)")
    return k


def X(p: Params, k, side: str = "interior"):
    """sqrt((k-E1)(k-E2)) with cut [E1, E2] and X ~ k + beta at infinity."""
    k = _check_side(p, k, side)
    if side == "interior":
        # principal roots: the two half-line cuts left of E1 cancel
        return np.sqrt(k - p.E1) * np.sqrt(k - p.E2)
    kr = k.real
    val = 1j * np.sqrt((kr - p.E1) * (p.E2 - kr))
    return val if side == "plus" else -val


def Omega(p: Params, k, side: str = "interior"):
    k = np.asarray(k, dtype=complex)
    return 2 * (k - p.beta) * X(p, k, side)


def Delta(p: Params, k, side: str = "interior"):
    """((k-E2)/(k-E1))**(1/4), tending to 1 at infinity."""
    k = _check_side(p, k, side)
    if np.any(k == p.E1):
        raise ValueError("Delta is singular at k = E1")
    if side == "interior":
        return (k - p.E2) ** 0.25 / (k - p.E1) ** 0.25
    kr = k.real
    mod = ((p.E2 - kr) / (kr - p.E1)) ** 0.25
    phase = np.exp(1j * np.pi / 4) if side == "plus" else np.exp(-1j * np.pi / 4)
    return phase * mod


def _sb_from_delta(d):
    d = np.asarray(d, dtype=complex)
    c = (d + 1 / d) / 2
    s = 1j * (d - 1 / d) / 2
    out = np.empty(d.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = s
    out[..., 1, 0] = -s
    out[..., 1, 1] = c
    return out


def s_b(p: Params, k, side: str = "interior"):
    """Background scattering matrix; unit determinant."""
    return _sb_from_delta(Delta(p, k, side))


def _phase_diag(theta):
    theta = np.asarray(theta, dtype=complex)
    out = np.zeros(theta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(1j * theta)
    out[..., 1, 1] = np.exp(-1j * theta)
    return out


def phi1_b(p: Params, x, t, k, side: str = "interior"):
    """Background eigenfunction exp(i(bx+wt/2)s3) s_b exp(-i(Xx+Omega t)s3).

    The left factor multiplies from the left (it is not a conjugation); this
    is the form that satisfies both Lax equations of the plane wave.
    """
    k = np.asarray(k, dtype=complex)
    left = _phase_diag(p.beta * x + p.omega * t / 2 + 0 * k)
    right = _phase_diag(-(X(p, k, side) * x + Omega(p, k, side) * t))
    return left @ s_b(p, k, side) @ right


def lax_matrices(p: Params, x, t, k):
    """(U, V) of the Lax pair evaluated on the plane wave."""
    u = plane_wave(p, x, t)
    U = np.array([[0, u], [np.conj(u), 0]], dtype=complex)
    V = np.array([[-1j * abs(u) ** 2, 2 * (k - p.beta) * u],
                  [2 * (k - p.beta) * np.conj(u), 1j * abs(u) ** 2]], dtype=complex)
    return U, V


class Sector(enum.Enum):
    LEFT = "Left"
    MIDDLE = "Middle"
    RIGHT = "Right"
    TRANSITION_LM = "TransitionLM"
    TRANSITION_MR = "TransitionMR"


def sector_of_xi(p: Params, xi: float) -> Sector:
    lo, hi, d = p.left_edge, p.right_edge, p.delta
    if xi <= lo - d:
        return Sector.LEFT
    if lo + d <= xi <= hi - d:
        return Sector.MIDDLE
    if xi >= hi + d:
        return Sector.RIGHT
    return Sector.TRANSITION_LM if xi < (lo + hi) / 2 else Sector.TRANSITION_MR


def classify_sector(p: Params, x: float, t: float) -> Sector:
    if not t > 0:
        raise ValueError("classify_sector needs t > 0")
    return sector_of_xi(p, x / t)
