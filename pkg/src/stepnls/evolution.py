"""Method-of-lines solver for i u_t + u_xx - 2|u|^2 u = 0 on a truncated line.

Fourth-order central differences in x, classical RK4 in t.  The two
outermost nodes on each side are pinned to exact solutions: the
background plane wave on the left and zero on the right.  A periodic
variant wraps the stencil instead.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import background as bg
from .background import Params, Sector, classify_sector

RK4_IMAG_LIMIT = 2.8      # RK4 stability interval on the imaginary axis is 2*sqrt(2)
LAPLACIAN_SYMBOL_MAX = 16.0 / 3.0


class CFLError(ValueError):
    pass


class BoundaryContaminationWarning(UserWarning):
    pass


@dataclass
class EvolutionState:
    x: np.ndarray
    u: np.ndarray
    t: float
    dx: float
    dt: float
    p: Params
    periodic: bool = False
    diagnostics: dict = field(default_factory=dict)


@njit(cache=True)
def _rhs(u, out, inv12dx2, periodic, lead_rate, lead_vals):
    n = u.shape[0]
    if periodic:
        for i in range(n):
            lap = (-u[(i - 2) % n] + 16.0 * u[(i - 1) % n] - 30.0 * u[i]
                   + 16.0 * u[(i + 1) % n] - u[(i + 2) % n]) * inv12dx2
            a = u[i]
            out[i] = 1j * (lap - 2.0 * (a.real * a.real + a.imag * a.imag) * a)
        return
    for i in range(2, n - 2):
        lap = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) * inv12dx2
        a = u[i]
        out[i] = 1j * (lap - 2.0 * (a.real * a.real + a.imag * a.imag) * a)
    # pinned nodes follow the exact edge models: d/dt of alpha e^{2i beta x + i omega t}, and 0
    out[0] = lead_rate * lead_vals[0]
    out[1] = lead_rate * lead_vals[1]
    out[n - 2] = 0.0
    out[n - 1] = 0.0


@njit(cache=True)
def _advance(u, n_steps, dt, inv12dx2, periodic, omega, edge0, edge1, t0):
    n = u.shape[0]
    k1 = np.empty_like(u)
    k2 = np.empty_like(u)
    k3 = np.empty_like(u)
    k4 = np.empty_like(u)
    w = np.empty_like(u)
    lv = np.empty(2, np.complex128)
    rate = 1j * omega
    t = t0
    for _ in range(n_steps):
        lv[0] = edge0 * np.exp(1j * omega * t)
        lv[1] = edge1 * np.exp(1j * omega * t)
        _rhs(u, k1, inv12dx2, periodic, rate, lv)
        for i in range(n):
            w[i] = u[i] + 0.5 * dt * k1[i]
        lv[0] = edge0 * np.exp(1j * omega * (t + 0.5 * dt))
        lv[1] = edge1 * np.exp(1j * omega * (t + 0.5 * dt))
        _rhs(w, k2, inv12dx2, periodic, rate, lv)
        for i in range(n):
            w[i] = u[i] + 0.5 * dt * k2[i]
        _rhs(w, k3, inv12dx2, periodic, rate, lv)
        for i in range(n):
            w[i] = u[i] + dt * k3[i]
        lv[0] = edge0 * np.exp(1j * omega * (t + dt))
        lv[1] = edge1 * np.exp(1j * omega * (t + dt))
        _rhs(w, k4, inv12dx2, periodic, rate, lv)
        for i in range(n):
            u[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        t += dt
        if not periodic:
            u[0] = lv[0]
            u[1] = lv[1]
            u[n - 2] = 0.0
            u[n - 1] = 0.0
    return t


def max_stable_dt(dx: float, amplitude: float = 0.0) -> float:
    rate = LAPLACIAN_SYMBOL_MAX / dx**2 + 2 * amplitude**2
    return RK4_IMAG_LIMIT / rate


def make_grid(L_left: float, L_right: float, dx: float) -> np.ndarray:
    n_left = int(round(L_left / dx))
    n_right = int(round(L_right / dx))
    if abs(n_left * dx - L_left) > 1e-9 * max(1.0, L_left) or abs(n_right * dx - L_right) > 1e-9 * max(1.0, L_right):
        raise ValueError("L_left and L_right must be multiples of dx")
    return dx * np.arange(-n_left, n_right + 1)


def effective_wavenumber(u0, p: Params, x: np.ndarray, rel_tol: float = 1e-8) -> float:
    """Largest Lax spectral parameter |k| carrying content above rel_tol.

    The carrier-corrected derivative u_x - 2i beta u vanishes on the
    background plane wave, so its spectrum measures what the step radiates.
    A spatial wavenumber kappa travels with group velocity 2 kappa, and
    kappa = 2k, so the influence speed is 4 K with K returned here.
    """
    dx = x[1] - x[0]
    u = np.asarray(u0(x), dtype=complex)
    v = np.gradient(u, dx) - 2j * p.beta * u
    spec = np.abs(np.fft.fft(v * np.hanning(x.size)))
    kappa = 2 * np.pi * np.fft.fftfreq(x.size, dx)
    if spec.max() == 0:
        return 0.0
    keep = spec > rel_tol * spec.max()
    return float(np.max(np.abs(kappa[keep] + 2 * p.beta)) / 2)


def contamination_time(L_left: float, L_right: float, speed: float, window=None) -> float:
    """Earliest time an edge reflection can reach the evaluation window."""
    if speed <= 0:
        return math.inf
    lo, hi = window if window is not None else (0.0, 0.0)
    return min((L_left + (lo + L_left)) / speed, (L_right + (L_right - hi)) / speed)


def evolve(u0, p: Params, L_left: float, L_right: float, dx: float, t_end: float, record_times,
           *, dt: float | None = None, periodic: bool = False, speed: float | None = None,
           window=None, check_resolution: bool = True) -> list[EvolutionState]:
    """Evolve the datum and return the states at the recorded times."""
    record_times = sorted(float(t) for t in record_times)
    if any(t < 0 or t > t_end + 1e-12 for t in record_times):
        raise ValueError("record times must lie in [0, t_end]")
    if check_resolution:
        limit = 0.2 / max(1.0, abs(p.beta), math.sqrt(abs(p.omega)))
        if dx > limit * (1 + 1e-12):
            raise ValueError(f"dx = {dx} does not resolve the background (need <= {limit:.4g})")
    if dt is None:
        dt = 0.25 * dx * dx
    if dt > max_stable_dt(dx, p.alpha):
        raise CFLError(f"dt = {dt} exceeds the RK4 stability limit {max_stable_dt(dx, p.alpha):.4g}")
    x = make_grid(L_left, L_right, dx)
    if periodic:
        x = x[:-1]
    u = np.array(u0(x), dtype=complex)
    diag = {}
    if not periodic:
        K_eff = effective_wavenumber(u0, p, x)
        v = 4 * K_eff if speed is None else speed
        tc = contamination_time(L_left, L_right, v, window)
        diag.update({"K_eff": K_eff, "speed": v, "contamination_time": tc})
        if tc < t_end:
            warnings.warn(f"edge influence may reach the evaluation window at t = {tc:.3g} < t_end",
                          BoundaryContaminationWarning, stacklevel=2)
        edge = p.alpha * np.exp(2j * p.beta * x[:2])
        jump = max(abs(u[0] - edge[0]), abs(u[1] - edge[1]), abs(u[-1]), abs(u[-2]))
        diag["edge_mismatch"] = float(jump)
        u[:2] = edge
        u[-2:] = 0
    else:
        edge = np.zeros(2, complex)
    inv = 1.0 / (12 * dx * dx)
    states = []
    t = 0.0
    for tr in record_times:
        n = int(round((tr - t) / dt))
        if n > 0:
            t = _advance(u, n, dt, inv, periodic, p.omega, edge[0], edge[1], t)
        t = tr if n == 0 or abs(t - tr) < 1e-9 * max(1.0, tr) else t
        states.append(EvolutionState(x.copy(), u.copy(), t, dx, dt, p, periodic, dict(diag)))
    return states


def renormalized_mass(state: EvolutionState) -> float:
    dens = np.abs(state.u) ** 2 - state.p.alpha**2 * (state.x < 0)
    return float(np.trapezoid(dens, state.x))


def _fit_exponent(ts, res) -> float:
    """Decay exponent a in res ~ t^{-a} by least squares on log-log data."""
    ts, res = np.asarray(ts, float), np.asarray(res, float)
    if ts.size < 2 or np.any(res <= 0):
        return math.nan
    slope = np.polyfit(np.log(ts), np.log(res), 1)[0]
    return float(-slope)


def compare_asymptotics(states, p: Params, r, xis, *, edge_margin: float = 10.0) -> dict:
    """Residuals of the sector formulas against the numerical solution.

    Each xi is evaluated at the grid node nearest to x = xi t; the sector
    formula is then evaluated at that exact node.  Nodes closer than
    ``edge_margin`` to a pinned edge are skipped.
    """
    from .asymptotics import u_asymptotic

    times = [s.t for s in states]
    if len(times) < 2 or max(times) < 2 * min(t for t in times if t > 0):
        raise ValueError("need at least two recorded times with ratio >= 2")
    rows = []
    for xi in xis:
        for st in states:
            if st.t <= 0:
                continue
            i = int(np.argmin(np.abs(st.x - xi * st.t)))
            x = float(st.x[i])
            if not st.periodic and min(x - st.x[0], st.x[-1] - x) < edge_margin:
                continue
            sec = classify_sector(p, x, st.t)
            if sec in (Sector.TRANSITION_LM, Sector.TRANSITION_MR):
                continue
            a = u_asymptotic(p, r, x, st.t)
            un = complex(st.u[i])
            rows.append({"xi": xi, "t": st.t, "x": x, "sector": a["sector"], "u_num": un,
                         "u_lead": a["leading"], "u_full": a["leading"] + a["sub"],
                         "res_lead": abs(un - a["leading"]), "res_full": abs(un - a["leading"] - a["sub"])})
    fits = {}
    for xi in xis:
        sel = [row for row in rows if row["xi"] == xi]
        if len(sel) >= 2:
            ts = [row["t"] for row in sel]
            fits[xi] = {"lead": _fit_exponent(ts, [row["res_lead"] for row in sel]),
                        "full": _fit_exponent(ts, [row["res_full"] for row in sel])}
    return {"rows": rows, "exponents": fits}


def d_dx_at(state: EvolutionState, i: int) -> complex:
    """Fourth-order central difference of u at node i."""
    u, h = state.u, state.dx
    return complex((u[i - 2] - 8 * u[i - 1] + 8 * u[i + 1] - u[i + 2]) / (12 * h))


def compare_halfline(states, p: Params, r) -> list[dict]:
    """Boundary values at x = 0 against the time-periodic half-line pair.

    The solution is multiplied by -Dinf^2(0), which has modulus one, so
    that u(0, t) ~ alpha e^{i omega t} and u_x(0, t) ~ c e^{i omega t} with
    c = 2 i alpha beta.  Also reports the residual after adding the
    t^{-1/2} correction of the left-sector formula.
    """
    from .asymptotics import Dinf_left, u_left

    if bg.sector_of_xi(p, 0.0) is not Sector.LEFT:
        raise ValueError("x = 0 is not in the left sector for these parameters")
    renorm = -Dinf_left(p, r, 0.0) ** 2
    c = 2j * p.alpha * p.beta
    rows = []
    for st in states:
        if st.t <= 0:
            continue
        i = int(np.argmin(np.abs(st.x)))
        if abs(st.x[i]) > 1e-12:
            raise ValueError("x = 0 must be a grid node")
        e = np.exp(1j * p.omega * st.t)
        u0, ux0 = complex(renorm * st.u[i]), renorm * d_dx_at(st, i)
        lead, corr = u_left(p, r, 0.0, st.t)
        rows.append({"t": st.t, "u": u0, "u_x": ux0, "c": c, "renorm": complex(renorm),
                     "res_u": abs(u0 - p.alpha * e), "res_ux": abs(ux0 - c * e),
                     "predicted_res_u": abs(corr), "res_u_corrected": abs(st.u[i] - lead - corr)})
    return rows
