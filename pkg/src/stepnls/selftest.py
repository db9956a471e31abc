"""Quick built-in checks, each returning (passed, detail)."""
from __future__ import annotations

import math

import numpy as np

from . import background as bg
from .asymptotics.airy import seam_mismatch
from .asymptotics import parametrix as par
from .asymptotics.middle import g_middle
from .cauchyint import cauchy_sqrt_endpoint, endpoint_expansion, gauss_jacobi
from .scattering import pure_step, pure_step_reflection, reflection

CHECKS = []


def check(fn):
    CHECKS.append(fn)
    return fn


@check
def background_branch_jump():
    p = bg.make_params(1.0, 0.6)
    k = (p.E1 + p.E2) / 2
    d = abs(bg.X(p, k, "plus") + bg.X(p, k, "minus"))
    return d < 1e-14, f"X+ + X- = {d:.2e}"


@check
def pure_step_oracle():
    p = bg.make_params(1.0, 0.0)
    k = np.array([-3.0, -0.5, 0.5, 2.0])
    r = reflection(p, pure_step(p), k)
    err = float(np.max(np.abs(r - pure_step_reflection(p, k))))
    return err < 1e-4, f"max |r - closed form| = {err:.2e}"


@check
def gauss_jacobi_moments():
    x, w = gauss_jacobi(12, -0.5, 0.0)
    # integral of (1-t)^{-1/2} t^2 over [-1, 1]
    exact = 2 * math.sqrt(2) * (1 - 2 * 2 / 3 + 4 / 5)
    err = abs(np.dot(w, x**2) - exact)
    return err < 1e-13, f"moment error {err:.2e}"


@check
def endpoint_closed_form():
    v = cauchy_sqrt_endpoint(lambda s: np.ones_like(s), 0.0, 1.0, 2.0)
    err = abs(v + math.pi / 2)
    return err < 1e-10, f"|f0(2) + pi/2| = {err:.2e}"


@check
def endpoint_expansion_order():
    ex = endpoint_expansion(np.exp, [math.e] * 8, 0.0, 1.0, 2)
    ratios = []
    for m in range(4, 11):
        z = 1 + 2.0**-m
        ratios.append(abs(cauchy_sqrt_endpoint(np.exp, 0.0, 1.0, z) - ex(z)) / (z - 1) ** 1.5)
    ok = all(b < a for a, b in zip(ratios, ratios[1:]))
    return ok, f"ratios {ratios[0]:.3g} .. {ratios[-1]:.3g}"


@check
def airy_seam():
    m = seam_mismatch()
    return m["rel"] < 1e-10, f"relative seam mismatch {m['rel']:.2e}"


@check
def airy_jumps():
    worst = 0.0
    for th in (0.0, 2 * np.pi / 3, np.pi, -2 * np.pi / 3):
        for rad in (1.0, 2.0, 4.0):
            z = rad * np.exp(1j * th)
            e = 1e-12
            a, b = par.airy_model(z * np.exp(1j * e)), par.airy_model(z * np.exp(-1j * e))
            v = par.airy_jump(z)
            worst = max(worst, min(np.abs(a - b @ v).max(), np.abs(b - a @ v).max()))
    return worst < 1e-8, f"max jump residual {worst:.2e}"


@check
def airy_first_coefficient():
    m1 = par.airy_series_coeff(1)
    err = np.abs(m1 - np.array([[1 / 48, 1j / 8], [1j / 8, -1 / 48]])).max()
    return err < 1e-15, f"m1 error {err:.1e}"


@check
def global_parametrix_jump():
    p = bg.make_params(1.0, 0.6)
    xi = 3.0
    k0 = (p.beta + p.alpha - xi) / 3
    k = (p.E1 + k0) / 2
    res = np.abs(par.global_parametrix(p, xi, k, "plus")
                 - par.global_parametrix(p, xi, k, "minus") @ par.V_OUTER).max()
    return res < 1e-10, f"jump residual {res:.2e}"


@check
def g_function_jump():
    p = bg.make_params(1.0, 0.6)
    xi = 3.0
    k = (p.E1 + (p.beta + p.alpha - xi) / 3) / 2
    res = abs(g_middle(p, xi, k, "plus") + g_middle(p, xi, k, "minus"))
    return res < 1e-12, f"g+ + g- = {res:.2e}"


@check
def left_j_parity_pure_step():
    from .asymptotics import J_integral
    from .scattering import Reflection

    p = bg.make_params(1.0, 0.0)
    J, odd, res = J_integral(p, Reflection.pure_step(p))
    return odd % 2 == 1 and res < 1e-2, f"J / pi^2 = {J / math.pi**2:.6f}"


@check
def evolution_plane_wave():
    from .evolution import evolve

    p = bg.make_params(1.0, math.pi / 10)     # carrier period 10 fits the periodic box
    st = evolve(lambda x: bg.plane_wave(p, x, 0.0), p, 10.0, 10.0, 0.05, 0.1, [0.1], periodic=True)[-1]
    err = float(np.max(np.abs(st.u - bg.plane_wave(p, st.x, st.t))))
    return err < 1e-6, f"max error {err:.2e} at t = {st.t}"


@check
def config_fail_closed():
    from .config import ConfigError, parse_config

    parse_config({})
    try:
        parse_config({"grid": {"kmax": 3}})
    except ConfigError:
        return True, "unknown key rejected"
    return False, "unknown key accepted"


def run_all():
    out = []
    for fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((fn.__name__, bool(ok), detail))
    return out
