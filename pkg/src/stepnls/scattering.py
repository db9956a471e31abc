"""Direct scattering for step-like data.

The Jost functions are computed by marching their ODEs with classical RK4:

* ``mu2`` from ``x_max`` (where it is the identity) down to ``x_eval``;
* ``mu1`` from ``x_min`` (where it equals the background eigenfunction
  ``exp(i beta x ad sigma3) s_b``) up to ``x_eval``.

Everything is vectorised over a batch of spectral parameters; batches share
one x-grid whose step resolves the fastest oscillation in the batch.

Conventions.  The scattering matrix ``s = mu2(0)^-1 mu1(0)`` has the form
``[[a, -b], [-conj(b), conj(a)]]`` off the cut, so that ``a = s11`` and
``b = -s12``.  For k on the open cut the first column of ``mu1`` is the
boundary value from the upper half plane and the second column the one from
the lower half plane.  With this the reflection coefficient is
``r = -s21 / s11`` on the whole real line: off the cut this is
``conj(b)/a`` and on the cut, where the two columns of the eigenfunction
coincide (so ``s21 = s22``), it is ``-conj(a)/a``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import background as bg
from .background import Params

STEP_FACTOR = 0.1


# ----------------------------------------------------------------- data

@dataclass(frozen=True)
class InitialDatum:
    """Initial profile with its effective support.

    ``profile(x, side)`` returns u0 at ``x``; at a jump ``side=-1`` asks for
    the left limit and ``side=+1`` for the right limit.
    """

    profile: Callable
    x_min: float
    x_max: float
    tail_tol: float = 1e-14
    regularity: tuple = (8, 3)
    name: str = "custom"
    jumps: tuple = ()

    def __call__(self, x, side: int = 0):
        return self.profile(np.asarray(x, dtype=float), side)

    def check_tails(self, p: Params, n: int = 200, span: float = 20.0) -> dict:
        xl = np.linspace(self.x_min - span, self.x_min, n)
        xr = np.linspace(self.x_max, self.x_max + span, n)
        left = float(np.max(np.abs(self(xl, -1) - bg.plane_wave(p, xl, 0.0))))
        right = float(np.max(np.abs(self(xr, 1))))
        return {"left": left, "right": right,
                "ok": left < self.tail_tol and right < self.tail_tol}


def tanh_step(p: Params, width: float = 1.0, tail_tol: float = 1e-14) -> InitialDatum:
    """u0 = alpha exp(2i beta x) (1 - tanh(x/w))/2."""
    if width <= 0:
        raise ValueError("width must be positive")
    a, b = p.alpha, p.beta

    def profile(x, side=0):
        return a * np.exp(2j * b * x) * 0.5 * (1 - np.tanh(x / width))

    # |u0 - background| = a / (1 + exp(-2x/w)) and |u0| = a / (1 + exp(2x/w))
    edge = 0.5 * width * math.log(max(a, 1.0) / tail_tol)
    return InitialDatum(profile, -edge, edge, tail_tol, (8, 3), f"tanh_step(w={width:g})")


def pure_step(p: Params) -> InitialDatum:
    """u0 = alpha exp(2i beta x) for x < 0, zero for x > 0."""
    a, b = p.alpha, p.beta

    def profile(x, side=0):
        x = np.asarray(x, dtype=float)
        inside = (x < 0) | ((x == 0) & (side < 0))
        return np.where(inside, a * np.exp(2j * b * x), 0.0 + 0j)

    # the datum equals its tails on both sides of the jump, so no marching is needed
    return InitialDatum(profile, 0.0, 0.0, 0.0, (2, 0), "pure_step", jumps=(0.0,))


def sampled_datum(p: Params, x, u, tail_tol: float = 1e-10) -> InitialDatum:
    """Datum given on samples, continued by the exact tails outside them."""
    from scipy.interpolate import CubicSpline

    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=complex)
    if x.ndim != 1 or x.size < 4 or np.any(np.diff(x) <= 0):
        raise ValueError("samples must be strictly increasing with at least 4 points")
    # interpolate the envelope relative to the carrier so the spline sees a slow function
    carrier = np.exp(2j * p.beta * x)
    env = u / carrier
    sr, si = CubicSpline(x, env.real), CubicSpline(x, env.imag)
    lo, hi = x[0], x[-1]

    def profile(xx, side=0):
        xx = np.asarray(xx, dtype=float)
        inner = sr(np.clip(xx, lo, hi)) + 1j * si(np.clip(xx, lo, hi))
        out = np.where(xx < lo, p.alpha + 0j, np.where(xx > hi, 0j, inner))
        return out * np.exp(2j * p.beta * xx)

    return InitialDatum(profile, float(lo), float(hi), tail_tol, (2, 0), "sampled")


# ------------------------------------------------------------ ODE marching

def _scale(p: Params, k: np.ndarray) -> np.ndarray:
    kk = np.asarray(k, dtype=complex)
    with np.errstate(invalid="ignore"):
        xs = np.abs(np.sqrt(kk - p.E1) * np.sqrt(kk - p.E2))
    return np.maximum.reduce([np.ones(kk.shape), np.abs(kk), xs])


def _grid(x_start: float, x_end: float, hmax: float):
    span = abs(x_end - x_start)
    n = max(1, int(math.ceil(span / hmax)))
    h = (x_end - x_start) / n
    return n, h


def _march_mu2(u0: InitialDatum, k: np.ndarray, x_eval: float, hmax: float):
    n, h = _grid(u0.x_max, x_eval, hmax)
    xs = u0.x_max + h / 2 * np.arange(2 * n + 1)
    us = u0(xs, 1)
    uc = np.conj(us)
    ik2 = 2j * k
    m11 = np.ones(k.shape, complex)
    m12 = np.zeros(k.shape, complex)
    m21 = np.zeros(k.shape, complex)
    m22 = np.ones(k.shape, complex)

    def f(u, ub, a11, a12, a21, a22):
        return (u * a21, -ik2 * a12 + u * a22, ik2 * a21 + ub * a11, ub * a12)

    for j in range(n):
        i0 = 2 * j
        k1 = f(us[i0], uc[i0], m11, m12, m21, m22)
        y = [m + h / 2 * d for m, d in zip((m11, m12, m21, m22), k1)]
        k2 = f(us[i0 + 1], uc[i0 + 1], *y)
        y = [m + h / 2 * d for m, d in zip((m11, m12, m21, m22), k2)]
        k3 = f(us[i0 + 1], uc[i0 + 1], *y)
        y = [m + h * d for m, d in zip((m11, m12, m21, m22), k3)]
        k4 = f(us[i0 + 2], uc[i0 + 2], *y)
        m11, m12, m21, m22 = [m + h / 6 * (d1 + 2 * d2 + 2 * d3 + d4)
                              for m, d1, d2, d3, d4 in zip((m11, m12, m21, m22), k1, k2, k3, k4)]
    out = np.empty(k.shape + (2, 2), complex)
    out[..., 0, 0], out[..., 0, 1], out[..., 1, 0], out[..., 1, 1] = m11, m12, m21, m22
    return out


def _march_mu1_column(p: Params, u0: InitialDatum, k, Xc, sign: int, v0, x_eval: float, hmax: float):
    n, h = _grid(u0.x_min, x_eval, hmax)
    xs = u0.x_min + h / 2 * np.arange(2 * n + 1)
    us = u0(xs, -1)
    uc = np.conj(us)
    d1 = -1j * k + 1j * sign * (Xc - p.beta)
    d2 = 1j * k + 1j * sign * (Xc - p.beta)
    v1, v2 = v0[0].copy(), v0[1].copy()
    for j in range(n):
        i0 = 2 * j
        a1 = d1 * v1 + us[i0] * v2
        a2 = d2 * v2 + uc[i0] * v1
        w1, w2 = v1 + h / 2 * a1, v2 + h / 2 * a2
        b1 = d1 * w1 + us[i0 + 1] * w2
        b2 = d2 * w2 + uc[i0 + 1] * w1
        w1, w2 = v1 + h / 2 * b1, v2 + h / 2 * b2
        c1 = d1 * w1 + us[i0 + 1] * w2
        c2 = d2 * w2 + uc[i0 + 1] * w1
        w1, w2 = v1 + h * c1, v2 + h * c2
        e1 = d1 * w1 + us[i0 + 2] * w2
        e2 = d2 * w2 + uc[i0 + 2] * w1
        v1 = v1 + h / 6 * (a1 + 2 * b1 + 2 * c1 + e1)
        v2 = v2 + h / 6 * (a2 + 2 * b2 + 2 * c2 + e2)
    return v1, v2


def _branch_data(p: Params, k: np.ndarray):
    """X and s_b for column 1 (upper boundary value) and column 2 (lower)."""
    k = np.asarray(k, dtype=complex)
    if np.any((k.imag == 0) & ((k.real == p.E1) | (k.real == p.E2))):
        raise ValueError("k must differ from the branch points E1, E2")
    cut = bg.on_cut(p, k)
    X1 = np.empty(k.shape, complex)
    X2 = np.empty(k.shape, complex)
    S1 = np.empty(k.shape + (2, 2), complex)
    S2 = np.empty(k.shape + (2, 2), complex)
    off = ~cut
    if np.any(off):
        X1[off] = X2[off] = bg.X(p, k[off])
        S1[off] = S2[off] = bg.s_b(p, k[off])
    if np.any(cut):
        X1[cut] = bg.X(p, k[cut], "plus")
        X2[cut] = bg.X(p, k[cut], "minus")
        S1[cut] = bg.s_b(p, k[cut], "plus")
        S2[cut] = bg.s_b(p, k[cut], "minus")
    return X1, X2, S1, S2


def _batches(scale: np.ndarray, step_factor: float):
    """Group k by the dyadic level of their oscillation scale.

    Every k on one level is marched with the same step, so the truncation
    error of r(k) is a smooth function of k within a level and does not
    depend on which other k happen to share the call.
    """
    level = np.ceil(np.log2(scale)).astype(int)
    groups = [np.flatnonzero(level == lv) for lv in np.unique(level)]
    return groups, [step_factor / 2.0 ** level[g[0]] for g in groups]


def _map_batches(fn, groups, threads: int):
    if threads > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, groups))
    return [fn(g) for g in groups]


def solve_mu2(u0: InitialDatum, k, x_eval: float = 0.0, *, step_factor: float = STEP_FACTOR,
              p: Params | None = None, threads: int = 1):
    """mu2(x_eval, k), shape k.shape + (2, 2)."""
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    if x_eval >= u0.x_max:
        # zero potential to the right: the Volterra source vanishes identically
        return np.broadcast_to(np.eye(2, dtype=complex), k.shape + (2, 2)).copy()
    scale = np.maximum(1.0, np.abs(k)) if p is None else _scale(p, k)
    out = np.empty(k.shape + (2, 2), complex)
    groups, steps = _batches(scale, step_factor)

    def run(gh):
        g, hmax = gh
        return _march_mu2(u0, k[g], x_eval, hmax)

    for g, res in zip(groups, _map_batches(run, list(zip(groups, steps)), threads)):
        out[g] = res
    return out


def solve_mu1(p: Params, u0: InitialDatum, k, x_eval: float = 0.0, *,
              step_factor: float = STEP_FACTOR, columns=(0, 1), threads: int = 1):
    """mu1(x_eval, k), shape k.shape + (2, 2).

    For k on the open cut column 1 is the upper and column 2 the lower
    boundary value; marching upward is stable for both.  Columns not listed
    in ``columns`` are returned as NaN.
    """
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    if x_eval > u0.x_max:
        raise ValueError("x_eval must not exceed x_max")
    X1, X2, S1, S2 = _branch_data(p, k)
    out = np.full(k.shape + (2, 2), np.nan, complex)
    if x_eval <= u0.x_min:
        # background to the left: mu1 = exp(i beta x sigma3-hat) s_b exactly
        ph = np.exp(2j * p.beta * x_eval)
        for c, S in zip((0, 1), (S1, S2)):
            if c in columns:
                out[..., 0, c] = S[..., 0, c] * (ph if c == 1 else 1)
                out[..., 1, c] = S[..., 1, c] / (ph if c == 0 else 1)
        return out
    groups, steps = _batches(_scale(p, k), step_factor)
    x0 = u0.x_min
    ph = np.exp(2j * p.beta * x0)

    def run(gh):
        g, hmax = gh
        res = {}
        if 0 in columns:
            v0 = (S1[g, 0, 0], S1[g, 1, 0] / ph)
            res[0] = _march_mu1_column(p, u0, k[g], X1[g], 1, v0, x_eval, hmax)
        if 1 in columns:
            v0 = (S2[g, 0, 1] * ph, S2[g, 1, 1])
            res[1] = _march_mu1_column(p, u0, k[g], X2[g], -1, v0, x_eval, hmax)
        return res

    for g, res in zip(groups, _map_batches(run, list(zip(groups, steps)), threads)):
        for c, (v1, v2) in res.items():
            out[g, 0, c] = v1
            out[g, 1, c] = v2
    return out


def scattering_matrix(p: Params, u0: InitialDatum, k, *, step_factor: float = STEP_FACTOR,
                      threads: int = 1):
    """s(k) = mu2(0,k)^-1 mu1(0,k) for real k off the branch points."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    kc = k.astype(complex)
    m1 = solve_mu1(p, u0, kc, 0.0, step_factor=step_factor, threads=threads)
    m2 = solve_mu2(u0, kc, 0.0, step_factor=step_factor, p=p, threads=threads)
    inv = np.empty_like(m2)
    inv[..., 0, 0] = m2[..., 1, 1]
    inv[..., 1, 1] = m2[..., 0, 0]
    inv[..., 0, 1] = -m2[..., 0, 1]
    inv[..., 1, 0] = -m2[..., 1, 0]
    return inv @ m1


def spectral_functions(p: Params, u0: InitialDatum, k, **kw):
    """(a, b, r) on real k; b = -s12 and r = -s21/s11."""
    s = scattering_matrix(p, u0, k, **kw)
    a = s[..., 0, 0]
    return a, -s[..., 0, 1], -s[..., 1, 0] / a


def reflection(p: Params, u0: InitialDatum, k, **kw):
    return spectral_functions(p, u0, k, **kw)[2]


def pure_step_reflection(p: Params, k):
    """Closed form for the pure step, where s = s_b."""
    k = np.asarray(k, dtype=float)
    d = np.empty(k.shape, complex)
    cut = bg.on_cut(p, k)
    d[~cut] = bg.Delta(p, k[~cut])
    d[cut] = bg.Delta(p, k[cut], "plus")
    d2 = d * d
    return 1j * (d2 - 1) / (d2 + 1)


# ----------------------------------------------------- reflection sources

class Reflection:
    """r(k) as a memoised, vectorised callable.

    Besides ``r`` itself it exposes ``log_one_minus_abs2`` (computed as
    ``-2 log|a|``, which stays accurate where |r| is close to 1 near the
    branch points) and ``arg_cut`` for samples on the cut.
    """

    def __init__(self, p: Params, u0: InitialDatum | None = None, *, closed_form=None,
                 step_factor: float = STEP_FACTOR, threads: int = 1):
        if (u0 is None) == (closed_form is None):
            raise ValueError("give exactly one of u0 or closed_form")
        self.p = p
        self.u0 = u0
        self.closed_form = closed_form
        self.step_factor = step_factor
        self.threads = threads
        self._cache: dict[float, tuple[complex, complex]] = {}
        self._K_max: float | None = None

    @property
    def K_max(self) -> float:
        """Truncation point for integrals over the real line."""
        if self._K_max is None:
            self._K_max = estimate_K_max(self.p, self, GridConfig())
        return self._K_max

    @K_max.setter
    def K_max(self, value: float):
        self._K_max = float(value)

    @classmethod
    def pure_step(cls, p: Params):
        def cf(k):
            r = pure_step_reflection(p, k)
            d = np.empty(np.shape(k), complex)
            cut = bg.on_cut(p, k)
            d[~cut] = bg.Delta(p, np.asarray(k)[~cut])
            d[cut] = bg.Delta(p, np.asarray(k)[cut], "plus")
            return (d + 1 / d) / 2, r

        out = cls(p, closed_form=cf)
        # r decays only like 1/k here; the closed form is cheap, so integrate far out
        out.K_max = 1e4
        return out

    def _eval(self, k: np.ndarray):
        k = np.asarray(k, dtype=float)
        flat = k.ravel()
        missing = [x for x in dict.fromkeys(flat.tolist()) if x not in self._cache]
        if missing:
            km = np.array(missing)
            if self.closed_form is not None:
                a, r = self.closed_form(km)
            else:
                a, _, r = spectral_functions(self.p, self.u0, km, step_factor=self.step_factor,
                                             threads=self.threads)
            for x, aa, rr in zip(missing, a, r):
                self._cache[x] = (complex(aa), complex(rr))
        a = np.array([self._cache[x][0] for x in flat.tolist()], complex).reshape(k.shape)
        r = np.array([self._cache[x][1] for x in flat.tolist()], complex).reshape(k.shape)
        return a, r

    def __call__(self, k):
        return self._eval(k)[1]

    def a(self, k):
        return self._eval(k)[0]

    def log_one_minus_abs2(self, k):
        """log(1 - |r|^2) = -2 log|a| off the cut."""
        return -2 * np.log(np.abs(self._eval(k)[0]))


# --------------------------------------------------------- trace formula

def large_k_coeffs(p: Params, u0: InitialDatum, *, n: int = 4000):
    """a1 = (i/2)(Gamma1(0) - Lambda1(0)) by quadrature of the mass integrals."""
    from scipy.integrate import quad

    lo = min(u0.x_min, -1e-12)
    hi = max(u0.x_max, 1e-12)
    g1, _ = quad(lambda x: abs(complex(u0(x, -1))) ** 2 - p.alpha**2, lo, 0.0, limit=400, epsabs=1e-13)
    l1, _ = quad(lambda x: abs(complex(u0(x, 1))) ** 2, 0.0, hi, limit=400, epsabs=1e-13)
    gamma1, lambda1 = g1, -l1
    return 0.5j * (gamma1 - lambda1)


# ------------------------------------------------------ branch expansions

def branch_coeffs(k, r, E: float, which: int, side: str, L: int):
    """Least-squares fit of the one-sided expansion of r at a branch point.

    ``which`` is 1 or 2 (E1 or E2), ``side`` is 'above' (k > E) or
    'below' (k < E).  Returns (q, rms) where q[l] are the coefficients in
    the normalisation of the expansion relevant for E_which, i.e. the
    one-sided twists (i^l, (-1)^l) are undone.
    """
    k = np.asarray(k, dtype=float)
    r = np.asarray(r, dtype=complex)
    sigma = np.sqrt(np.abs(k - E))
    l = np.arange(L + 1)
    if which == 2:
        twist = np.ones(L + 1, complex) if side == "above" else 1j ** l
    elif which == 1:
        twist = 1j ** l if side == "above" else (-1.0) ** l
    else:
        raise ValueError("which must be 1 or 2")
    A = (sigma[:, None] ** l[None, :]) * twist[None, :]
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1e12:
        raise ValueError(f"ill-conditioned branch fit (cond={cond:.2e})")
    q, *_ = np.linalg.lstsq(A, r, rcond=None)
    rms = float(np.sqrt(np.mean(np.abs(A @ q - r) ** 2)))
    return q, rms


def constraint_residuals(q) -> list[float]:
    """|sum_l i^(n-l) (-i)^l q_(n-l) conj(q_l)| for n = 1..len(q)-1."""
    q = np.asarray(q, complex)
    out = []
    for n in range(1, q.size):
        s = sum(1j ** (n - l) * (-1j) ** l * q[n - l] * np.conj(q[l]) for l in range(n + 1))
        out.append(float(abs(s)))
    return out


# ------------------------------------------------------- ScatteringData

@dataclass(frozen=True)
class GridConfig:
    K_max: float | None = None
    dk: float = 0.02
    refine_floor: float = 1e-4
    refine_ratio: float = 1.25
    fit_window: float | None = None
    fit_order: int | None = None
    step_factor: float = STEP_FACTOR
    K_cap: float = 60.0
    r_floor: float = 1e-8


@dataclass(frozen=True)
class ScatteringData:
    kgrid: np.ndarray
    a: np.ndarray
    b: np.ndarray
    r: np.ndarray
    q: dict
    K_max: float
    meta: dict = field(default_factory=dict)
    source: Reflection | None = field(default=None, compare=False, repr=False)

    def __call__(self, k):
        if self.source is None:
            raise RuntimeError("no evaluator attached; rebuild with build_scattering_data")
        return self.source(k)


def make_kgrid(p: Params, K: float, cfg: GridConfig) -> np.ndarray:
    pts = set(np.arange(-K, K + cfg.dk / 2, cfg.dk).round(12).tolist())
    for E in (p.E1, p.E2):
        d = cfg.refine_floor
        while d < 4 * cfg.dk:
            pts.add(E - d)
            pts.add(E + d)
            d *= cfg.refine_ratio
    pts = np.array(sorted(x for x in pts if abs(x - p.E1) >= cfg.refine_floor / 2
                          and abs(x - p.E2) >= cfg.refine_floor / 2 and -K <= x <= K))
    return pts


def estimate_K_max(p: Params, refl: Reflection, cfg: GridConfig) -> float:
    """Smallest probed |k| beyond which |r| stays below ``r_floor`` on both sides."""
    K = max(abs(p.E1), abs(p.E2)) + 1.0
    while K < cfg.K_cap:
        probe = np.array([-K, -0.75 * K - 0.25 * p.E1, 0.75 * K + 0.25 * p.E2, K])
        if np.all(np.abs(refl(probe)) < cfg.r_floor):
            return float(K)
        K *= 1.5
    return float(cfg.K_cap)


def build_scattering_data(p: Params, u0: InitialDatum, cfg: GridConfig = GridConfig(), *,
                          threads: int = 1, tol: float = 1e-3) -> ScatteringData:
    refl = Reflection(p, u0, step_factor=cfg.step_factor, threads=threads)
    K = cfg.K_max if cfg.K_max is not None else estimate_K_max(p, refl, cfg)
    kg = make_kgrid(p, K, cfg)
    a, b, r = spectral_functions(p, u0, kg, step_factor=cfg.step_factor, threads=threads)
    for x, aa, rr in zip(kg.tolist(), a, r):
        refl._cache[x] = (complex(aa), complex(rr))
    cut = bg.on_cut(p, kg)
    window = cfg.fit_window if cfg.fit_window is not None else 0.01 * (p.E2 - p.E1)
    L = cfg.fit_order if cfg.fit_order is not None else min(u0.regularity[0] - 1, 4)
    q, fits = {}, {}
    for which, E in ((1, p.E1), (2, p.E2)):
        for side in ("above", "below"):
            sel = (np.abs(kg - E) <= window) & ((kg > E) if side == "above" else (kg < E))
            try:
                qq, rms = branch_coeffs(kg[sel], r[sel], E, which, side, L)
            except (ValueError, np.linalg.LinAlgError) as exc:
                fits[f"E{which}_{side}"] = {"error": str(exc)}
                continue
            q[(which, side)] = qq
            fits[f"E{which}_{side}"] = {"rms": rms, "n": int(sel.sum())}
    diag = {
        "n_k": int(kg.size),
        "K_max": K,
        "cut_unitarity": float(np.max(np.abs(np.abs(r[cut]) - 1))) if cut.any() else 0.0,
        "max_abs_r_off_cut": float(np.max(np.abs(r[~cut]))),
        "det_residual_off_cut": float(np.max(np.abs(np.abs(a[~cut]) ** 2 - np.abs(b[~cut]) ** 2 - 1))),
        "min_abs_a_off_cut": float(np.min(np.abs(a[~cut]))),
        "cut_a_plus_b": float(np.max(np.abs(a[cut] + b[cut]))) if cut.any() else 0.0,
        "fits": fits,
    }
    violations = []
    if diag["cut_unitarity"] > tol:
        violations.append(("cut_unitarity", diag["cut_unitarity"]))
    if diag["max_abs_r_off_cut"] >= 1:
        i = int(np.argmax(np.abs(np.where(cut, 0, r))))
        violations.append(("off_cut_abs_r>=1", float(kg[i])))
    if diag["min_abs_a_off_cut"] < 1 - tol:
        i = int(np.argmin(np.abs(np.where(cut, np.inf, a))))
        violations.append(("abs_a<1", float(kg[i])))
    if diag["det_residual_off_cut"] > tol:
        violations.append(("det_s", diag["det_residual_off_cut"]))
    for key, qq in q.items():
        if abs(abs(qq[0]) - 1) > 1e-2:
            violations.append((f"|q0|!=1 at E{key[0]} {key[1]}", float(abs(qq[0]))))
    diag["violations"] = violations
    meta = {"grid": {"dk": cfg.dk, "refine_floor": cfg.refine_floor, "refine_ratio": cfg.refine_ratio,
                     "step_factor": cfg.step_factor}, "datum": u0.name,
            "params": {"alpha": p.alpha, "beta": p.beta, "delta": p.delta}, "diagnostics": diag}
    refl.K_max = K
    return ScatteringData(kg, a, b, r, q, K, meta, refl)
