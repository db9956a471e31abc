"""Singular Cauchy integrals on intervals and half-lines.

Everything here reduces to composite Gauss rules whose nodes come from the
Golub-Welsch eigenvalue method.  Square-root endpoint weights are removed
by substitution (``s = E -/+ tau**2`` or ``s = c - h cos(theta)``), and
integrable logarithms at an endpoint are handled by geometric grading plus
an analytic ``A + B log(tau)`` model on the innermost panel.

Densities are plain callables ``f(s) -> ndarray`` evaluated on arrays of
nodes.  They are called once per integral with all nodes at once, so
expensive densities (the reflection coefficient) can batch their work.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


# ---------------------------------------------------------------- Gauss rules

def golub_welsch(a_rec: np.ndarray, b_rec: np.ndarray, mu0: float):
    """Nodes and weights from the three-term recurrence.

    ``a_rec`` holds the diagonal and ``b_rec`` the (positive) off-diagonal
    of the Jacobi matrix; ``mu0`` is the total mass of the weight.
    """
    J = np.diag(a_rec) + np.diag(b_rec, 1) + np.diag(b_rec, -1)
    nodes, vecs = np.linalg.eigh(J)
    weights = mu0 * vecs[0, :] ** 2
    return nodes, weights


@lru_cache(maxsize=None)
def gauss_jacobi(n: int, a: float, b: float):
    """Gauss rule for the weight (1-t)**a (1+t)**b on [-1, 1]."""
    if n < 1:
        raise ValueError("n must be positive")
    if a <= -1 or b <= -1:
        raise ValueError("Jacobi exponents must exceed -1")
    k = np.arange(n, dtype=float)
    s = 2 * k + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = np.where(s * (s + 2) != 0, (b * b - a * a) / (s * (s + 2)), (b - a) / (a + b + 2))
    kk = k[1:]
    s1 = 2 * kk + a + b
    off = np.sqrt(4 * kk * (kk + a) * (kk + b) * (kk + a + b) / (s1 * s1 * (s1 + 1) * (s1 - 1)))
    mu0 = math.exp((a + b + 1) * math.log(2) + math.lgamma(a + 1) + math.lgamma(b + 1) - math.lgamma(a + b + 2))
    x, w = golub_welsch(diag, off, mu0)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int):
    return gauss_jacobi(n, 0.0, 0.0)


def composite(edges, n: int = 16):
    """Composite Gauss-Legendre nodes/weights over consecutive edges."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(n)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = (lo + hi) / 2 + (hi - lo) / 2 * x
    weights = (hi - lo) / 2 * w
    return nodes.ravel(), weights.ravel()


def graded_edges(a: float, b: float, point: float, smallest: float, ratio: float = 2.0):
    """Panel edges on [a, b] refined geometrically toward ``point``."""
    point = min(max(point, a), b)
    out = {a, b, point}
    for lo, hi, sgn in ((a, point, -1), (point, b, 1)):
        length = hi - lo
        if length <= 0:
            continue
        d = smallest
        while d < length:
            out.add(point + sgn * d)
            d *= ratio
    return np.array(sorted(out))


# ------------------------------------------------------- endpoint integrals

def _tau_integral(fun, T: float, *, inner: float = 1e-5, n: int = 16, far_width: float = 0.5):
    """Integral of ``fun(tau)`` over [0, T].

    ``fun`` may behave like A + B log(tau) at 0; the innermost panel
    [0, inner] is integrated from that model fitted at ``inner`` and
    ``inner/2``.
    """
    if T <= 0:
        return 0.0
    inner = min(inner, T / 4)
    edges = [inner]
    while edges[-1] * 2 < min(T, 1.0):
        edges.append(edges[-1] * 2)
    if T > edges[-1]:
        m = max(1, int(math.ceil((T - edges[-1]) / far_width)))
        edges.extend(np.linspace(edges[-1], T, m + 1)[1:])
    nodes, weights = composite(edges, n)
    probe = np.array([inner, inner / 2])
    vals = fun(np.concatenate([nodes, probe]))
    main = np.dot(weights, vals[:-2])
    f1, f2 = vals[-2], vals[-1]
    B = (f1 - f2) / math.log(2)
    A = f1 - B * math.log(inner)
    return main + inner * (A + B * (math.log(inner) - 1))


def halfline_sqrt_integral(fun, E: float, direction: int, extent: float, **kw):
    """Integral of fun(s)/sqrt(|s-E|) for s between E and E + direction*extent.

    ``fun`` is smooth, or smooth plus a logarithm of |s - E|.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    T = math.sqrt(extent)
    return _tau_integral(lambda tau: 2 * fun(E + direction * tau * tau), T, **kw)


def cauchy_halfline(density, E1: float, k, *, other: float, K_max: float, **kw):
    """Integral over (-inf, E1] of density(s) / (X(s) (s - k)).

    ``X(s) = -sqrt((E1 - s)(other - s))`` is the real, negative value on the
    half-line of the square root with branch points ``E1 <= other`` that
    grows like ``s`` at infinity.  The integral is truncated at s = -K_max.
    """
    k = complex(k)
    if other < E1:
        raise ValueError("other branch point must lie right of E1")
    if k.imag == 0 and k.real <= E1:
        raise ValueError("k lies on the integration half-line")
    extent = E1 + K_max
    if extent <= 0:
        return 0.0

    def fun(s):
        return density(s) / (-np.sqrt(other - s) * (s - k))

    return halfline_sqrt_integral(fun, E1, -1, extent, **kw)


def cut_values(Ea: float, Eb: float, k, side: str = "interior"):
    """sqrt((k-Ea)(k-Eb)) with cut [Ea, Eb], ~k at infinity, or its boundary values."""
    k = np.asarray(k, dtype=complex)
    if side == "interior":
        return np.sqrt(k - Ea) * np.sqrt(k - Eb)
    val = 1j * np.sqrt((k.real - Ea) * (Eb - k.real))
    return val if side == "plus" else -val


def pure_weight_cauchy(Ea: float, Eb: float, k, side: str = "interior"):
    """Closed form of the integral of 1/(X+(s)(s-k)) over [Ea, Eb]: pi i / X(k)."""
    return np.pi * 1j / cut_values(Ea, Eb, k, side)


def cauchy_cut_weighted(density, Ea: float, Eb: float, k, side: str = "interior",
                        *, n: int = 64, near: float = 0.05):
    """Integral over [Ea, Eb] of density(s) / (X+(s) (s - k)).

    Here ``X+(s) = i sqrt((s-Ea)(Eb-s))``.  With ``s = c - h cos(theta)``
    the weight disappears (ds / sqrt(...) = d theta), which is the
    Gauss-Chebyshev treatment of both endpoints.  Near the interval the
    density at the foot point is subtracted and its pure-weight integral
    added back in closed form.  ``side`` gives boundary values for k on
    the open interval.
    """
    k = complex(k)
    c, h = (Ea + Eb) / 2, (Eb - Ea) / 2
    length = Eb - Ea
    on = k.imag == 0 and Ea < k.real < Eb
    if on and side == "interior":
        raise ValueError("k on the open interval needs side='plus' or 'minus'")
    if not on and side != "interior":
        raise ValueError("side given for k off the open interval")
    if k.imag == 0 and k.real in (Ea, Eb):
        raise ValueError("k at an endpoint")
    foot = min(max(k.real, Ea), Eb)
    dist = abs(k - foot)
    if dist >= near * length:
        th, w = composite(np.linspace(0, np.pi, max(2, n // 16) + 1), 16)
        s = c - h * np.cos(th)
        return np.dot(w, density(s) / (s - k)) / 1j
    theta_foot = math.acos(min(1.0, max(-1.0, (c - foot) / h)))
    if dist == 0:
        # k on the interval: the subtracted integrand is smooth, only split at the foot
        edges = np.unique(np.concatenate([np.linspace(0, np.pi, max(2, n // 16) + 1), [theta_foot]]))
    else:
        edges = graded_edges(0.0, np.pi, theta_foot, max(min(dist, 1.0) / h, 1e-14) / 4)
    th, w = composite(edges, 16)
    s = c - h * np.cos(th)
    vals = density(np.concatenate([s, [foot]]))
    dfoot = vals[-1]
    reg = np.dot(w, (vals[:-1] - dfoot) / (s - k)) / 1j
    return reg + dfoot * pure_weight_cauchy(Ea, Eb, k, side)


def stieltjes_dlog(h, k0: float, K_max: float, *, n: int = 16):
    """Integral over (-inf, k0] of log(k0 - s) dh(s), with h(-inf) = 0.

    Integrating by parts on (-inf, k0-1] and on [k0-1, k0] separately
    gives the derivative-free form

        int_{-K}^{k0-1} h(s)/(k0-s) ds + int_{k0-1}^{k0} (h(s)-h(k0))/(k0-s) ds

    whose integrands are bounded.  The first piece uses panels graded
    toward k0-1, the second a Gauss rule.
    """
    lo = -K_max
    mid = k0 - 1.0
    parts = []
    if lo < mid:
        edges = np.concatenate([np.linspace(lo, mid - 1, max(2, int(mid - 1 - lo) + 1)), [mid]]) \
            if mid - 1 > lo else np.array([lo, mid])
        parts.append(composite(np.unique(edges), n))
    s_far, w_far = parts[0] if parts else (np.empty(0), np.empty(0))
    s_near, w_near = composite(graded_edges(mid, k0, k0, 1e-3), n)
    vals = h(np.concatenate([s_far, s_near, [k0]]))
    hk0 = vals[-1]
    far = np.dot(w_far, vals[: s_far.size] / (k0 - s_far))
    nearv = np.dot(w_near, (vals[s_far.size:-1] - hk0) / (k0 - s_near))
    return float(np.real(far + nearv))


# ---------------------------------------------------- endpoint expansions

def h_closed(a: float, b: float, z):
    """Integral of 1/(sqrt(b-s)(s-z)) over [a, b]."""
    z = np.asarray(z, dtype=complex)
    r = np.sqrt(z - b)
    return (2 * np.arctan(r / math.sqrt(b - a)) - np.pi) / r


def h_coeff(a: float, b: float, n: int) -> float:
    """Taylor coefficients of the regular part of h at z = b."""
    return 2 * (-1) ** n * (b - a) ** (-n - 0.5) / (2 * n + 1)


def cauchy_sqrt_endpoint(g0, a: float, b: float, z, *, n: int = 64, near: float = 0.05):
    """Integral over [a, b] of g0(s) / (sqrt(b-s) (s-z)).

    Far from [a, b] a Gauss-Jacobi rule with weight (b-s)**(-1/2) is used
    directly.  Close to it, g0 at the foot point is subtracted (its part is
    ``h_closed``) and the remainder integrated in tau = sqrt(b-s) on panels
    graded toward the foot point.
    """
    z = complex(z)
    if z.imag == 0 and z.real <= b:
        raise ValueError("z must lie off (-inf, b]")
    foot = min(max(z.real, a), b)
    dist = abs(z - foot)
    L = b - a
    if dist >= near * L:
        x, w = gauss_jacobi(n, -0.5, 0.0)
        s = (a + b) / 2 + L / 2 * x
        return complex(np.dot(w * math.sqrt(L / 2), g0(s) / (s - z)))
    T = math.sqrt(L)
    tau_foot = math.sqrt(b - foot)
    # pole of the tau-integrand sits at sqrt(b - z); grade down to its distance from the foot
    scale = max(abs(np.sqrt(b - z) - tau_foot) / 4, 1e-12)
    tau, w = composite(graded_edges(0.0, T, tau_foot, scale), 16)
    s = b - tau * tau
    vals = g0(np.concatenate([s, [foot]]))
    gf = vals[-1]
    reg = np.dot(w, 2 * (vals[:-1] - gf) / (s - z))
    return complex(reg + gf * h_closed(a, b, z))


@dataclass(frozen=True)
class EndpointExpansion:
    """f0(z) = sum singular[n] (z-b)^(n-1/2) + sum regular[n] (z-b)^n + ..."""

    singular_coeffs: tuple
    regular_coeffs: tuple
    interval: tuple
    order: int
    endpoint: str = "right"
    C: tuple = field(default=())

    def __call__(self, z):
        a, b = self.interval
        z = np.asarray(z, dtype=complex)
        if self.endpoint == "right":
            w = z - b
            total = sum(c * w ** (j - 0.5) for j, c in enumerate(self.singular_coeffs))
            total = total + sum(c * w**j for j, c in enumerate(self.regular_coeffs))
            return total
        # left endpoint: f(z) = -F(a + b - z), F the right-endpoint transform
        w = a - z
        total = sum(c * w ** (j - 0.5) for j, c in enumerate(self.singular_coeffs))
        total = total + sum(c * w**j for j, c in enumerate(self.regular_coeffs))
        return -total


def _taylor_remainder_quotient(g0, derivs, b: float, m: int):
    """g_m(s) = (g0(s) - sum_{j<m} g0^(j)(b)/j! (s-b)^j) / (s-b)^m, stably."""

    def gm(s):
        s = np.asarray(s, dtype=float)
        d = s - b
        poly = sum(derivs[j] / math.factorial(j) * d**j for j in range(m))
        out = np.empty_like(d)
        small = np.abs(d) < 1e-5 * max(1.0, abs(b))
        big = ~small
        out[big] = (g0(s[big]) - poly[big]) / d[big] ** m
        if np.any(small):
            # Taylor tail for the cancellation-prone region
            acc = np.zeros(np.count_nonzero(small))
            for j in range(m, len(derivs)):
                acc = acc + derivs[j] / math.factorial(j) * d[small] ** (j - m)
            out[small] = acc
        return out

    return gm


def endpoint_expansion(g0, derivs, a: float, b: float, N: int, *, endpoint: str = "right",
                       n: int = 64) -> EndpointExpansion:
    """Expansion of f0 near the endpoint (default b) to order N.

    ``derivs[j]`` is the j-th derivative of g0 at the endpoint, for
    j = 0..N (more entries improve the stable evaluation of the remainder
    quotients near the endpoint).  For ``endpoint='left'`` the transform
    ``int g0(s)/sqrt(s-a) ds/(s-z)`` is expanded at ``a`` by reflecting
    s -> a + b - s; the derivatives are then taken at ``a``.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    if len(derivs) < N + 1:
        raise ValueError("need derivatives of orders 0..N")
    if endpoint not in ("right", "left"):
        raise ValueError("endpoint must be 'right' or 'left'")
    if endpoint == "left":
        # G0(s) = g0(a + b - s) has derivatives (-1)^j g0^(j)(a) at b
        G0 = lambda s: g0(a + b - np.asarray(s))  # noqa: E731
        Gd = [(-1) ** j * d for j, d in enumerate(derivs)]
        base = endpoint_expansion(G0, Gd, a, b, N, n=n)
        return EndpointExpansion(base.singular_coeffs, base.regular_coeffs, (a, b), N, "left", base.C)
    x, w = gauss_jacobi(n, -0.5, 0.0)
    L = b - a
    s = (a + b) / 2 + L / 2 * x
    wj = w * math.sqrt(L / 2)
    singular = tuple(-math.pi * derivs[j] / math.factorial(j) for j in range(N + 1))
    Cs = []
    regular = []
    for m in range(N):
        gm1 = _taylor_remainder_quotient(g0, derivs, b, m + 1)
        Cm = float(np.dot(wj, gm1(s)))
        Cs.append(Cm)
        val = sum(derivs[j] / math.factorial(j) * h_coeff(a, b, m - j) for j in range(m + 1)) + Cm
        regular.append(val)
    return EndpointExpansion(singular, tuple(regular), (a, b), N, "right", tuple(Cs))
