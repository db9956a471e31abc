"""Access to r(k) for the sector formulas, and the continuous branch of log r on the cut."""
from __future__ import annotations

import numpy as np

from ..scattering import Reflection, ScatteringData


class UnwrapError(RuntimeError):
    pass


def reflection_source(r) -> Reflection:
    if isinstance(r, ScatteringData):
        if r.source is None:
            raise ValueError("ScatteringData has no evaluator attached")
        return r.source
    if isinstance(r, Reflection):
        return r
    raise TypeError("expected ScatteringData or Reflection")


class CutLog:
    """log r(s) on [E1, E2] with arg r continuous, seeded by the principal value at E1.

    On the cut |r| = 1, so only the argument is kept: the value is
    ``i * arg r(s) + 2 pi i * shift``.  The continuous branch is tracked on
    a Chebyshev-like reference grid which is refined until adjacent phase
    increments are below ``max_step``.
    """

    def __init__(self, src: Reflection, *, shift: int = 0, n_ref: int = 257, max_step: float = 0.5,
                 max_ref: int = 8193):
        p = src.p
        self.src = src
        self.E1, self.E2 = p.E1, p.E2
        self.shift = shift
        self.eps = 1e-9 * (p.E2 - p.E1)
        while True:
            th = np.linspace(0.0, np.pi, n_ref)
            s = self._clamp(self._s_of_theta(th))
            ang = np.angle(src(s))
            steps = np.diff(ang)
            steps = (steps + np.pi) % (2 * np.pi) - np.pi
            if np.max(np.abs(steps)) < max_step:
                break
            if n_ref >= max_ref:
                raise UnwrapError("phase of r on the cut varies too fast to unwrap")
            n_ref = 2 * n_ref - 1
        self.theta_ref = th
        self.arg_ref = ang[0] + np.concatenate([[0.0], np.cumsum(steps)])

    def _s_of_theta(self, th):
        c, h = (self.E1 + self.E2) / 2, (self.E2 - self.E1) / 2
        return c - h * np.cos(th)

    def _clamp(self, s):
        return np.clip(s, self.E1 + self.eps, self.E2 - self.eps)

    def arg(self, s):
        s = np.asarray(s, dtype=float)
        c, h = (self.E1 + self.E2) / 2, (self.E2 - self.E1) / 2
        th = np.arccos(np.clip((c - s) / h, -1.0, 1.0))
        ref = np.interp(th, self.theta_ref, self.arg_ref)
        pv = np.angle(self.src(self._clamp(s)))
        return pv + 2 * np.pi * np.round((ref - pv) / (2 * np.pi))

    def __call__(self, s):
        return 1j * (self.arg(s) + 2 * np.pi * self.shift)


def cut_log(src: Reflection, shift: int = 0) -> CutLog:
    cache = src.__dict__.setdefault("_cutlog_cache", {})
    if shift not in cache:
        cache[shift] = CutLog(src, shift=shift)
    return cache[shift]
