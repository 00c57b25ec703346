"""Phase-space cross-check of the beamsplitter scaled addition.

A pmf ``p`` maps to the circularly symmetric density on the complex plane::

    p_c(r) = (1/pi) sum_n p[n] exp(-|r|^2) |r|^(2n) / n!

Writing ``u = |r|^2`` this is ``f(u) / pi`` with ``f`` a Poisson-kernel
mixture that integrates to one over ``u >= 0``.  Under beamsplitter mixing
the transformed densities add as ``sqrt(eta) X_c + sqrt(1-eta) Y_c``, so the
density of the output pmf must match a 2-D convolution of the rescaled input
densities.  The check is numerical and loose by design; the Fock-basis
route in :mod:`discrete_epi.beamsplitter` is the exact one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special
from scipy.signal import fftconvolve

from .beamsplitter import boxplus
from .errors import OracleResolutionError, ParameterError
from .pmf import DEFAULT_POLICY, Pmf, TailPolicy

TAIL_TOL = 1e-8
DEFAULT_SAMPLES = 512
MIN_HALF_WIDTH = 8


@dataclass(frozen=True, eq=False)
class RadialDensity:
    grid: np.ndarray
    values: np.ndarray
    u_max: float
    step: float

    def mass(self) -> float:
        return float(integrate.simpson(self.values, x=self.grid))


def husimi_values(x: Pmf, u) -> np.ndarray:
    """``f(u) = sum_n p[n] e^-u u^n / n!`` evaluated term-wise in log domain."""
    u = np.asarray(u, dtype=np.float64)
    out = np.zeros_like(u)
    for n in np.flatnonzero(x.probs > 0):
        out += x.probs[n] * np.exp(special.xlogy(n, u) - u - special.gammaln(n + 1.0))
    return out


def tail_mass(x: Pmf, u_max: float) -> float:
    """``int_{u_max}^inf f(u) du = sum_n p[n] P(Poisson(u_max) <= n)``."""
    n = np.arange(x.probs.size)
    return float(np.dot(x.probs, special.pdtr(n, u_max)))


def required_u_max(x: Pmf, tol: float = TAIL_TOL) -> float:
    hi = 8.0
    while tail_mass(x, hi) > tol:
        hi *= 2.0
    lo = hi / 2.0 if hi > 8.0 else 0.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if tail_mass(x, mid) > tol:
            lo = mid
        else:
            hi = mid
    return hi


def _check_u_max(x: Pmf, u_max: float):
    t = tail_mass(x, u_max)
    if t > TAIL_TOL:
        raise OracleResolutionError(
            f"u_max={u_max:g} leaves Husimi tail mass {t:.3g} > {TAIL_TOL:g}; need u_max >= {required_u_max(x):.4g}"
        )


def husimi_forward(x: Pmf, u_max: float | None = None, step: float | None = None) -> RadialDensity:
    """Radial Husimi profile of ``x`` on the uniform grid ``0, step, ..., u_max``."""
    if u_max is None:
        u_max = required_u_max(x)
    _check_u_max(x, u_max)
    if step is None:
        step = u_max / 4096
    if step <= 0 or step > 0.25 or u_max / step < 64:
        raise OracleResolutionError(f"radial step {step:g} too coarse for u_max={u_max:g}")
    count = int(math.ceil(u_max / step))
    grid = np.arange(count + 1) * step
    return RadialDensity(grid, husimi_values(x, grid), float(grid[-1]), float(step))


def check_scaled_convolution(
    x: Pmf,
    y: Pmf,
    eta: float,
    u_max: float | None = None,
    step: float | None = None,
    policy: TailPolicy = DEFAULT_POLICY,
) -> float:
    """Max abs mismatch between the output profile and the convolved input profiles.

    ``step`` is the Cartesian spacing of the square grid of half-side
    ``sqrt(u_max)``; by default it gives 512 intervals per axis.  The
    convolved density is sampled along the four half-axes, averaged, and
    compared with the radial profile of ``boxplus(x, y, eta)`` at the same
    ``u = r^2`` points.
    """
    if not 0.0 < eta < 1.0:
        raise ParameterError(f"eta must lie in (0, 1) for the Husimi check, got {eta}")
    z = boxplus(x, y, eta, policy)
    if u_max is None:
        u_max = max(required_u_max(x), required_u_max(y), required_u_max(z))
    for p in (x, y, z):
        _check_u_max(p, u_max)
    half = math.sqrt(u_max)
    if step is None:
        step = 2.0 * half / DEFAULT_SAMPLES
    m = int(math.ceil(half / step))
    if m < MIN_HALF_WIDTH:
        raise OracleResolutionError(f"Cartesian step {step:g} gives only {2 * m + 1} samples per axis")
    c = step * np.arange(-m, m + 1)
    u2d = c[:, None] ** 2 + c[None, :] ** 2
    qx = husimi_values(x, u2d / eta) / (math.pi * eta)
    qy = husimi_values(y, u2d / (1.0 - eta)) / (math.pi * (1.0 - eta))
    pz = fftconvolve(qx, qy, mode="same") * step * step
    rays = np.stack([pz[m, m:], pz[m, m::-1], pz[m:, m], pz[m::-1, m]])
    rhs = math.pi * rays.mean(axis=0)
    lhs = husimi_values(z, c[m:] ** 2)
    return float(np.max(np.abs(lhs - rhs)))
