"""Binomial (Renyi) thinning: every unit of a count survives with probability eta."""

from __future__ import annotations

import math

import numpy as np

from .errors import ParameterError
from .pmf import DEFAULT_POLICY, Pmf, TailPolicy, finalize, log_binomial

_SNAP = 1e-15


def _snap_eta(eta: float) -> float:
    if not (0.0 <= eta <= 1.0) or math.isnan(eta):
        raise ParameterError(f"eta must lie in [0, 1], got {eta}")
    if eta < _SNAP:
        return 0.0
    if eta > 1.0 - _SNAP:
        return 1.0
    return float(eta)


def thinning_matrix(cutoff: int, eta: float) -> np.ndarray:
    """``M[n, k] = C(k, n) eta^n (1-eta)^(k-n)`` for ``0 <= n <= k <= cutoff``."""
    k = np.arange(cutoff + 1)
    n = k[:, None]
    valid = n <= k[None, :]
    nn = np.where(valid, n, 0)
    kk = np.broadcast_to(k[None, :], valid.shape)
    with np.errstate(invalid="ignore"):
        logm = log_binomial(kk, nn) + nn * math.log(eta) + (kk - nn) * math.log1p(-eta)
    return np.where(valid, np.exp(logm), 0.0)


def thin(x: Pmf, eta: float, policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    """Distribution of ``T_eta X``.

    The output support never exceeds the input cutoff, and the input tail
    deficit carries over unchanged (thinning conserves total mass).
    """
    eta = _snap_eta(eta)
    if eta == 1.0:
        return x
    if eta == 0.0:
        return finalize([1.0 - x.tail_deficit], x.tail_deficit, policy, "delta(0)")
    probs = thinning_matrix(x.cutoff, eta) @ x.probs
    return finalize(probs, x.tail_deficit, policy)
