"""Scaled addition of pmfs through a lossless two-mode beamsplitter.

Two number-diagonal inputs with photon-number pmfs ``p_X`` and ``p_Y`` are
mixed on a beamsplitter of transmissivity ``eta``; the photon number in the
output mode ``z = sqrt(eta) x + sqrt(1-eta) y`` has pmf::

    p_Z[p] = sum_{n,m} p_X[n] p_Y[m] A(p | n, m; eta)

``A(p | n, m)`` is the squared modulus of the Fock-basis matrix element of
the beamsplitter unitary.  Phase convention for the mode map::

    (x, y) -> (sqrt(eta) x + sqrt(1-eta) y,  -sqrt(1-eta) x + sqrt(eta) y)

Phases cancel in ``|amp|^2`` so results do not depend on it.

Numerics: within the block of fixed total photon number ``N`` the unitary
is ``exp(theta G_N)`` with ``cos(theta) = sqrt(eta)`` and ``G_N`` the real
antisymmetric tridiagonal generator ``a_x^dag a_y - a_y^dag a_x``.  ``G_N``
is diagonalised once per ``N`` through the symmetric tridiagonal matrix with
the same off-diagonal entries (eigenvalues exactly ``-N, -N+2, ..., N``) and
the eta dependence enters only through ``cos``/``sin`` of ``theta`` times
those eigenvalues.  The closed-form binomial sum for the amplitude is
alternating and loses about ``N/2`` bits to cancellation near ``eta = 1/2``;
this route stays at a few ulps for all ``N``.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import CapacityError, ParameterError
from .pmf import DEFAULT_POLICY, Pmf, TailPolicy, convolve, finalize
from .thinning import _snap_eta, thin

#: largest total photon number a materialised kernel may hold
MAX_KERNEL_TOTAL = 1024


@lru_cache(maxsize=256)
def _generator_eigvecs(total: int) -> np.ndarray:
    """Orthonormal eigenvectors (columns, ascending eigenvalue) of the block generator."""
    if total == 0:
        return np.ones((1, 1))
    n = np.arange(total)
    off = np.sqrt((n + 1.0) * (total - n))
    evals, evecs = eigh_tridiagonal(np.zeros(total + 1), off)
    exact = -total + 2.0 * np.arange(total + 1)
    if np.max(np.abs(evals - exact)) > 1e-8 * (total + 1):
        raise ArithmeticError(f"generator spectrum check failed for N={total}")
    evecs.setflags(write=False)
    return evecs


def transition_block(total: int, eta: float) -> np.ndarray:
    """``B[p, n] = A(p | n, total - n; eta)`` for one photon-number block.

    Columns are indexed by the photon number ``n`` entering mode ``x``,
    rows by the photon number ``p`` leaving in mode ``z``.
    """
    if total < 0:
        raise ParameterError("total photon number must be >= 0")
    if eta == 1.0 or eta == 0.0:
        block = np.eye(total + 1)
        return block if eta == 1.0 else block[::-1].copy()
    v = _generator_eigvecs(total)
    phase = math.acos(math.sqrt(eta)) * (-total + 2.0 * np.arange(total + 1))
    re = (v * np.cos(phase)) @ v.T
    im = (v * np.sin(phase)) @ v.T
    return re * re + im * im


@dataclass(eq=False)
class FockKernel:
    """Beamsplitter transition probabilities ``A(p | n, m)`` for ``n + m <= max_total``.

    Blocks of constant ``n + m`` are computed on first access and cached;
    the cache is guarded by a lock so a kernel may be shared across threads.
    """

    eta: float
    max_total: int
    _blocks: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def block(self, total: int) -> np.ndarray:
        if not 0 <= total <= self.max_total:
            raise ParameterError(f"total photon number {total} outside kernel range 0..{self.max_total}")
        blk = self._blocks.get(total)
        if blk is None:
            with self._lock:
                blk = self._blocks.get(total)
                if blk is None:
                    blk = transition_block(total, self.eta)
                    blk.setflags(write=False)
                    self._blocks[total] = blk
        return blk

    def row(self, n: int, m: int) -> np.ndarray:
        """Output photon-number distribution ``A(. | n, m)`` (length ``n + m + 1``)."""
        if n < 0 or m < 0:
            raise ParameterError("photon numbers must be non-negative")
        return self.block(n + m)[:, n]

    def __getitem__(self, nm) -> np.ndarray:
        return self.row(*nm)

    def entries(self) -> Iterator[tuple[int, int, int, float]]:
        """Yield ``(n, m, p, prob)`` in lexicographic ``(n+m, n, p)`` order."""
        for total in range(self.max_total + 1):
            blk = self.block(total)
            for n in range(total + 1):
                for p in range(total + 1):
                    yield n, total - n, p, float(blk[p, n])


def build_kernel(eta: float, max_total: int) -> FockKernel:
    if not 0.0 < eta < 1.0:
        raise ParameterError(f"kernel eta must lie in (0, 1), got {eta}")
    if int(max_total) != max_total or max_total < 0:
        raise ParameterError(f"max_total must be a non-negative integer, got {max_total}")
    if max_total > MAX_KERNEL_TOTAL:
        raise CapacityError(f"max_total {max_total} exceeds kernel capacity {MAX_KERNEL_TOTAL}")
    return FockKernel(float(eta), int(max_total))


class _BlockCache:
    """Byte-bounded LRU of transition blocks keyed by ``(eta, total)``."""

    def __init__(self, max_bytes: int = 256 << 20):
        self.max_bytes = max_bytes
        self._data: OrderedDict = OrderedDict()
        self._bytes = 0
        self._lock = threading.Lock()

    def get(self, eta: float, total: int) -> np.ndarray:
        key = (eta, total)
        with self._lock:
            blk = self._data.get(key)
            if blk is not None:
                self._data.move_to_end(key)
                return blk
        blk = transition_block(total, eta)
        blk.setflags(write=False)
        with self._lock:
            if key not in self._data:
                self._data[key] = blk
                self._bytes += blk.nbytes
                while self._bytes > self.max_bytes and len(self._data) > 1:
                    _, old = self._data.popitem(last=False)
                    self._bytes -= old.nbytes
        return blk


_block_cache = _BlockCache()


def boxplus(x: Pmf, y: Pmf, eta: float, policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    """Beamsplitter scaled addition; ``eta`` weights ``x``, ``1 - eta`` weights ``y``."""
    eta = _snap_eta(eta)
    if eta == 1.0:
        return x
    if eta == 0.0:
        return y
    px, py = x.probs, y.probs
    cx, cy = x.cutoff, y.cutoff
    out = np.zeros(cx + cy + 1)
    for total in range(cx + cy + 1):
        lo, hi = max(0, total - cy), min(cx, total)
        # w[n] = p_X[n] p_Y[total - n] over the admissible n
        w = px[lo : hi + 1] * py[total - hi : total - lo + 1][::-1]
        if not w.any():
            continue
        out[: total + 1] += _block_cache.get(eta, total)[:, lo : hi + 1] @ w
    deficit = x.tail_deficit + y.tail_deficit - x.tail_deficit * y.tail_deficit
    return finalize(out, deficit, policy)


def cascade_weights(weights: Sequence[float]) -> list[float | None]:
    """Transmissivities of the left-fold cascade; ``None`` for the first slot."""
    taus: list[float | None] = [None]
    acc = float(weights[0])
    for w in weights[1:]:
        new = acc + w
        taus.append(acc / new if new > 0 else None)
        acc = new
    return taus


def _check_weights(weights: Sequence[float]) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0 or np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ParameterError("weights must be a non-empty sequence of non-negative reals")
    if abs(math.fsum(w) - 1.0) > 1e-12:
        raise ParameterError(f"weights must sum to 1, got {math.fsum(w)!r}")
    return w


def boxplus_multi(xs: Sequence[Pmf], weights: Sequence[float], policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    """Weighted scaled addition of several inputs.

    Realised as the cascade ``Z_k = boxplus(Z_{k-1}, X_k, tau_k)`` with
    ``tau_k = sum_{i<k} w_i / sum_{i<=k} w_i``, whose output mode is
    ``sum_i sqrt(w_i) x_i``.  Zero-weight inputs are skipped.
    """
    w = _check_weights(weights)
    if len(xs) != w.size:
        raise ParameterError(f"{len(xs)} pmfs but {w.size} weights")
    z = xs[0]
    for x, tau in zip(xs[1:], cascade_weights(w)[1:]):
        if tau is not None:
            z = boxplus(z, x, tau, policy)
    return z


def boxplus_yj(x: Pmf, y: Pmf, eta: float, policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    """Thin-then-add scaled addition ``T_eta X + T_(1-eta) Y`` (for comparison)."""
    eta = _snap_eta(eta)
    return convolve(thin(x, eta, policy), thin(y, 1.0 - eta, policy), policy)

