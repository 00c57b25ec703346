"""Truncated probability mass functions on the non-negative integers.

A :class:`Pmf` stores ``probs[k]`` for ``k = 0..cutoff`` together with the
mass that was cut off beyond ``cutoff`` (``tail_deficit``).  Every operation
in the package tracks that deficit explicitly so truncation error can be
bounded by callers.  Entropies are in nats.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from .errors import ParameterError, TruncationOverflowError

#: tolerance on ``sum(probs) + tail_deficit == 1``
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class TailPolicy:
    """How much mass may be truncated, and how far supports may grow."""

    epsilon_tail: float = 1e-12
    max_cutoff: int = 4096
    renormalize: bool = False

    def __post_init__(self):
        if not 0.0 < self.epsilon_tail < 1.0:
            raise ParameterError(f"epsilon_tail must lie in (0, 1), got {self.epsilon_tail}")
        if int(self.max_cutoff) != self.max_cutoff or self.max_cutoff < 1:
            raise ParameterError(f"max_cutoff must be an integer >= 1, got {self.max_cutoff}")

    def tightened(self, factor: float = 100.0) -> "TailPolicy":
        """Stricter policy used to re-verify borderline results."""
        return TailPolicy(self.epsilon_tail / factor, 2 * self.max_cutoff, self.renormalize)


DEFAULT_POLICY = TailPolicy()


@dataclass(frozen=True, eq=False)
class Pmf:
    """Immutable truncated pmf.

    ``probs`` is copied into a read-only float64 array on construction.
    """

    probs: np.ndarray
    tail_deficit: float = 0.0
    meta: str = field(default="", compare=False)

    def __post_init__(self):
        arr = np.array(self.probs, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ParameterError("probs must be a non-empty one-dimensional sequence")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ParameterError("probs must be finite and non-negative")
        deficit = float(self.tail_deficit)
        if not math.isfinite(deficit) or deficit < 0:
            raise ParameterError(f"tail_deficit must be finite and >= 0, got {deficit}")
        total = math.fsum(arr) + deficit
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ParameterError(
                f"probs + tail_deficit sum to {total!r}, not 1 within {NORMALIZATION_TOL}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)
        object.__setattr__(self, "tail_deficit", deficit)
        object.__setattr__(self, "meta", str(self.meta or ""))

    @property
    def cutoff(self) -> int:
        return self.probs.size - 1

    def __len__(self):
        return self.probs.size

    def __getitem__(self, k: int) -> float:
        if 0 <= k < self.probs.size:
            return float(self.probs[k])
        return 0.0

    def __repr__(self):
        head = ", ".join(f"{p:.6g}" for p in self.probs[:6])
        more = ", ..." if self.probs.size > 6 else ""
        label = f", meta={self.meta!r}" if self.meta else ""
        return f"Pmf([{head}{more}], cutoff={self.cutoff}, tail_deficit={self.tail_deficit:.3g}{label})"

    def padded(self, length: int) -> np.ndarray:
        """Probabilities as a writable array of at least ``length`` entries."""
        out = np.zeros(max(length, self.probs.size))
        out[: self.probs.size] = self.probs
        return out

    def digest(self) -> str:
        """Short content hash (probabilities and deficit, not meta)."""
        h = hashlib.sha256(self.probs.tobytes())
        h.update(np.float64(self.tail_deficit).tobytes())
        return h.hexdigest()[:16]

    def with_meta(self, meta: str) -> "Pmf":
        return Pmf(self.probs, self.tail_deficit, meta)


def finalize(probs, deficit: float, policy: TailPolicy = DEFAULT_POLICY, meta: str = "") -> Pmf:
    """Trim trailing mass within the tail budget and build a :class:`Pmf`.

    The trimmed mass is added to the deficit.  When the incoming deficit
    already exceeds ``epsilon_tail`` only exact trailing zeros are dropped.
    """
    arr = np.maximum(np.asarray(probs, dtype=np.float64), 0.0)
    if arr.size == 0:
        raise ParameterError("empty probability vector")
    budget = max(policy.epsilon_tail - deficit, 0.0)
    suffix = np.cumsum(arr[::-1])[::-1]
    # suffix[L] is the mass that would be dropped by keeping arr[:L]
    dropped = np.append(suffix[1:], 0.0)
    keep = int(np.argmax(dropped <= budget)) + 1
    trimmed = math.fsum(arr[keep:])
    arr = arr[:keep]
    deficit = deficit + trimmed
    if arr.size - 1 > policy.max_cutoff:
        raise TruncationOverflowError(arr.size - 1, policy.max_cutoff)
    if policy.renormalize:
        arr = arr / math.fsum(arr)
        deficit = 0.0
    return Pmf(arr, deficit, meta)


def _check_probability(p: float, name: str = "p"):
    if not (0.0 <= p <= 1.0):
        raise ParameterError(f"{name} must lie in [0, 1], got {p}")


def _check_mean(lam: float):
    if not (math.isfinite(lam) and lam >= 0):
        raise ParameterError(f"lambda must be finite and >= 0, got {lam}")


def log_binomial(n, k):
    """``log C(n, k)`` via log-gamma; broadcasts over arrays."""
    n = np.asarray(n, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    return special.gammaln(n + 1) - special.gammaln(k + 1) - special.gammaln(n - k + 1)


def binomial_probs(n: int, p: float) -> np.ndarray:
    """Full Binomial(n, p) probability vector, evaluated in log domain."""
    k = np.arange(n + 1)
    if p == 0.0:
        out = np.zeros(n + 1)
        out[0] = 1.0
        return out
    if p == 1.0:
        out = np.zeros(n + 1)
        out[n] = 1.0
        return out
    return np.exp(log_binomial(n, k) + k * math.log(p) + (n - k) * math.log1p(-p))


def poisson_probs(lam: float, upto: int) -> np.ndarray:
    """Poisson(lam) probabilities for ``k = 0..upto`` by log-ratio recurrence.

    The recurrence keeps ``k p[k] / p[k-1] == lam`` to rounding, so the
    ultra-log-concavity of the output is not lost to log-gamma error.
    """
    if lam == 0.0:
        out = np.zeros(upto + 1)
        out[0] = 1.0
        return out
    k = np.arange(1, upto + 1)
    logp = np.concatenate(([-lam], -lam + np.cumsum(math.log(lam) - np.log(k))))
    return np.exp(logp)


def make_delta(k: int = 0) -> Pmf:
    if int(k) != k or k < 0:
        raise ParameterError(f"delta location must be a non-negative integer, got {k}")
    probs = np.zeros(int(k) + 1)
    probs[-1] = 1.0
    return Pmf(probs, 0.0, f"delta({int(k)})")


def make_bernoulli(p: float) -> Pmf:
    _check_probability(p)
    return finalize([1.0 - p, p], 0.0, TailPolicy(), f"bernoulli({p!r})")


def make_geometric(lam: float, policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    """Geometric distribution with mean ``lam``: ``(1+lam)^-1 (lam/(1+lam))^k``."""
    _check_mean(lam)
    if lam == 0.0:
        return make_delta(0).with_meta("geometric(0.0)")
    log_r = math.log(lam) - math.log1p(lam)
    cutoff = max(0, math.ceil(math.log(policy.epsilon_tail) / log_r) - 1)
    while math.exp((cutoff + 1) * log_r) > policy.epsilon_tail:
        cutoff += 1
    if cutoff > policy.max_cutoff:
        raise TruncationOverflowError(cutoff, policy.max_cutoff)
    k = np.arange(cutoff + 1)
    probs = np.exp(k * log_r - math.log1p(lam))
    deficit = math.exp((cutoff + 1) * log_r)
    if policy.renormalize:
        probs, deficit = probs / math.fsum(probs), 0.0
    return Pmf(probs, deficit, f"geometric({lam!r})")


def make_poisson(lam: float, policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    _check_mean(lam)
    if lam == 0.0:
        return make_delta(0).with_meta("poisson(0.0)")
    upto = int(math.ceil(lam + 40.0 * math.sqrt(lam) + 40.0))
    tails = special.pdtrc(np.arange(upto + 1), lam)
    cutoff = int(np.argmax(tails <= policy.epsilon_tail))
    if cutoff > policy.max_cutoff:
        raise TruncationOverflowError(cutoff, policy.max_cutoff)
    probs = poisson_probs(lam, cutoff)
    deficit = float(tails[cutoff])
    if policy.renormalize:
        probs, deficit = probs / math.fsum(probs), 0.0
    return Pmf(probs, deficit, f"poisson({lam!r})")


def make_binomial(n: int, p: float, policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    if int(n) != n or n < 0:
        raise ParameterError(f"binomial n must be a non-negative integer, got {n}")
    _check_probability(p)
    probs = binomial_probs(int(n), p)
    probs = probs / math.fsum(probs)
    return finalize(probs, 0.0, policy, f"binomial({int(n)}, {p!r})")


def make_uniform(a: int, b: int) -> Pmf:
    if int(a) != a or int(b) != b or not 0 <= a <= b:
        raise ParameterError(f"uniform needs integers 0 <= a <= b, got ({a}, {b})")
    probs = np.zeros(int(b) + 1)
    probs[int(a):] = 1.0 / (b - a + 1)
    return Pmf(probs / math.fsum(probs), 0.0, f"uniform({int(a)}, {int(b)})")


def make_custom(weights: Sequence[float], policy: TailPolicy = DEFAULT_POLICY, meta: str = "custom") -> Pmf:
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0 or not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ParameterError("weights must be a non-empty sequence of finite non-negative reals")
    total = math.fsum(w)
    if total <= 0:
        raise ParameterError("weights must not all be zero")
    return finalize(w / total, 0.0, policy, meta)


def entropy(x: Pmf) -> float:
    """Shannon entropy in nats; the tail deficit is ignored."""
    return math.fsum(special.entr(x.probs))


def mean(x: Pmf) -> float:
    return math.fsum(np.arange(x.probs.size) * x.probs)


def variance(x: Pmf) -> float:
    k = np.arange(x.probs.size)
    mu = mean(x)
    return math.fsum((k - mu) ** 2 * x.probs)


def total_variation(x: Pmf, y: Pmf) -> float:
    """Half the l1 distance between the stored probability vectors."""
    n = max(x.probs.size, y.probs.size)
    return 0.5 * math.fsum(np.abs(x.padded(n) - y.padded(n)))


def convolve(x: Pmf, y: Pmf, policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    """Distribution of ``X + Y`` for independent ``X`` and ``Y``."""
    probs = np.convolve(x.probs, y.probs)
    deficit = x.tail_deficit + y.tail_deficit - x.tail_deficit * y.tail_deficit
    return finalize(probs, deficit, policy)


def convolve_power(x: Pmf, n: int, policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    """``n``-fold self-convolution by repeated squaring."""
    if int(n) != n or n < 1:
        raise ParameterError(f"convolution power must be a positive integer, got {n}")
    result, base, n = None, x, int(n)
    while n:
        if n & 1:
            result = base if result is None else convolve(result, base, policy)
        n >>= 1
        if n:
            base = convolve(base, base, policy)
    return result


def is_ulc(x: Pmf, tol: float = 1e-12) -> bool:
    """Ultra-log-concavity: ``n p[n] / p[n-1]`` non-increasing over the support.

    The support must be a contiguous block of integers; ratios are compared
    in log space with multiplicative slack ``tol``.
    """
    nz = np.flatnonzero(x.probs > 0)
    lo, hi = nz[0], nz[-1]
    if hi - lo + 1 != nz.size:
        return False
    if hi - lo < 2:
        return True
    n = np.arange(lo + 1, hi + 1)
    logp = np.log(x.probs[lo : hi + 1])
    log_ratio = np.log(n) + logp[1:] - logp[:-1]
    return bool(np.all(np.diff(log_ratio) <= math.log1p(tol)))


def entropy_deficit_bound(x: Pmf) -> float:
    """Bound on ``|H(true) - H(stored)|`` caused by the truncated tail."""
    d = x.tail_deficit
    if d <= 0:
        return 0.0
    return -d * math.log(d) + d * math.log(x.cutoff + 1)
