"""Entropy functions of reference families and the entropy powers built on them.

``geometric_entropy(lam)`` is the entropy of the mean-``lam`` geometric law,
``poisson_entropy(lam)`` that of Poisson(lam), and ``exponential`` uses
``log(lam)``.  The entropy power of a pmf is the reference-family mean with
the same entropy.  All values in nats.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .errors import InversionError, ParameterError
from .pmf import Pmf, entropy, poisson_probs

#: entropies this close to zero give entropy power exactly zero
ZERO_ENTROPY = 1e-12

_MAX_BRACKET = 1e300


def _check(lam: float):
    if not (lam >= 0 and math.isfinite(lam)):
        raise ParameterError(f"mean must be finite and >= 0, got {lam}")


def geometric_entropy(lam: float) -> float:
    """``(1+lam) log(1+lam) - lam log(lam)``, written to avoid cancellation at large ``lam``."""
    _check(lam)
    if lam == 0.0:
        return 0.0
    return math.log1p(lam) + lam * math.log1p(1.0 / lam)


def geometric_entropy_derivative(lam: float) -> float:
    """``log(1 + 1/lam)``; infinite at 0."""
    if lam <= 0.0:
        return math.inf
    return math.log1p(1.0 / lam)


_ASYMPTOTIC_POISSON = 1000.0


def poisson_entropy(lam: float) -> float:
    """Poisson entropy by direct summation up to ``lam + 40 sqrt(lam) + 40``.

    From ``lam = 1000`` on, the asymptotic series
    ``log(2 pi e lam)/2 - 1/(12 lam) - 1/(24 lam^2) - 19/(360 lam^3)`` is used;
    it is accurate to about 1e-13 there and beats the summed recurrence.
    """
    _check(lam)
    if lam == 0.0:
        return 0.0
    if lam >= _ASYMPTOTIC_POISSON:
        r = 1.0 / lam
        return 0.5 * math.log(2.0 * math.pi * math.e * lam) - r * (1.0 / 12.0 + r * (1.0 / 24.0 + r * 19.0 / 360.0))
    upto = int(math.ceil(lam + 40.0 * math.sqrt(lam) + 40.0))
    return math.fsum(special.entr(poisson_probs(lam, upto)))


def exponential_entropy(lam: float) -> float:
    if not lam > 0:
        raise ParameterError(f"exponential entropy needs lam > 0, got {lam}")
    return math.log(lam)


def _bracket(f: Callable[[float], float], s: float, hi: float) -> float:
    while f(hi) < s:
        hi *= 2.0
        if hi > _MAX_BRACKET:
            raise InversionError(f"could not bracket entropy {s!r}")
    return hi


def invert_geometric_entropy(s: float, hint: float | None = None, rtol: float = 1e-15) -> float:
    """Mean of the geometric law whose entropy is ``s``.

    Bisection on a bracket ``[0, hi]`` with a Newton step tried first each
    iteration; the Newton iterate is kept only if it stays inside the bracket.
    """
    if not (s >= 0 and math.isfinite(s)):
        raise ParameterError(f"entropy must be finite and >= 0, got {s}")
    if s <= ZERO_ENTROPY:
        return 0.0
    hi = _bracket(geometric_entropy, s, max(1.0, 2.0 * hint + 10.0 if hint else 1.0))
    lo = 0.0
    # E_g(lam) ~ lam (1 - log lam) near 0 and ~ log(lam) + 1 for large lam
    lam = min(max(math.exp(s - 1.0), s / max(1.0 - math.log(s), 1.0)), hi)
    for _ in range(200):
        g = geometric_entropy(lam) - s
        if g == 0.0:
            return lam
        if g < 0:
            lo = lam
        else:
            hi = lam
        step = lam - g / geometric_entropy_derivative(lam)
        lam_new = step if lo < step < hi else 0.5 * (lo + hi)
        if abs(lam_new - lam) <= rtol * lam_new or hi - lo <= rtol * hi:
            return lam_new
        lam = lam_new
    return lam


def invert_poisson_entropy(s: float, hint: float | None = None, rtol: float = 1e-14) -> float:
    """Mean of the Poisson law whose entropy is ``s`` (pure bisection)."""
    if not (s >= 0 and math.isfinite(s)):
        raise ParameterError(f"entropy must be finite and >= 0, got {s}")
    if s <= ZERO_ENTROPY:
        return 0.0
    hi = _bracket(poisson_entropy, s, max(1.0, 2.0 * hint + 10.0 if hint else 1.0))
    lo = 0.0
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if poisson_entropy(mid) < s:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * hi:
            break
    return 0.5 * (lo + hi)


def invert_exponential_entropy(s: float, hint: float | None = None) -> float:
    return math.exp(s)


class EntropyKind(str, enum.Enum):
    GEOMETRIC = "geometric"
    POISSON = "poisson"
    EXPONENTIAL = "exponential"

    @classmethod
    def parse(cls, text: str) -> "EntropyKind":
        aliases = {"g": cls.GEOMETRIC, "p": cls.POISSON, "e": cls.EXPONENTIAL}
        try:
            return aliases.get(text) or cls(text)
        except ValueError:
            raise ParameterError(f"unknown entropy kind {text!r}") from None


@dataclass(frozen=True)
class EntropyFunctional:
    """One reference family: forward entropy and its monotone inverse."""

    kind: EntropyKind
    eval: Callable[[float], float]
    invert: Callable[..., float]
    tolerance: float = 1e-12

    def power(self, x: Pmf) -> float:
        """Entropy power of ``x`` with respect to this family."""
        if self.kind is EntropyKind.EXPONENTIAL:
            return math.exp(entropy(x))
        h = entropy(x)
        if h <= ZERO_ENTROPY:
            return 0.0
        k = np.arange(x.probs.size)
        return self.invert(h, hint=float(np.dot(k, x.probs)))

    def power_derivative(self, v: float) -> float:
        """``dV/dH`` at entropy power ``v``; used to propagate entropy error bounds."""
        if self.kind is EntropyKind.EXPONENTIAL:
            return v
        if v <= 0.0:
            return 0.0
        if self.kind is EntropyKind.GEOMETRIC:
            return 1.0 / geometric_entropy_derivative(v)
        h = 1e-6 * max(v, 1e-6)
        slope = (poisson_entropy(v + h) - poisson_entropy(max(v - h, 0.0))) / (v + h - max(v - h, 0.0))
        return 1.0 / slope if slope > 0 else math.inf


GEOMETRIC = EntropyFunctional(EntropyKind.GEOMETRIC, geometric_entropy, invert_geometric_entropy)
POISSON = EntropyFunctional(EntropyKind.POISSON, poisson_entropy, invert_poisson_entropy)
EXPONENTIAL = EntropyFunctional(EntropyKind.EXPONENTIAL, exponential_entropy, invert_exponential_entropy)

FUNCTIONALS = {f.kind: f for f in (GEOMETRIC, POISSON, EXPONENTIAL)}


def functional(kind) -> EntropyFunctional:
    if not isinstance(kind, EntropyKind):
        kind = EntropyKind.parse(kind)
    return FUNCTIONALS[kind]


def geometric_entropy_power(x: Pmf) -> float:
    return GEOMETRIC.power(x)


def poisson_entropy_power(x: Pmf) -> float:
    return POISSON.power(x)


def exponential_entropy_power(x: Pmf) -> float:
    return EXPONENTIAL.power(x)


# short names used throughout the harness and CLI
eg = geometric_entropy
ep = poisson_entropy
vg = geometric_entropy_power
vp = poisson_entropy_power
ve = exponential_entropy_power
