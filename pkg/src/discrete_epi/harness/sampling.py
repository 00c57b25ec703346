"""Random pmf generators for counterexample search.

Every sampler draws from a caller-supplied ``numpy.random.Generator`` and
returns finite-support pmfs with cutoff ``< max_support``, so a trial is
fully determined by its generator state.
"""

from __future__ import annotations

import math

import numpy as np

from ..pmf import DEFAULT_POLICY, Pmf, TailPolicy, binomial_probs, is_ulc, make_custom, poisson_probs


def trial_rng(seed: int, trial: int, *extra: int) -> np.random.Generator:
    """Generator for one trial: ``SeedSequence([seed, trial, *extra])``.

    Independent of evaluation order, so concurrent runs reproduce serial ones.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial), *map(int, extra)]))


def sample_rough(rng: np.random.Generator, max_support: int, policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    """Normalised exponential weights with random peakiness, gaps and offset."""
    size = int(rng.integers(2, max_support + 1))
    w = rng.exponential(size=size) ** rng.uniform(0.5, 3.0)
    if rng.random() < 0.3:
        w[rng.random(size) < 0.3] = 0.0
    if not w.any():
        w[int(rng.integers(size))] = 1.0
    offset = int(rng.integers(0, max_support - size + 1)) if rng.random() < 0.2 else 0
    return make_custom(np.concatenate((np.zeros(offset), w)), policy, meta="")


def _family_member(rng: np.random.Generator, max_support: int) -> np.ndarray:
    top = max_support - 1
    choice = int(rng.integers(4))
    if choice == 0:
        lam = rng.uniform(0.05, 3.0)
        r = lam / (1 + lam)
        p = r ** np.arange(max_support)
    elif choice == 1:
        p = poisson_probs(rng.uniform(0.05, 0.6 * top), top)
    elif choice == 2:
        p = binomial_probs(int(rng.integers(1, top + 1)), rng.uniform(0.05, 0.95))
    else:
        p = np.zeros(int(rng.integers(0, top + 1)) + 1)
        p[-1] = 1.0
    p = p / p.sum()
    out = np.zeros(max_support)
    out[: p.size] = p
    return out


def sample_structured(rng: np.random.Generator, max_support: int, policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    """Mixture of two parametric family members, truncated to the support window."""
    a = rng.uniform(0.0, 1.0)
    w = a * _family_member(rng, max_support) + (1 - a) * _family_member(rng, max_support)
    return make_custom(w, policy, meta="")


def project_ulc(weights: np.ndarray) -> np.ndarray:
    """Clip ``n w[n] / w[n-1]`` to its running minimum so it is non-increasing.

    ``weights`` must be positive on a contiguous block starting at index 0.
    The first weight is kept and later ones rebuilt from the clipped ratios.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.size < 3:
        return w / w.sum()
    n = np.arange(1, w.size)
    log_ratio = np.log(n) + np.log(w[1:]) - np.log(w[:-1])
    log_ratio = np.minimum.accumulate(log_ratio)
    logw = np.concatenate(([0.0], np.cumsum(log_ratio - np.log(n))))
    out = np.exp(logw - logw.max())
    return out / math.fsum(out)


def sample_ulc(rng: np.random.Generator, max_support: int, policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    """ULC pmf: a random positive vector or a perturbed binomial, ratio-clipped."""
    size = int(rng.integers(2, max_support + 1))
    if rng.random() < 0.5:
        w = rng.exponential(size=size) ** rng.uniform(0.5, 2.0) + 1e-3
    else:
        w = binomial_probs(size - 1, rng.uniform(0.1, 0.9)) * np.exp(rng.normal(0.0, 0.3, size))
    for _ in range(5):
        w = project_ulc(w)
        x = make_custom(w, policy, meta="")
        if is_ulc(x):
            return x
    # repeated clipping failed to certify; fall back to a binomial, always ULC
    return make_custom(binomial_probs(size - 1, 0.5), policy, meta="")


SAMPLER_FUNCS = {"rough": sample_rough, "structured": sample_structured, "ulc": sample_ulc}


def sample_pmf(rng: np.random.Generator, max_support: int, samplers=("rough", "structured", "ulc"),
               policy: TailPolicy = DEFAULT_POLICY) -> Pmf:
    name = samplers[int(rng.integers(len(samplers)))] if len(samplers) > 1 else samplers[0]
    return SAMPLER_FUNCS[name](rng, max_support, policy)
