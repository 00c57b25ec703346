"""Discrete scaled addition through a beamsplitter, binomial thinning and
entropy-power inequalities for pmfs on the non-negative integers."""

from .beamsplitter import FockKernel, boxplus, boxplus_multi, boxplus_yj, build_kernel
from .entropy_power import (
    EntropyFunctional,
    EntropyKind,
    eg,
    ep,
    geometric_entropy,
    geometric_entropy_power,
    poisson_entropy,
    poisson_entropy_power,
    exponential_entropy_power,
    ve,
    vg,
    vp,
)
from .errors import (
    CapacityError,
    DiscreteEPIError,
    InversionError,
    OracleResolutionError,
    ParameterError,
    PmfFormatError,
    TruncationOverflowError,
)
from .pmf import (
    DEFAULT_POLICY,
    Pmf,
    TailPolicy,
    convolve,
    entropy,
    is_ulc,
    make_bernoulli,
    make_binomial,
    make_custom,
    make_delta,
    make_geometric,
    make_poisson,
    make_uniform,
    mean,
    total_variation,
)
from .thinning import thin

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DEFAULT_POLICY",
    "DiscreteEPIError",
    "EntropyFunctional",
    "EntropyKind",
    "FockKernel",
    "InversionError",
    "OracleResolutionError",
    "ParameterError",
    "Pmf",
    "PmfFormatError",
    "TailPolicy",
    "TruncationOverflowError",
    "boxplus",
    "boxplus_multi",
    "boxplus_yj",
    "build_kernel",
    "convolve",
    "eg",
    "entropy",
    "ep",
    "exponential_entropy_power",
    "geometric_entropy",
    "geometric_entropy_power",
    "is_ulc",
    "make_bernoulli",
    "make_binomial",
    "make_custom",
    "make_delta",
    "make_geometric",
    "make_poisson",
    "make_uniform",
    "mean",
    "poisson_entropy",
    "poisson_entropy_power",
    "thin",
    "total_variation",
    "ve",
    "vg",
    "vp",
]
