"""Central-limit experiments for the beamsplitter and thin-then-add additions."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..beamsplitter import boxplus
from ..errors import CapacityError, ParameterError, TruncationOverflowError
from ..pmf import (
    DEFAULT_POLICY,
    Pmf,
    TailPolicy,
    convolve_power,
    entropy,
    make_bernoulli,
    make_geometric,
    make_poisson,
    mean,
    total_variation,
)
from ..thinning import thin

MONOTONE_TOL = 1e-10


@dataclass
class CltRow:
    n: int
    entropy: float
    tv_geometric: float
    mean: float
    mean_drift: float


@dataclass
class CltReport:
    rows: list[CltRow]
    limit_entropy: float
    #: ``(n, 2n)`` pairs where entropy dropped; contradicts a proven result
    power_of_two_drops: list = field(default_factory=list)
    #: consecutive rows where entropy dropped, any ``n`` (open question)
    general_drops: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        if self.power_of_two_drops:
            return 2
        if self.general_drops:
            return 3
        return 0


def equal_weight_sums(base: Pmf, n_max: int, policy: TailPolicy = DEFAULT_POLICY):
    """Yield ``(n, Y_n)`` for ``n = 1..n_max`` with ``Y_n`` the equal-weight sum of ``n`` copies.

    Step ``k`` of the weight cascade with equal weights is itself ``Y_k``,
    so one pass of ``n_max - 1`` additions gives every ``Y_n``.
    """
    z = base
    yield 1, z
    for k in range(2, n_max + 1):
        try:
            z = boxplus(z, base, (k - 1) / k, policy)
        except TruncationOverflowError as exc:
            raise CapacityError(
                f"Y_{k} needs cutoff {exc.required_cutoff} > max_cutoff {exc.max_cutoff}; "
                "use a smaller n or a base with smaller mean"
            ) from None
        yield k, z


def run_clt(base: Pmf, n_list, policy: TailPolicy = DEFAULT_POLICY) -> CltReport:
    """Entropy, distance to the mean-matched geometric law and mean drift of ``Y_n``."""
    n_list = [int(n) for n in n_list]
    if not n_list or n_list[0] < 1 or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ParameterError("n_list must be strictly ascending positive integers")
    lam = mean(base)
    try:
        geo = make_geometric(lam, policy)
    except TruncationOverflowError as exc:
        raise CapacityError(
            f"reference Geometric({lam:.6g}) needs cutoff {exc.required_cutoff} > max_cutoff {exc.max_cutoff}"
        ) from None
    wanted = set(n_list)
    rows = []
    for n, y in equal_weight_sums(base, n_list[-1], policy):
        if n in wanted:
            m = mean(y)
            rows.append(CltRow(n, entropy(y), total_variation(y, geo), m, m - lam))
    report = CltReport(rows, entropy(geo))
    by_n = {r.n: r for r in rows}
    for r in rows:
        twice = by_n.get(2 * r.n)
        if twice is not None and twice.entropy < r.entropy - MONOTONE_TOL:
            report.power_of_two_drops.append((r.n, twice.n))
    for a, b in zip(rows, rows[1:]):
        if b.entropy < a.entropy - MONOTONE_TOL:
            report.general_drops.append((a.n, b.n))
    return report


def run_small_numbers_demo(p: float, n_list, policy: TailPolicy = DEFAULT_POLICY) -> list[tuple[int, float]]:
    """``TV(T_{1/n}(sum of n Bernoulli(p)), Poisson(p))`` for each ``n``."""
    target = make_poisson(p, policy)
    base = make_bernoulli(p)
    rows = []
    for n in n_list:
        y = thin(convolve_power(base, int(n), policy), 1.0 / n, policy)
        rows.append((int(n), total_variation(y, target)))
    return rows
