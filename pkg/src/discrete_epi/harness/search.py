"""Randomised and descent-driven counterexample search over inequality instances.

Trial ``i`` of a run with root seed ``s`` draws its inputs from
``SeedSequence([s, i])`` and descent from trial ``i`` uses
``SeedSequence([s, i, 1])``; results therefore do not depend on how trials
are scheduled.  Records are sorted by ``(slack, digest, eta, seed)`` before
emission, so identical configs give byte-identical reports.
"""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import PmfFormatError
from ..pmf import Pmf, TailPolicy, is_ulc, make_custom
from ..serialization import dumps, format_float, pmf_from_spec
from .inequalities import evaluate
from .records import ExperimentConfig, InequalityKind, SlackRecord, Status
from .sampling import project_ulc, sample_pmf, trial_rng

EXIT_CLEAN = 0
EXIT_VIOLATION = 2
EXIT_CANDIDATE = 3

_CHUNK = 250

Regen = Callable[[TailPolicy], tuple]


def _verify(rec: SlackRecord, kind, regen: Regen, policy: TailPolicy) -> SlackRecord:
    """Recompute a flagged record at a tightened tail policy."""
    tight = policy.tightened()
    x, y = regen(tight)
    again = evaluate(kind, x, y, rec.eta, tight, rec.seed)
    rec.verified = again.flagged
    if not again.flagged:
        rec.status = Status.INFORMATIVE
    return rec


def evaluate_case(kind: InequalityKind, x: Pmf, y: Optional[Pmf], etas, policy: TailPolicy,
                  seed: str, regen: Regen) -> list[SlackRecord]:
    flags = (is_ulc(x), None if y is None else is_ulc(y))
    out = []
    for eta in etas:
        rec = evaluate(kind, x, y, eta, policy, seed, flags)
        if rec.flagged:
            rec = _verify(rec, kind, regen, policy)
        out.append(rec)
    return out


def _trial_inputs(config: ExperimentConfig, trial: int, policy: TailPolicy):
    rng = trial_rng(config.seed, trial)
    samplers = config.effective_samplers()
    x = sample_pmf(rng, config.max_support, samplers, policy)
    y = sample_pmf(rng, config.max_support, samplers, policy) if config.kind.binary else None
    return x, y


class _Worst:
    """Heap entry ordered so the heap top holds the largest sort key."""

    __slots__ = ("rec", "key")

    def __init__(self, rec: SlackRecord):
        self.rec, self.key = rec, rec.sort_key()

    def __lt__(self, other: "_Worst") -> bool:
        return self.key > other.key


class _Collector:
    """Keeps the ``top`` lowest-slack records plus every flagged one.

    Retention depends only on sort keys, never on insertion order.
    """

    def __init__(self, top: int):
        self.top = top
        self._heap: list[_Worst] = []
        self.flagged: list[SlackRecord] = []
        self.n_evaluated = 0
        self.status_counts: dict[str, int] = {}

    def _keep(self, rec: SlackRecord):
        item = _Worst(rec)
        if len(self._heap) < self.top:
            heapq.heappush(self._heap, item)
        elif self.top and item.key < self._heap[0].key:
            heapq.heapreplace(self._heap, item)

    def add(self, rec: SlackRecord):
        self.n_evaluated += 1
        self.status_counts[rec.status.value] = self.status_counts.get(rec.status.value, 0) + 1
        if rec.flagged:
            self.flagged.append(rec)
        else:
            self._keep(rec)

    def merge(self, other: "_Collector"):
        self.n_evaluated += other.n_evaluated
        for k, v in other.status_counts.items():
            self.status_counts[k] = self.status_counts.get(k, 0) + v
        self.flagged.extend(other.flagged)
        for item in other._heap:
            self._keep(item.rec)

    def records(self) -> list[SlackRecord]:
        return sorted(self.flagged + [item.rec for item in self._heap], key=SlackRecord.sort_key)


def _run_trials(config: ExperimentConfig, start: int, stop: int) -> _Collector:
    col = _Collector(max(config.report_top, config.descent_starts))
    policy = config.tail_policy
    for trial in range(start, stop):
        x, y = _trial_inputs(config, trial, policy)
        regen = (lambda pol, t=trial: _trial_inputs(config, t, pol))
        for rec in evaluate_case(config.kind, x, y, config.eta_grid, policy, f"{config.seed}:{trial}", regen):
            col.add(rec)
    return col


def _run_chunk(args) -> _Collector:
    cfg_dict, start, stop = args
    return _run_trials(ExperimentConfig.from_dict(cfg_dict), start, stop)


def _run_inputs(config: ExperimentConfig) -> _Collector:
    col = _Collector(max(config.report_top, len(config.inputs) * len(config.eta_grid)))
    for i, case in enumerate(config.inputs):
        if not isinstance(case, dict) or "x" not in case:
            raise PmfFormatError(f"config.inputs[{i}]: expected an object with field 'x'")
        if config.kind.binary and "y" not in case:
            raise PmfFormatError(f"config.inputs[{i}]: {config.kind.value} needs field 'y'")

        def regen(pol, case=case, i=i):
            x = pmf_from_spec(case["x"], pol, f"inputs[{i}].x")
            y = pmf_from_spec(case["y"], pol, f"inputs[{i}].y") if config.kind.binary else None
            return x, y

        x, y = regen(config.tail_policy)
        for rec in evaluate_case(config.kind, x, y, config.eta_grid, config.tail_policy, f"input:{i}", regen):
            col.add(rec)
    return col


def _perturb(rng: np.random.Generator, x: Pmf, max_support: int, scale: float, ulc: bool) -> Pmf:
    w = x.padded(max_support)[:max_support].copy()
    k = int(rng.integers(max_support))
    if w[k] == 0.0:
        w[k] = 10.0 ** rng.uniform(-4, -1) if rng.random() < 0.5 else 0.0
    else:
        w[k] *= math.exp(scale * rng.normal())
    if not w.any():
        return x
    if ulc:
        pos = np.flatnonzero(w > 0)
        w = project_ulc(w[: pos[-1] + 1] + 1e-12)
    return make_custom(w, meta="")


def _descend(config: ExperimentConfig, start: SlackRecord) -> SlackRecord:
    _, trial = start.seed.split(":")[:2]
    trial = int(trial)
    x, y = _trial_inputs(config, trial, config.tail_policy)
    rng = trial_rng(config.seed, trial, 1)
    kind, policy, eta = config.kind, config.tail_policy, start.eta
    best = evaluate(kind, x, y, eta, policy)
    steps = config.descent_steps
    for step in range(steps):
        scale = 0.05 + 0.5 * (1.0 - step / steps)
        if y is not None and rng.random() < 0.5:
            cand_x, cand_y = x, _perturb(rng, y, config.max_support, scale, kind.needs_ulc)
        else:
            cand_x, cand_y = _perturb(rng, x, config.max_support, scale, kind.needs_ulc), y
        rec = evaluate(kind, cand_x, cand_y, eta, policy)
        if rec.slack < best.slack:
            x, y, best = cand_x, cand_y, rec
    best.seed = f"{config.seed}:{trial}:descent"
    if best.flagged:
        best = _verify(best, kind, lambda pol: (x, y), policy)
    return best


@dataclass
class SearchReport:
    config: ExperimentConfig
    records: list[SlackRecord]
    n_evaluated: int
    status_counts: dict = field(default_factory=dict)

    @property
    def min_slack(self) -> float:
        return min((r.slack for r in self.records), default=math.inf)

    @property
    def flagged(self) -> list[SlackRecord]:
        return [r for r in self.records if r.flagged and r.verified is not False]

    @property
    def exit_code(self) -> int:
        flagged = self.flagged
        if any(r.status is Status.VIOLATION for r in flagged):
            return EXIT_VIOLATION
        if any(r.status is Status.CANDIDATE for r in flagged):
            return EXIT_CANDIDATE
        return EXIT_CLEAN

    def summary(self) -> dict:
        return {
            "kind": self.config.kind.value,
            "evaluated": self.n_evaluated,
            "min_slack": self.min_slack,
            "flagged": len(self.flagged),
            "status_counts": dict(sorted(self.status_counts.items())),
            "exit_code": self.exit_code,
        }

    def summary_line(self) -> str:
        return (f"{self.config.kind.value}: {self.n_evaluated} evaluations, "
                f"min slack {format_float(self.min_slack)}, {len(self.flagged)} flagged, "
                f"exit {self.exit_code}")

    def to_jsonl(self) -> str:
        return "".join(dumps(r.to_dict()) + "\n" for r in self.records)

    def to_csv(self) -> str:
        lines = [",".join(SlackRecord.CSV_COLUMNS)] + [r.csv_row() for r in self.records]
        return "\n".join(lines) + "\n"


def search_counterexamples(config: ExperimentConfig) -> SearchReport:
    """Evaluate the configured inequality on explicit inputs or random trials.

    With ``search_mode="perturbation-descent"`` the ``descent_starts``
    lowest-slack trials are further pushed down by coordinate perturbation.
    """
    if config.inputs is not None:
        col = _run_inputs(config)
    elif config.workers > 1:
        bounds = [(s, min(s + _CHUNK, config.trials)) for s in range(0, config.trials, _CHUNK)]
        cfg = config.to_dict()
        col = _Collector(max(config.report_top, config.descent_starts))
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for part in pool.map(_run_chunk, [(cfg, a, b) for a, b in bounds]):
                col.merge(part)
    else:
        col = _run_trials(config, 0, config.trials)
    records = col.records()
    if config.search_mode == "perturbation-descent" and config.inputs is None:
        seen, starts = set(), []
        for rec in records:
            trial = rec.seed.split(":")[1]
            if trial not in seen:
                seen.add(trial)
                starts.append(rec)
            if len(starts) >= config.descent_starts:
                break
        for rec in starts:
            improved = _descend(config, rec)
            col.add(improved)
        records = col.records()
    flagged = [r for r in records if r.flagged]
    rest = [r for r in records if not r.flagged][: max(config.report_top - len(flagged), 0)]
    return SearchReport(config, sorted(flagged + rest, key=SlackRecord.sort_key), col.n_evaluated,
                        col.status_counts)
