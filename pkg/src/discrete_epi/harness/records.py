"""Inequality kinds, slack records and experiment configuration."""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from typing import Any, Mapping, Optional

from ..errors import PmfFormatError
from ..pmf import DEFAULT_POLICY, TailPolicy
from ..serialization import format_float, policy_from_dict, policy_to_dict

CONFIG_VERSION = 1

#: base numerical tolerance added to every deficit bound
NUMERIC_TOL = 1e-9

DEFAULT_ETA_GRID = (0.1, 0.2, 0.3, 0.4, 0.49, 0.5, 0.51, 0.6, 0.7, 0.8, 0.9)


class InequalityKind(str, enum.Enum):
    LINEAR_EPI = "linear_epi"
    VG_EPI = "vg_epi"
    VE_EPI = "ve_epi"
    THIN_VG = "thin_vg"
    THIN_VP_ULC = "thin_vp_ulc"
    YJ_LINEAR_ULC = "yj_linear_ulc"
    YJ_VP_SCALED = "yj_vp_scaled"

    @property
    def binary(self) -> bool:
        return self not in (InequalityKind.THIN_VG, InequalityKind.THIN_VP_ULC)

    @property
    def proven(self) -> bool:
        """Whether a violation (on valid inputs) contradicts a theorem."""
        return self not in (InequalityKind.VG_EPI, InequalityKind.YJ_VP_SCALED)

    @property
    def needs_ulc(self) -> bool:
        return self in (
            InequalityKind.THIN_VP_ULC,
            InequalityKind.YJ_LINEAR_ULC,
            InequalityKind.YJ_VP_SCALED,
        )

    @property
    def description(self) -> str:
        return _DESCRIPTIONS[self]


_DESCRIPTIONS = {
    InequalityKind.LINEAR_EPI: "H(X [+]_eta Y) >= eta H(X) + (1-eta) H(Y)  (proven, all inputs)",
    InequalityKind.VG_EPI: "V_g(X [+]_eta Y) >= eta V_g(X) + (1-eta) V_g(Y)  (open conjecture)",
    InequalityKind.VE_EPI: "e^H(X [+]_eta Y) >= eta e^H(X) + (1-eta) e^H(Y)  (proven, all inputs)",
    InequalityKind.THIN_VG: "V_g(T_eta X) >= eta V_g(X)  (proven, all inputs)",
    InequalityKind.THIN_VP_ULC: "V_p(T_eta X) >= eta V_p(X)  (proven for ULC X)",
    InequalityKind.YJ_LINEAR_ULC: "H(T_eta X + T_(1-eta) Y) >= eta H(X) + (1-eta) H(Y)  (proven for ULC X, Y)",
    InequalityKind.YJ_VP_SCALED: "V_p(T_eta X + T_(1-eta) Y) >= eta V_p(X) + (1-eta) V_p(Y)  (false in general)",
}


class Status(str, enum.Enum):
    OK = "ok"
    VIOLATION = "violation"  # proven inequality broken beyond tolerance
    CANDIDATE = "candidate"  # conjectured inequality broken beyond tolerance
    INFORMATIVE = "informative"  # negative slack outside the proven regime


@dataclass
class SlackRecord:
    kind: InequalityKind
    digest: str
    eta: float
    lhs: float
    rhs: float
    slack: float
    is_ulc_x: bool
    is_ulc_y: Optional[bool]
    deficit_bound: float
    seed: str = ""
    status: Status = Status.OK
    verified: Optional[bool] = None

    @property
    def threshold(self) -> float:
        return NUMERIC_TOL + self.deficit_bound

    @property
    def flagged(self) -> bool:
        return self.status in (Status.VIOLATION, Status.CANDIDATE)

    def sort_key(self):
        return (self.slack, self.digest, self.eta, self.seed)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        d["status"] = self.status.value
        return d

    CSV_COLUMNS = ("kind", "eta", "lhs", "rhs", "slack", "is_ulc_x", "is_ulc_y", "deficit_bound", "seed")

    def csv_row(self) -> str:
        def cell(v):
            if v is None:
                return ""
            if isinstance(v, bool):
                return "true" if v else "false"
            if isinstance(v, float):
                return format_float(v)
            return str(v.value if isinstance(v, enum.Enum) else v)

        return ",".join(cell(getattr(self, c)) for c in self.CSV_COLUMNS)


SEARCH_MODES = ("random", "perturbation-descent")
SAMPLERS = ("rough", "structured", "ulc")

_CONFIG_FIELDS = {
    "version", "kind", "inputs", "eta_grid", "trials", "seed", "max_support", "tail_policy",
    "search_mode", "descent_starts", "descent_steps", "samplers", "report_top", "workers", "output",
}


@dataclass
class ExperimentConfig:
    """Declarative description of an inequality check or counterexample search.

    ``inputs`` (optional) lists explicit cases as ``{"x": spec, "y": spec}``
    with each spec a pmf object or ``{"family": ..., ...}``; when absent,
    ``trials`` random cases are sampled.
    """

    kind: InequalityKind = InequalityKind.LINEAR_EPI
    inputs: Optional[list] = None
    eta_grid: tuple = DEFAULT_ETA_GRID
    trials: int = 100
    seed: int = 0
    max_support: int = 12
    tail_policy: TailPolicy = DEFAULT_POLICY
    search_mode: str = "random"
    descent_starts: int = 5
    descent_steps: int = 200
    samplers: Optional[tuple] = None
    report_top: int = 100
    workers: int = 1
    output: Optional[str] = None
    version: int = CONFIG_VERSION

    def __post_init__(self):
        self.kind = InequalityKind(self.kind)
        self.eta_grid = tuple(float(e) for e in self.eta_grid)
        if not self.eta_grid or any(not 0.0 < e < 1.0 for e in self.eta_grid):
            raise PmfFormatError("config.eta_grid: every value must lie strictly inside (0, 1)")
        if int(self.trials) != self.trials or self.trials < 1:
            raise PmfFormatError(f"config.trials: must be an integer >= 1, got {self.trials!r}")
        if self.max_support < 2:
            raise PmfFormatError("config.max_support: must be >= 2")
        if self.search_mode not in SEARCH_MODES:
            raise PmfFormatError(f"config.search_mode: expected one of {SEARCH_MODES}, got {self.search_mode!r}")
        if self.samplers is not None:
            self.samplers = tuple(self.samplers)
            bad = [s for s in self.samplers if s not in SAMPLERS]
            if bad or not self.samplers:
                raise PmfFormatError(f"config.samplers: expected a non-empty subset of {SAMPLERS}")
        if self.inputs is not None and not isinstance(self.inputs, list):
            raise PmfFormatError("config.inputs: expected an array of cases")

    def effective_samplers(self) -> tuple:
        if self.samplers:
            return self.samplers
        return ("ulc",) if self.kind.needs_ulc else SAMPLERS

    @classmethod
    def from_dict(cls, obj: Any, kind_override=None) -> "ExperimentConfig":
        if not isinstance(obj, Mapping):
            raise PmfFormatError("config: expected a JSON object")
        if "version" not in obj:
            raise PmfFormatError("config.version: missing (expected 1)")
        if obj["version"] != CONFIG_VERSION:
            raise PmfFormatError(f"config.version: unsupported version {obj['version']!r}")
        unknown = set(obj) - _CONFIG_FIELDS
        if unknown:
            raise PmfFormatError(f"config: unknown field(s) {sorted(unknown)}")
        args = dict(obj)
        args["tail_policy"] = policy_from_dict(obj.get("tail_policy"))
        if kind_override is not None:
            args["kind"] = kind_override
        try:
            args["kind"] = InequalityKind(args.get("kind", InequalityKind.LINEAR_EPI))
        except ValueError:
            raise PmfFormatError(f"config.kind: unknown inequality {args.get('kind')!r}") from None
        try:
            return cls(**args)
        except TypeError as exc:
            raise PmfFormatError(f"config: {exc}") from None

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "kind": self.kind.value,
            "inputs": self.inputs,
            "eta_grid": list(self.eta_grid),
            "trials": self.trials,
            "seed": self.seed,
            "max_support": self.max_support,
            "tail_policy": policy_to_dict(self.tail_policy),
            "search_mode": self.search_mode,
            "descent_starts": self.descent_starts,
            "descent_steps": self.descent_steps,
            "samplers": list(self.samplers) if self.samplers else None,
            "report_top": self.report_top,
            "workers": self.workers,
            "output": self.output,
        }
