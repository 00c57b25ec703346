"""Inequality checks, central-limit runs and counterexample search."""

from .clt import CltReport, CltRow, run_clt, run_small_numbers_demo
from .inequalities import (
    check_linear_epi,
    check_thinning_epi,
    check_ve_epi,
    check_vg_epi,
    check_yj_linear_ulc,
    check_yj_vp_scaled,
    evaluate,
)
from .records import DEFAULT_ETA_GRID, ExperimentConfig, InequalityKind, SlackRecord, Status
from .search import SearchReport, search_counterexamples

__all__ = [
    "CltReport",
    "CltRow",
    "DEFAULT_ETA_GRID",
    "ExperimentConfig",
    "InequalityKind",
    "SearchReport",
    "SlackRecord",
    "Status",
    "check_linear_epi",
    "check_thinning_epi",
    "check_ve_epi",
    "check_vg_epi",
    "check_yj_linear_ulc",
    "check_yj_vp_scaled",
    "evaluate",
    "run_clt",
    "run_small_numbers_demo",
    "search_counterexamples",
]
