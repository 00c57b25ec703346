"""Evaluators turning one inequality instance into a :class:`SlackRecord`."""

from __future__ import annotations

from typing import Optional

from ..beamsplitter import boxplus, boxplus_yj
from ..entropy_power import EXPONENTIAL, GEOMETRIC, POISSON, EntropyFunctional
from ..pmf import DEFAULT_POLICY, Pmf, TailPolicy, entropy, entropy_deficit_bound, is_ulc
from ..thinning import thin
from .records import InequalityKind, SlackRecord, Status


def input_digest(x: Pmf, y: Optional[Pmf] = None) -> str:
    def label(p):
        return p.meta if p.meta else f"pmf:{p.digest()}"

    return label(x) if y is None else f"{label(x)}|{label(y)}"


def classify(kind: InequalityKind, slack: float, threshold: float, ulc_ok: bool) -> Status:
    if slack >= -threshold:
        return Status.OK
    if not ulc_ok:
        return Status.INFORMATIVE
    return Status.VIOLATION if kind.proven else Status.CANDIDATE


def _ulc_flags(x: Pmf, y: Optional[Pmf], flags):
    if flags is not None:
        return flags
    return is_ulc(x), (None if y is None else is_ulc(y))


def _record(kind, x, y, eta, lhs, rhs, bound, seed, flags) -> SlackRecord:
    ux, uy = flags
    ulc_ok = not kind.needs_ulc or (ux and (uy is None or uy))
    slack = lhs - rhs
    rec = SlackRecord(kind, input_digest(x, y), float(eta), float(lhs), float(rhs), float(slack),
                      bool(ux), uy, float(bound), seed)
    rec.status = classify(kind, slack, rec.threshold, ulc_ok)
    return rec


def _power_terms(fn: EntropyFunctional, z: Pmf, x: Pmf, y: Pmf, eta: float):
    vz, vx, vy = fn.power(z), fn.power(x), fn.power(y)
    bound = (
        fn.power_derivative(vz) * entropy_deficit_bound(z)
        + eta * fn.power_derivative(vx) * entropy_deficit_bound(x)
        + (1 - eta) * fn.power_derivative(vy) * entropy_deficit_bound(y)
    )
    return vz, eta * vx + (1 - eta) * vy, bound


def _linear_terms(z: Pmf, x: Pmf, y: Pmf, eta: float):
    lhs = entropy(z)
    rhs = eta * entropy(x) + (1 - eta) * entropy(y)
    bound = (entropy_deficit_bound(z) + eta * entropy_deficit_bound(x)
             + (1 - eta) * entropy_deficit_bound(y))
    return lhs, rhs, bound


def check_linear_epi(x, y, eta, policy: TailPolicy = DEFAULT_POLICY, seed="", flags=None) -> SlackRecord:
    z = boxplus(x, y, eta, policy)
    lhs, rhs, bound = _linear_terms(z, x, y, eta)
    return _record(InequalityKind.LINEAR_EPI, x, y, eta, lhs, rhs, bound, seed, _ulc_flags(x, y, flags))


def check_vg_epi(x, y, eta, policy: TailPolicy = DEFAULT_POLICY, seed="", flags=None) -> SlackRecord:
    """Beamsplitter entropy-power inequality with geometric entropy power.

    Open: negative slack beyond tolerance is reported as a candidate.
    """
    z = boxplus(x, y, eta, policy)
    lhs, rhs, bound = _power_terms(GEOMETRIC, z, x, y, eta)
    return _record(InequalityKind.VG_EPI, x, y, eta, lhs, rhs, bound, seed, _ulc_flags(x, y, flags))


def check_ve_epi(x, y, eta, policy: TailPolicy = DEFAULT_POLICY, seed="", flags=None) -> SlackRecord:
    z = boxplus(x, y, eta, policy)
    lhs, rhs, bound = _power_terms(EXPONENTIAL, z, x, y, eta)
    return _record(InequalityKind.VE_EPI, x, y, eta, lhs, rhs, bound, seed, _ulc_flags(x, y, flags))


def check_thinning_epi(x, eta, kind="vg", policy: TailPolicy = DEFAULT_POLICY, seed="", flags=None) -> SlackRecord:
    """One-sided scaling inequality ``V(T_eta X) >= eta V(X)``.

    ``kind="vg"`` holds for every pmf; ``kind="vp"`` only for ULC ``x``, so
    failures on non-ULC inputs are marked informative.
    """
    if kind in ("vg", InequalityKind.THIN_VG):
        fn, ikind = GEOMETRIC, InequalityKind.THIN_VG
    elif kind in ("vp", InequalityKind.THIN_VP_ULC):
        fn, ikind = POISSON, InequalityKind.THIN_VP_ULC
    else:
        raise ValueError(f"unknown thinning inequality kind {kind!r}")
    t = thin(x, eta, policy)
    vt, vx = fn.power(t), fn.power(x)
    bound = (fn.power_derivative(vt) * entropy_deficit_bound(t)
             + eta * fn.power_derivative(vx) * entropy_deficit_bound(x))
    return _record(ikind, x, None, eta, vt, eta * vx, bound, seed, _ulc_flags(x, None, flags))


def check_yj_linear_ulc(x, y, eta, policy: TailPolicy = DEFAULT_POLICY, seed="", flags=None) -> SlackRecord:
    z = boxplus_yj(x, y, eta, policy)
    lhs, rhs, bound = _linear_terms(z, x, y, eta)
    return _record(InequalityKind.YJ_LINEAR_ULC, x, y, eta, lhs, rhs, bound, seed, _ulc_flags(x, y, flags))


def check_yj_vp_scaled(x, y, eta, policy: TailPolicy = DEFAULT_POLICY, seed="", flags=None) -> SlackRecord:
    """Poisson entropy power under thin-then-add scaled addition; known to fail in general."""
    z = boxplus_yj(x, y, eta, policy)
    lhs, rhs, bound = _power_terms(POISSON, z, x, y, eta)
    return _record(InequalityKind.YJ_VP_SCALED, x, y, eta, lhs, rhs, bound, seed, _ulc_flags(x, y, flags))


def evaluate(kind, x: Pmf, y: Optional[Pmf], eta: float, policy: TailPolicy = DEFAULT_POLICY,
             seed: str = "", flags=None) -> SlackRecord:
    kind = InequalityKind(kind)
    if kind is InequalityKind.THIN_VG:
        return check_thinning_epi(x, eta, "vg", policy, seed, flags)
    if kind is InequalityKind.THIN_VP_ULC:
        return check_thinning_epi(x, eta, "vp", policy, seed, flags)
    if y is None:
        raise ValueError(f"{kind.value} needs two inputs")
    return _BINARY[kind](x, y, eta, policy, seed, flags)


_BINARY = {
    InequalityKind.LINEAR_EPI: check_linear_epi,
    InequalityKind.VG_EPI: check_vg_epi,
    InequalityKind.VE_EPI: check_ve_epi,
    InequalityKind.YJ_LINEAR_ULC: check_yj_linear_ulc,
    InequalityKind.YJ_VP_SCALED: check_yj_vp_scaled,
}
