"""JSON / CSV emission with replay-exact floats, pmf files and input specs."""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import pmf as _pmf
from .errors import ParameterError, PmfFormatError
from .pmf import DEFAULT_POLICY, Pmf, TailPolicy


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dumps(obj: Any) -> str:
    """Compact JSON with every float written at 17 significant digits."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Mapping):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def atomic_write(path, text: str):
    """Write via a temp file in the target directory, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def pmf_to_dict(x: Pmf) -> dict:
    return {"probs": [float(p) for p in x.probs], "tail_deficit": x.tail_deficit, "meta": x.meta}


def pmf_to_json(x: Pmf) -> str:
    return dumps(pmf_to_dict(x))


def pmf_to_csv(x: Pmf) -> str:
    lines = ["k,p"]
    lines += [f"{k},{format_float(p)}" for k, p in enumerate(x.probs)]
    return "\n".join(lines) + "\n"


def pmf_from_dict(obj: Any, where: str = "pmf") -> Pmf:
    if not isinstance(obj, Mapping):
        raise PmfFormatError(f"{where}: expected a JSON object, got {type(obj).__name__}")
    unknown = set(obj) - {"probs", "tail_deficit", "meta"}
    if unknown:
        raise PmfFormatError(f"{where}: unknown field(s) {sorted(unknown)}")
    if "probs" not in obj:
        raise PmfFormatError(f"{where}: missing field 'probs'")
    probs = obj["probs"]
    if not isinstance(probs, list) or not probs:
        raise PmfFormatError(f"{where}.probs: expected a non-empty array")
    for i, p in enumerate(probs):
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise PmfFormatError(f"{where}.probs[{i}]: expected a number, got {p!r}")
        if not (p >= 0 and math.isfinite(p)):
            raise PmfFormatError(f"{where}.probs[{i}]: must be finite and non-negative, got {p!r}")
    deficit = obj.get("tail_deficit", 0.0)
    if isinstance(deficit, bool) or not isinstance(deficit, (int, float)):
        raise PmfFormatError(f"{where}.tail_deficit: expected a number, got {deficit!r}")
    meta = obj.get("meta", "")
    if meta is None:
        meta = ""
    if not isinstance(meta, str):
        raise PmfFormatError(f"{where}.meta: expected a string, got {meta!r}")
    try:
        return Pmf(np.array(probs, dtype=np.float64), float(deficit), meta)
    except ParameterError as exc:
        raise PmfFormatError(f"{where}: {exc}") from None


def loads_json(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise PmfFormatError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def read_json(path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise PmfFormatError(f"{path}: {exc.strerror or exc}") from None
    return loads_json(text, str(path))


def read_pmf(path) -> Pmf:
    return pmf_from_dict(read_json(path), str(path))


def write_pmf(path, x: Pmf):
    atomic_write(path, pmf_to_json(x) + "\n")


_FAMILIES = {
    "geometric": (("lambda",), lambda a, pol: _pmf.make_geometric(a["lambda"], pol)),
    "poisson": (("lambda",), lambda a, pol: _pmf.make_poisson(a["lambda"], pol)),
    "binomial": (("n", "p"), lambda a, pol: _pmf.make_binomial(a["n"], a["p"], pol)),
    "bernoulli": (("p",), lambda a, pol: _pmf.make_bernoulli(a["p"])),
    "delta": (("k",), lambda a, pol: _pmf.make_delta(a["k"])),
    "uniform": (("a", "b"), lambda a, pol: _pmf.make_uniform(a["a"], a["b"])),
    "custom": (("weights",), lambda a, pol: _pmf.make_custom(a["weights"], pol)),
}


def pmf_from_spec(spec: Any, policy: TailPolicy = DEFAULT_POLICY, where: str = "input") -> Pmf:
    """Build a pmf from ``{"family": name, ...params}`` or an explicit pmf object."""
    if isinstance(spec, Mapping) and "family" in spec:
        name = spec["family"]
        if name not in _FAMILIES:
            raise PmfFormatError(f"{where}.family: unknown family {name!r}; expected one of {sorted(_FAMILIES)}")
        params, build = _FAMILIES[name]
        missing = [p for p in params if p not in spec]
        if missing:
            raise PmfFormatError(f"{where}: family {name!r} needs field(s) {missing}")
        extra = set(spec) - set(params) - {"family"}
        if extra:
            raise PmfFormatError(f"{where}: unknown field(s) {sorted(extra)} for family {name!r}")
        try:
            return build(spec, policy)
        except ParameterError as exc:
            raise PmfFormatError(f"{where}: {exc}") from None
    return pmf_from_dict(spec, where)


def policy_from_dict(obj: Any, where: str = "tail_policy") -> TailPolicy:
    if obj is None:
        return DEFAULT_POLICY
    if not isinstance(obj, Mapping):
        raise PmfFormatError(f"{where}: expected an object")
    unknown = set(obj) - {"epsilon_tail", "max_cutoff", "renormalize"}
    if unknown:
        raise PmfFormatError(f"{where}: unknown field(s) {sorted(unknown)}")
    try:
        return TailPolicy(**obj)
    except (ParameterError, TypeError) as exc:
        raise PmfFormatError(f"{where}: {exc}") from None


def policy_to_dict(policy: TailPolicy) -> dict:
    return {
        "epsilon_tail": policy.epsilon_tail,
        "max_cutoff": policy.max_cutoff,
        "renormalize": policy.renormalize,
    }
