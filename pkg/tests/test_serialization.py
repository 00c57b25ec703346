import json
import math

import numpy as np
import pytest
from hypothesis import given

from discrete_epi import PmfFormatError, TailPolicy, make_geometric, make_poisson
from discrete_epi.serialization import (
    atomic_write, dumps, format_float, loads_json, pmf_from_dict, pmf_from_spec, pmf_to_csv,
    pmf_to_json, policy_from_dict, policy_to_dict, read_pmf, write_pmf,
)

from conftest import pmfs


def test_format_float_is_replay_exact():
    for v in (0.1, 1 / 3, 2.0 ** -1074, 1e308, -0.0):
        assert float(format_float(v)) == v
    assert format_float(float("nan")) == "NaN"
    assert format_float(float("-inf")) == "-Infinity"


def test_dumps_shapes():
    assert dumps({"a": [1, 0.5, None, True], "b": "x"}) == '{"a": [1, 0.5, null, true], "b": "x"}'
    assert json.loads(dumps(np.array([0.1, 0.2]))) == [0.1, 0.2]
    with pytest.raises(TypeError):
        dumps(object())


@given(pmfs(max_support=30))
def test_json_roundtrip_bit_identical(x):
    y = pmf_from_dict(json.loads(pmf_to_json(x)))
    assert np.array_equal(x.probs, y.probs)
    assert x.tail_deficit == y.tail_deficit and x.meta == y.meta


def test_file_roundtrip(tmp_path):
    x = make_poisson(7.3)
    write_pmf(tmp_path / "x.json", x)
    y = read_pmf(tmp_path / "x.json")
    assert np.array_equal(x.probs, y.probs) and x.tail_deficit == y.tail_deficit
    assert list(tmp_path.iterdir()) == [tmp_path / "x.json"]


def test_csv_layout():
    text = pmf_to_csv(make_geometric(1.0))
    lines = text.splitlines()
    assert lines[0] == "k,p"
    assert lines[1] == "0,0.5"
    assert float(lines[2].split(",")[1]) == 0.25


def test_atomic_write_replaces(tmp_path):
    p = tmp_path / "out.txt"
    atomic_write(p, "one")
    atomic_write(p, "two")
    assert p.read_text() == "two"
    assert [f.name for f in tmp_path.iterdir()] == ["out.txt"]


@pytest.mark.parametrize("obj,msg", [
    ([0.5, 0.5], "expected a JSON object"),
    ({"prob": [1]}, "unknown field"),
    ({}, "missing field 'probs'"),
    ({"probs": []}, "non-empty"),
    ({"probs": [0.5, "a"]}, r"probs\[1\]"),
    ({"probs": [1.5, -0.5]}, r"probs\[1\]"),
    ({"probs": [0.5, 0.4]}, "sum"),
    ({"probs": [1.0], "meta": 3}, "meta"),
])
def test_pmf_diagnostics(obj, msg):
    with pytest.raises(PmfFormatError, match=msg):
        pmf_from_dict(obj)


def test_json_syntax_error_location():
    with pytest.raises(PmfFormatError, match="line 2, column 1"):
        loads_json('{"probs": [1,\n', "f.json")


def test_specs():
    g = pmf_from_spec({"family": "geometric", "lambda": 2.0})
    assert g.meta.startswith("geometric")
    assert pmf_from_spec({"family": "binomial", "n": 3, "p": 0.5}).cutoff == 3
    assert pmf_from_spec({"probs": [0.25, 0.75]}).probs.tolist() == [0.25, 0.75]
    for bad, msg in (({"family": "zeta"}, "unknown family"), ({"family": "poisson"}, "needs field"),
                     ({"family": "delta", "k": 1, "z": 0}, "unknown field"),
                     ({"family": "bernoulli", "p": 2.0}, "input")):
        with pytest.raises(PmfFormatError, match=msg):
            pmf_from_spec(bad)


def test_policy_dict_roundtrip():
    pol = TailPolicy(1e-9, 100, True)
    assert policy_from_dict(policy_to_dict(pol)) == pol
    with pytest.raises(PmfFormatError):
        policy_from_dict({"epsilon_tail": -1})
    with pytest.raises(PmfFormatError):
        policy_from_dict({"eps": 1e-3})
    assert math.isclose(policy_from_dict(None).epsilon_tail, 1e-12)
