import csv
import json

import jsonschema
import numpy as np
import pytest

from entlab import channels as chn
from entlab import dynamics as dyn
from entlab import io
from entlab import ordering as od
from entlab import states as stt
from entlab.errors import ContractError, SpecFormatError

SCHEMA_KINDS = ["state", "channel", "violation", "check-channel", "tsep", "counterexample", "ghz", "axioms", "maxent"]


def test_state_round_trip():
    rho = stt.random_density((2, 3), 4, 12)
    obj = json.loads(io.dumps(io.state_to_json(rho)))
    jsonschema.validate(obj, io.load_schema("state"))
    back = io.state_from_json(obj)
    assert back.dims == (2, 3)
    np.testing.assert_array_equal(back.mat, rho.mat)


def test_channel_round_trip():
    ch = chn.random_channel(2, 3, 5)
    obj = json.loads(io.dumps(io.channel_to_json(ch)))
    jsonschema.validate(obj, io.load_schema("channel"))
    back = io.channel_from_json(obj)
    assert (back.d_in, back.d_out, len(back.kraus)) == (2, 2, 3)
    for a, b in zip(back.kraus, ch.kraus):
        np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize(
    "obj",
    [[], {"dims": [2, 2]}, {"dims": ["x"], "matrix": []}, {"dims": [2], "matrix": [[1, 0]]},
     {"dims": [2], "matrix": [[1, 0, 0]] * 4}, {"dims": [2], "matrix": "abc"}],
)
def test_bad_state_json(obj):
    with pytest.raises(SpecFormatError):
        io.state_from_json(obj)


def test_bad_channel_json():
    with pytest.raises(SpecFormatError):
        io.channel_from_json({"d_in": 2, "kraus": []})
    with pytest.raises(SpecFormatError):
        io.channel_from_json({"d_in": 0, "d_out": 2, "kraus": []})
    half_identity = {"d_in": 2, "d_out": 2, "kraus": [io.encode_matrix(0.5 * np.eye(2))]}
    with pytest.raises(ContractError):
        io.channel_from_json(half_identity)
    assert io.channel_from_json(half_identity, check=False).d_in == 2


def test_load_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(SpecFormatError):
        io.load_json(bad)


def test_dumps_is_canonical():
    assert io.dumps({"b": 1, "a": [1.5, 2]}) == io.dumps({"a": [1.5, 2], "b": 1})
    assert io.dumps({}).endswith("\n")


@pytest.mark.parametrize("kind", SCHEMA_KINDS)
def test_schemas_are_valid(kind):
    schema = io.load_schema(kind)
    jsonschema.Draft202012Validator.check_schema(schema)
    assert schema["$id"] == f"entlab/{kind}.v{io.SCHEMA_VERSION}.json"


def test_envelope_rejected_with_wrong_tag():
    schema = io.load_schema("tsep")
    good = io.envelope("tsep", {"mode": "analytic", "T": 1.0, "t_sep": 1.0})
    jsonschema.validate(good, schema)
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(dict(good, schema="entlab/ghz"), schema)


def test_diagram_csv_round_trip():
    pts = od.scan_diagram(chn.depolarizing(0.5), "concurrence", ("werner", "pure"), 7)
    text = io.diagram_csv(pts)
    assert text.splitlines()[0] == "family,param,measure,e_in,e_out"
    rows = io.read_diagram_csv(text)
    assert len(rows) == 14
    for r, p in zip(rows, pts):
        # repr keeps full precision
        assert (r["family"], r["param"], r["e_in"], r["e_out"]) == (p.family, p.param, p.e_in, p.e_out)


def test_trajectory_csv():
    traj = dyn.trajectory(1.0, stt.p_plus(), [0.0, 0.5, 1.0])
    lines = io.trajectory_csv(traj).splitlines()
    assert lines[0] == "t,measure_kind,value"
    t, kind, value = lines[1].split(",")
    assert (t, kind) == ("0.0", "concurrence")
    assert float(value) == pytest.approx(1.0, abs=1e-12)
    with_state = io.trajectory_csv(traj, include_state=True).splitlines()
    assert with_state[0] == "t,measure_kind,value,state"
    row = next(csv.DictReader(with_state))
    back = io.state_from_json(json.loads(row["state"]))
    np.testing.assert_allclose(back.mat, stt.p_plus().mat, atol=1e-15)
