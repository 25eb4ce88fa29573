import json
from fractions import Fraction

import jsonschema
import pytest

from hyperstokes.arrangement import analyze
from hyperstokes.io import (
    ResultBundle,
    SchemaError,
    arrangement_to_dict,
    geometry_fields,
    load_schema,
    parse_arrangement,
    stokes_fields,
)
from hyperstokes.ode import build_ode
from hyperstokes.stokes import stokes_matrices

from helpers import example2

TRIANGLE = {
    "k": 2,
    "forms": [{"linear": [1, 0], "constant": 0}, {"linear": [0, 1], "constant": 0},
              {"linear": [1, 1], "constant": -1}],
    "weights": [0.3, 0.4, 0.5],
    "f0": [2, 1],
}


def test_parse_triangle():
    assert parse_arrangement(TRIANGLE) == example2()


def test_rational_strings():
    doc = dict(TRIANGLE, f0=["5/2", " 3 / 4 "])
    arr = parse_arrangement(doc)
    assert arr.f0 == (Fraction(5, 2), Fraction(3, 4))


@pytest.mark.parametrize("patch, fragment", [
    ({"k": 0}, "minimum"),
    ({"weights": [0.3, 0.0, 0.5]}, "less than or equal"),
    ({"f0": ["1/0", 1]}, ""),
    ({"f0": ["abc", 1]}, ""),
    ({"extra": 1}, "Additional"),
    ({"weights": [0.3, 0.4]}, "one weight"),
    ({"f0": [1, 2, 3]}, "length"),
])
def test_schema_errors(patch, fragment):
    with pytest.raises(SchemaError) as info:
        parse_arrangement(dict(TRIANGLE, **patch))
    assert fragment in str(info.value)


def test_missing_key_reports_path():
    doc = json.loads(json.dumps(TRIANGLE))
    del doc["forms"][1]["constant"]
    with pytest.raises(SchemaError) as info:
        parse_arrangement(doc)
    assert info.value.path == ["forms", 1]


def test_zero_linear_part():
    doc = json.loads(json.dumps(TRIANGLE))
    doc["forms"][0]["linear"] = [0, 0]
    with pytest.raises(SchemaError):
        parse_arrangement(doc)


def test_arrangement_round_trip():
    arr = example2()
    assert parse_arrangement(arrangement_to_dict(arr)) == arr
    jsonschema.validate(arrangement_to_dict(arr), load_schema("arrangement"))


def test_bundle_round_trip_and_schema():
    geo = analyze(example2())
    fields_ = geometry_fields(geo)
    fields_.update(stokes_fields(build_ode(geo), stokes_matrices(geo)))
    bundle = ResultBundle("stokes", **fields_)
    bundle.validate()
    again = ResultBundle.loads(bundle.dumps())
    assert again == bundle
    assert again.c0[1][0] == bundle.c0[1][0]
    assert isinstance(again.c0[1][0], complex)
    doc = json.loads(bundle.dumps())
    assert doc["c0"][0][0] == [1.0, 0.0]
    assert len(doc["pairs"]) == 6


def test_error_bundle():
    b = ResultBundle("analyze", error={"type": "invalid-input", "message": "x"})
    b.validate()
    assert json.loads(b.dumps()) == {"command": "analyze", "error": {"type": "invalid-input",
                                                                      "message": "x"}}
