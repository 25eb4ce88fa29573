"""JSON wire formats: arrangement specs in, result bundles out."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from importlib import resources
from typing import Any

import jsonschema

from .arrangement import AffineForm, Arrangement, Geometry
from .coefficients import classify_pair
from .linalg import to_fraction
from .ode import ODESystem
from .quadrature import IntegralValue
from .stokes import StokesData
from .verify import CheckReport


class SchemaError(ValueError):
    def __init__(self, message: str, path: list | None = None):
        super().__init__(message)
        self.path = path or []


def load_schema(name: str) -> dict:
    text = resources.files("hyperstokes").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def parse_arrangement(doc: Any) -> Arrangement:
    try:
        jsonschema.validate(doc, load_schema("arrangement"))
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message, list(exc.absolute_path)) from None
    k = doc["k"]
    if len(doc["forms"]) < k:
        raise SchemaError(f"need at least k = {k} forms")
    if len(doc["weights"]) != len(doc["forms"]):
        raise SchemaError("one weight per form is required")
    if len(doc["f0"]) != k or any(len(f["linear"]) != k for f in doc["forms"]):
        raise SchemaError(f"every linear part must have length k = {k}")
    try:
        forms = tuple(AffineForm(tuple(to_fraction(c) for c in f["linear"]),
                                 to_fraction(f["constant"])) for f in doc["forms"])
        return Arrangement(k, forms, tuple(doc["weights"]), tuple(to_fraction(c) for c in doc["f0"]))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(str(exc)) from None


def _rat(x: Fraction) -> str:
    return str(x)


def arrangement_to_dict(arr: Arrangement) -> dict:
    return {
        "k": arr.k,
        "forms": [{"linear": [_rat(c) for c in f.linear], "constant": _rat(f.constant)}
                  for f in arr.forms],
        "weights": list(arr.weights),
        "f0": [_rat(c) for c in arr.f0],
    }


def _c(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _uc(pair) -> complex:
    return complex(pair[0], pair[1])


def _finite(x: float):
    return x if math.isfinite(x) else str(x)


@dataclass
class ResultBundle:
    command: str
    arrangement: dict | None = None
    vertices: list[dict] | None = None
    chambers: list[dict] | None = None
    pairs: list[dict] | None = None
    matA: list[list[float]] | None = None
    matB: list[list[float]] | None = None
    c0: list[list[complex]] | None = None
    c1: list[list[complex]] | None = None
    stokes_rules: dict | None = None
    integrals: list[dict] | None = None
    checks: list[dict] | None = None
    oracle_max_abs_difference: float | None = None
    error: dict | None = None

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if f.name in ("c0", "c1"):
                value = [[_c(z) for z in row] for row in value]
            elif f.name == "integrals":
                value = [{**item, "value": _c(item["value"])} for item in value]
            elif f.name == "checks":
                value = [{**item, "lambdas": [_c(z) for z in item["lambdas"]]} for item in value]
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "ResultBundle":
        kwargs = dict(doc)
        for name in ("c0", "c1"):
            if name in kwargs:
                kwargs[name] = [[_uc(z) for z in row] for row in kwargs[name]]
        if "integrals" in kwargs:
            kwargs["integrals"] = [{**i, "value": _uc(i["value"])} for i in kwargs["integrals"]]
        if "checks" in kwargs:
            kwargs["checks"] = [{**c, "lambdas": [_uc(z) for z in c["lambdas"]]}
                                for c in kwargs["checks"]]
        return cls(**kwargs)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "ResultBundle":
        return cls.from_dict(json.loads(text))

    def validate(self) -> None:
        jsonschema.validate(self.to_dict(), load_schema("result"))


def geometry_fields(geo: Geometry, with_pairs: bool = True) -> dict:
    vertices = [{"indices": list(v.indices), "point": [_rat(c) for c in v.point],
                 "f0_value": _rat(v.f0_value), "orientation_sign": v.orientation_sign}
                for v in geo.vertices]
    chambers = [{"signs": list(c.signs), "interior_point": [_rat(x) for x in c.interior_point],
                 "bounded": c.bounded, "in_dplus": c.in_dplus,
                 "min_vertex": list(c.min_vertex.indices) if c.min_vertex else None}
                for c in geo.chambers]
    out = {"arrangement": arrangement_to_dict(geo.arr), "vertices": vertices, "chambers": chambers}
    if with_pairs:
        pairs = []
        for x in geo.vertices:
            for xp in geo.vertices:
                if x.indices == xp.indices:
                    continue
                pc = classify_pair(geo, x, xp)
                pairs.append({
                    "X": list(x.indices), "X_prime": list(xp.indices),
                    "cone_status": pc.cone_status,
                    "positive_exceptional": pc.positive_exceptional,
                    "negative_exceptional": pc.negative_exceptional,
                    "exceptional_hyperplanes": sorted(pc.exceptional_hyperplanes),
                    "A": sorted(pc.set_A), "B": sorted(pc.set_B),
                })
        out["pairs"] = pairs
    return out


def stokes_fields(ode: ODESystem, st: StokesData) -> dict:
    rules = {name: [{"row": list(r.row), "col": list(r.col), "rule": r.rule,
                     "A": sorted(r.set_A), "B": sorted(r.set_B), "new": sorted(r.new_labels)}
                    for r in records]
             for name, records in st.exceptional_log.items()}
    return {
        "matA": ode.matA.tolist(),
        "matB": ode.matB.tolist(),
        "c0": st.c0.tolist(),
        "c1": st.c1.tolist(),
        "stokes_rules": rules,
    }


def integral_to_dict(iv: IntegralValue, target=None, component=None) -> dict:
    out = {}
    if target is not None:
        out["target"] = list(target)
    if component is not None:
        out["component"] = list(component)
    out.update({"value": iv.value, "error_estimate": iv.error_estimate,
                "nodes_used": iv.nodes_used, "converged": iv.converged, "level": iv.level})
    return out


def _jsonable(obj):
    if isinstance(obj, complex):
        return _c(obj)
    if isinstance(obj, float):
        return _finite(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):
        return _jsonable(obj.item())
    return obj


def report_to_dict(report: CheckReport) -> dict:
    d = asdict(report)
    d["max_relative_residual"] = _finite(float(report.max_relative_residual))
    d["details"] = _jsonable(d["details"])
    d["lambdas"] = [complex(z) for z in report.lambdas]
    return d
