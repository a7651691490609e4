"""Operator spec files (JSON) with exact rational parsing."""
from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction
from pathlib import Path

from .cyclotomic import CyclotomicNumber
from .operators import Edge, OperatorSpec, SpecError

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


class SpecParseError(ValueError):
    """Malformed spec text; the message names the line or field."""


def parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise SpecParseError(f"{where}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value):
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise SpecParseError(f"{where}: zero denominator in {value!r}") from None
    if isinstance(value, float) or (isinstance(value, str) and re.search(r"[.eE]", value)):
        raise SpecParseError(f"{where}: floating literal {value!r} is not exact; write it as \"p/q\"")
    raise SpecParseError(f"{where}: expected a rational \"p/q\", got {value!r}")


def _parse_weight(value, where: str) -> CyclotomicNumber:
    if isinstance(value, dict):
        if set(value) != {"cyc", "coeffs"}:
            raise SpecParseError(f"{where}: cyclotomic weight needs exactly 'cyc' and 'coeffs'")
        order = value["cyc"]
        if not isinstance(order, int) or order < 1:
            raise SpecParseError(f"{where}.cyc: expected a positive integer")
        coeffs = [parse_rational(c, f"{where}.coeffs[{i}]") for i, c in enumerate(value["coeffs"])]
        return CyclotomicNumber(order, coeffs)
    return CyclotomicNumber.rational(parse_rational(value, where))


def _int_list(value, where: str) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise SpecParseError(f"{where}: expected a list of integers")
    return value


def spec_from_dict(doc: dict) -> OperatorSpec:
    if not isinstance(doc, dict):
        raise SpecParseError("top level: expected an object")
    kind = doc.get("kind")
    if kind not in ("schrodinger", "graph"):
        raise SpecParseError(f"kind: expected 'schrodinger' or 'graph', got {kind!r}")
    dim = doc.get("dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SpecParseError(f"dimension: expected a positive integer, got {dim!r}")
    name = str(doc.get("name", ""))
    if kind == "schrodinger":
        periods = tuple(_int_list(doc.get("periods"), "periods"))
        raw = doc.get("potential")
        if not isinstance(raw, dict):
            raise SpecParseError("potential: expected an object mapping \"i,j,...\" to rationals")
        table = {}
        for key, val in raw.items():
            try:
                idx = tuple(int(x) for x in str(key).split(","))
            except ValueError:
                raise SpecParseError(f"potential[{key!r}]: index must be comma-separated integers") from None
            if idx in table:
                raise SpecParseError(f"potential[{key!r}]: duplicate index")
            table[idx] = parse_rational(val, f"potential[{key!r}]")
        spec = OperatorSpec("schrodinger", dim, periods, table, name=name)
    else:
        vertices = doc.get("vertices")
        if not isinstance(vertices, int) or isinstance(vertices, bool):
            raise SpecParseError("vertices: expected an integer")
        onsite = {}
        for key, val in (doc.get("onsite") or {}).items():
            try:
                v = int(key)
            except ValueError:
                raise SpecParseError(f"onsite[{key!r}]: vertex must be an integer") from None
            onsite[v] = parse_rational(val, f"onsite[{key!r}]")
        edges = []
        for i, rec in enumerate(doc.get("edges") or []):
            where = f"edges[{i}]"
            if not isinstance(rec, dict) or not {"from", "to", "shift", "weight"} <= set(rec):
                raise SpecParseError(f"{where}: needs 'from', 'to', 'shift', 'weight'")
            shift = tuple(_int_list(rec["shift"], f"{where}.shift"))
            edges.append(Edge(int(rec["from"]), int(rec["to"]), shift, _parse_weight(rec["weight"], f"{where}.weight")))
        spec = OperatorSpec("graph", dim, vertices=vertices, edges=tuple(edges), onsite=onsite, name=name)
    spec.validate()
    return spec


def parse_spec_text(text: str) -> OperatorSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return spec_from_dict(doc)


def parse_spec(path) -> OperatorSpec:
    return parse_spec_text(Path(path).read_text())


def _rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _weight_json(w: CyclotomicNumber):
    if w.is_rational():
        return _rat(w.as_fraction())
    return {"cyc": w.order, "coeffs": [_rat(c) for c in w.coeffs]}


def spec_to_dict(spec: OperatorSpec) -> dict:
    """Canonical JSON-compatible form; parse_spec on it reproduces ``spec``."""
    out: dict = {"kind": spec.kind, "dimension": spec.dimension}
    if spec.name:
        out["name"] = spec.name
    if spec.kind == "schrodinger":
        out["periods"] = list(spec.periods)
        out["potential"] = {",".join(map(str, n)): _rat(spec.potential[n]) for n in spec.domain_points()}
    else:
        out["vertices"] = spec.vertices
        out["onsite"] = {str(v): _rat(c) for v, c in sorted(spec.onsite.items())}
        out["edges"] = [
            {"from": e.source, "to": e.target, "shift": list(e.shift), "weight": _weight_json(e.weight)}
            for e in spec.edges
        ]
    return out


def spec_to_text(spec: OperatorSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2, sort_keys=True) + "\n"


def spec_hash(spec: OperatorSpec) -> str:
    canon = json.dumps(spec_to_dict(spec), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


__all__ = [
    "SpecError",
    "SpecParseError",
    "parse_rational",
    "parse_spec",
    "parse_spec_text",
    "spec_from_dict",
    "spec_hash",
    "spec_to_dict",
    "spec_to_text",
]
