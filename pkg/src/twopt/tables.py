"""Serialization of invariant tables.

Rationals are written as ``"p/q"`` strings (``"p"`` when integral) and degrees
as strings, so nothing is lost in any JSON consumer. Entries are ordered by
basis index, then psi powers, then degree; writing a parsed file reproduces
it byte for byte.
"""
import csv
import io
import json
from fractions import Fraction

from .algebra import DegreeMonoid, rat_str
from .engine import InvariantTable
from .errors import ValidationError


def parse_degree(text: str, monoid: DegreeMonoid):
    if monoid.kind == "scalar":
        return Fraction(text)
    return tuple(int(x) for x in text.split(","))


def table_to_dict(table: InvariantTable) -> dict:
    m = table.monoid
    out = {
        "target": table.target_name,
        "basis": list(table.basis),
        "monoid": {"kind": m.kind, "rank": m.rank, "denominator": m.denominator},
        "depth": table.depth,
        "degrees": [m.fmt(d) for d in table.degrees],
        "entries": [
            {"a": a, "k": k, "b": b, "l": l, "degree": m.fmt(beta), "value": rat_str(v)}
            for (a, k, b, l, beta), v in table.items()
        ],
    }
    return out


def table_from_dict(data: dict) -> InvariantTable:
    try:
        mon = data["monoid"]
        monoid = DegreeMonoid(mon["kind"], int(mon["rank"]), int(mon["denominator"]))
        values = {}
        for e in data["entries"]:
            key = (int(e["a"]), int(e["k"]), int(e["b"]), int(e["l"]), parse_degree(e["degree"], monoid))
            values[key] = Fraction(e["value"])
        degrees = [parse_degree(d, monoid) for d in data.get("degrees", [])]
        table = InvariantTable(data["target"], data["basis"], monoid, values, data.get("depth"), degrees)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed table: {exc}") from None
    return table


def dumps(table: InvariantTable) -> str:
    return json.dumps(table_to_dict(table), indent=1) + "\n"


def loads(text: str) -> InvariantTable:
    return table_from_dict(json.loads(text))


def to_csv(table: InvariantTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "psi_a", "b", "psi_b", "degree", "value"])
    for (a, k, b, l, beta), v in table.items():
        w.writerow([table.basis[a], k, table.basis[b], l, table.monoid.fmt(beta), rat_str(v)])
    return buf.getvalue()
