"""JSON algebra files.

::

    {
      "dim": 8,
      "brackets": [{"i": 1, "j": 2, "targets": {"5": "1"}}, ...],
      "metric": [["1", "0", ...], ...],          (optional, identity if absent)
      "J": [J1, J2] or [J1, J2, J3]              (optional, J3 = J1 J2 if absent)
    }

Indices are 1-based and rationals are strings ("p/q" or integers); plain JSON
integers are accepted too, floats never are.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import HktError
from .exactlin import Matrix, fmt_scalar, positive_definite
from .hypercx import HypercomplexStructure
from .liealg import MetricLieAlgebra, validate

# error codes; each semantic failure gets its own
SYNTAX = "E100"
SCHEMA = "E101"
BAD_RATIONAL = "E102"
INDEX_RANGE = "E103"
NOT_INCREASING = "E104"
DUPLICATE_BRACKET = "E105"
BAD_SHAPE = "E106"
METRIC_NOT_SYMMETRIC = "E107"
METRIC_NOT_PD = "E108"
JACOBI = "E109"


class AlgebraFileError(HktError):
    def __init__(self, code: str, message: str, where: str = "", line: int | None = None, col: int | None = None):
        self.code = code
        self.where = where
        self.line = line
        self.col = col
        loc = f"line {line}, column {col}: " if line is not None else (f"{where}: " if where else "")
        super().__init__(f"{code} {loc}{message}")


@dataclass
class AlgebraFile:
    algebra: MetricLieAlgebra
    structure: HypercomplexStructure | None


def _rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise AlgebraFileError(BAD_RATIONAL, f"{x!r} is not an exact rational (use a string such as \"1/2\")", where)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            if "." in x or "e" in x.lower():
                raise ValueError
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise AlgebraFileError(BAD_RATIONAL, f"{x!r} is not a rational of the form p/q", where)


def _index(x: Any, dim: int, where: str) -> int:
    if isinstance(x, str) and x.strip().isdigit():
        x = int(x)
    if isinstance(x, bool) or not isinstance(x, int):
        raise AlgebraFileError(SCHEMA, f"index {x!r} is not an integer", where)
    if not 1 <= x <= dim:
        raise AlgebraFileError(INDEX_RANGE, f"index {x} outside 1..{dim}", where)
    return x - 1


def _matrix(data: Any, dim: int, where: str) -> Matrix:
    if not isinstance(data, list) or len(data) != dim or any(not isinstance(r, list) or len(r) != dim for r in data):
        raise AlgebraFileError(BAD_SHAPE, f"expected a {dim}x{dim} matrix", where)
    return Matrix([[_rational(x, f"{where}[{a}][{b}]") for b, x in enumerate(r)] for a, r in enumerate(data)])


def parse_algebra_file(text: str, *, check_jacobi: bool = True) -> AlgebraFile:
    """Parse and validate an algebra file.

    With ``check_jacobi=False`` a Jacobi-violating table is returned as is so
    callers can report on it.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFileError(SYNTAX, exc.msg, line=exc.lineno, col=exc.colno) from None
    if not isinstance(doc, dict):
        raise AlgebraFileError(SCHEMA, "top level must be an object")
    dim = doc.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise AlgebraFileError(SCHEMA, "\"dim\" must be a positive integer", "dim")
    unknown = set(doc) - {"dim", "brackets", "metric", "J", "name"}
    if unknown:
        raise AlgebraFileError(SCHEMA, f"unknown keys {sorted(unknown)}")

    brackets = {}
    raw = doc.get("brackets", [])
    if not isinstance(raw, list):
        raise AlgebraFileError(SCHEMA, "\"brackets\" must be a list", "brackets")
    for n, entry in enumerate(raw):
        where = f"brackets[{n}]"
        if not isinstance(entry, dict) or not {"i", "j", "targets"} <= set(entry):
            raise AlgebraFileError(SCHEMA, "bracket entries need \"i\", \"j\" and \"targets\"", where)
        i = _index(entry["i"], dim, where + ".i")
        j = _index(entry["j"], dim, where + ".j")
        if i >= j:
            raise AlgebraFileError(NOT_INCREASING, f"indices not increasing ({i + 1} >= {j + 1})", where)
        if (i, j) in brackets:
            raise AlgebraFileError(DUPLICATE_BRACKET, f"bracket [e{i + 1}, e{j + 1}] given twice", where)
        targets = entry["targets"]
        if not isinstance(targets, dict):
            raise AlgebraFileError(SCHEMA, "\"targets\" must map indices to rationals", where)
        t = {}
        for k, v in targets.items():
            kk = _index(k, dim, f"{where}.targets")
            c = _rational(v, f"{where}.targets.{k}")
            if c:
                t[kk] = c
        brackets[(i, j)] = t

    metric = None
    if doc.get("metric") is not None:
        metric = _matrix(doc["metric"], dim, "metric")
        if not metric.is_symmetric():
            raise AlgebraFileError(METRIC_NOT_SYMMETRIC, "metric is not symmetric", "metric")
        if not positive_definite(metric):
            raise AlgebraFileError(METRIC_NOT_PD, "metric is not positive definite", "metric")

    L = MetricLieAlgebra(dim, brackets, metric, check=False)
    if check_jacobi:
        report = validate(L)
        if not report.ok:
            raise AlgebraFileError(JACOBI, report.summary(), "brackets")

    H = None
    if doc.get("J") is not None:
        Js = doc["J"]
        if not isinstance(Js, list) or len(Js) not in (2, 3):
            raise AlgebraFileError(SCHEMA, "\"J\" must list two or three matrices", "J")
        mats = [_matrix(m, dim, f"J[{a}]") for a, m in enumerate(Js)]
        H = HypercomplexStructure(*mats) if len(mats) == 3 else HypercomplexStructure.from_pair(*mats)
    return AlgebraFile(L, H)


def _fmt_matrix(M: Matrix) -> list[list[str]]:
    return [[fmt_scalar(x) for x in r] for r in M]


def algebra_to_dict(L: MetricLieAlgebra, H: HypercomplexStructure | None = None, name: str | None = None) -> dict:
    doc: dict[str, Any] = {}
    if name:
        doc["name"] = name
    doc["dim"] = L.dim
    doc["brackets"] = [
        {"i": i + 1, "j": j + 1, "targets": {str(k + 1): fmt_scalar(c) for k, c in sorted(t.items())}}
        for (i, j), t in sorted(L.structure_constants.items())
    ]
    if not L.metric_is_identity:
        doc["metric"] = _fmt_matrix(L.metric)
    if H is not None:
        doc["J"] = [_fmt_matrix(J) for J in H.triple]
    return doc


def dump_algebra(L: MetricLieAlgebra, H: HypercomplexStructure | None = None, name: str | None = None) -> str:
    """Deterministic JSON: one bracket per line, one matrix row per line."""
    doc = algebra_to_dict(L, H, name)
    enc = json.dumps

    def block(items: list[str], indent: str) -> str:
        if not items:
            return "[]"
        return "[\n" + ",\n".join(indent + "  " + x for x in items) + "\n" + indent + "]"

    def matrix(M: list, indent: str = "  ") -> str:
        return block([enc(r) for r in M], indent)

    parts = []
    for key, val in doc.items():
        if key == "brackets":
            text = block([enc(b) for b in val], "  ")
        elif key == "metric":
            text = matrix(val)
        elif key == "J":
            text = block([matrix(M, "    ") for M in val], "  ")
        else:
            text = enc(val)
        parts.append(f"  {enc(key)}: {text}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


__all__ = ["AlgebraFile", "AlgebraFileError", "dump_algebra", "parse_algebra_file"]
