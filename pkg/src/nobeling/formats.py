"""Text formats: ``.cube`` spaces, JSON functions and JSON finite spaces.

A ``.cube`` file is::

    n <count>
    order <rank of coordinate 0> <rank of coordinate 1> ...   (optional)
    <one n-character 0/1 string per point, coordinate 0 leftmost>

Files are newline-terminated.  The writer emits points in canonical order
and the ``order`` line only for non-identity orders, so a parse/write round
trip is byte-identical.
"""

from __future__ import annotations

import json

from .cube import CoordinateOrder, CubeSet, FunctionOnS, point_to_str, str_to_point
from .errors import AmbientMismatchError, ContractError, ParseError
from .profinite import ClopenFamily, FiniteSpace, InverseSystem


def parse_cube(text: str) -> CubeSet:
    if not text.endswith("\n"):
        raise ParseError("cube file must end with a newline")
    lines = text[:-1].split("\n")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n" or not head[1].isdigit():
        raise ParseError(f"expected 'n <count>' on line 1, got {lines[0]!r}")
    n = int(head[1])
    body = lines[1:]
    order = CoordinateOrder(n)
    if body and body[0].startswith("order"):
        fields = body[0].split()[1:]
        try:
            order = CoordinateOrder(n, tuple(int(r) for r in fields))
        except (ValueError, ContractError) as exc:
            raise ParseError(f"bad order line {body[0]!r}: {exc}") from None
        if len(fields) != n:
            raise ParseError(f"order line has {len(fields)} ranks for n = {n}")
        body = body[1:]
    if n > 0:
        body = [line for line in body if line.strip()]
    points = []
    for lineno, line in enumerate(body, start=len(lines) - len(body) + 1):
        try:
            points.append(str_to_point(line.strip() if n else line, n))
        except AmbientMismatchError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    if len(set(points)) != len(points):
        raise ParseError("duplicate points")
    return CubeSet(order, tuple(points))


def format_cube(S: CubeSet) -> str:
    lines = [f"n {S.n}"]
    if not S.order.is_identity():
        lines.append("order " + " ".join(str(r) for r in S.order.rank))
    lines.extend(S.bitstrings())
    return "\n".join(lines) + "\n"


def parse_function(text: str, domain: CubeSet) -> FunctionOnS:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"function file is not JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("function file must be a JSON object")
    values = {}
    for key, value in data.items():
        try:
            point = str_to_point(key, domain.n)
        except AmbientMismatchError as exc:
            raise ParseError(str(exc)) from None
        if point not in domain:
            raise ParseError(f"{key} is not a point of the space")
        try:
            values[point] = int(value)
        except (TypeError, ValueError):
            raise ParseError(f"value for {key} is not an integer: {value!r}") from None
    missing = [p for p in domain.points if p not in values]
    if missing:
        raise ParseError(f"{len(missing)} points have no value, e.g. {point_to_str(missing[0], domain.n)}")
    return FunctionOnS.from_mapping(domain, values)


def format_function(f: FunctionOnS) -> str:
    return json.dumps({k: str(v) for k, v in f.as_dict().items()}, indent=2) + "\n"


def parse_space(text: str) -> tuple[FiniteSpace, ClopenFamily | None] | InverseSystem:
    """Either ``{"elements": [...], "family": [[...], ...]}`` or an inverse system."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"space file is not JSON: {exc}") from None
    try:
        if "stages" in data:
            return InverseSystem.from_json(data)
        T = FiniteSpace(tuple(data["elements"]))
        family = None
        if "family" in data:
            family = ClopenFamily(T, tuple(frozenset(s) for s in data["family"]))
        return T, family
    except (KeyError, TypeError, ContractError) as exc:
        raise ParseError(f"bad space file: {exc}") from None
