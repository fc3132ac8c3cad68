"""JSON channel specification files.

Format::

    {"group": [[2, 1]], "outputs": 2,
     "matrix": [["9/10", "1/10"], [0.1, 0.9]],
     "name": "BSC(0.1)", "comment": "rows: (0), (1)"}

Rows follow the lexicographic order of group elements; ``comment`` is
generated on write and ignored on read.  Entries may be numbers or ``"a/b"``
strings.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .channel import Channel, make_channel
from .group import Group, make_group


class SpecError(ValueError):
    """Invalid channel specification; the message carries file/field context."""


def _probability(value, where: str) -> float:
    if isinstance(value, bool):
        raise SpecError(f"{where}: expected a probability, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"{where}: cannot parse {value!r} as a number or a/b") from exc
    raise SpecError(f"{where}: expected a probability, got {type(value).__name__}")


def parse_group_field(value, where: str = "group") -> Group:
    if not isinstance(value, list) or not value:
        raise SpecError(f"{where}: expected a nonempty list of [p, r] pairs")
    rings = []
    for j, pair in enumerate(value):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(v, int) for v in pair)):
            raise SpecError(f"{where}[{j}]: expected [p, r] integers, got {pair!r}")
        rings.append(tuple(pair))
    try:
        return make_group(rings)
    except ValueError as exc:
        raise SpecError(f"{where}: {exc}") from exc


def channel_from_dict(data, source: str = "<spec>") -> Channel:
    if not isinstance(data, dict):
        raise SpecError(f"{source}: top level must be a JSON object")
    for key in ("group", "outputs", "matrix"):
        if key not in data:
            raise SpecError(f"{source}: missing field '{key}'")
    group = parse_group_field(data["group"], f"{source}: field 'group'")
    outputs = data["outputs"]
    if not isinstance(outputs, int) or isinstance(outputs, bool) or outputs < 1:
        raise SpecError(f"{source}: field 'outputs' must be a positive integer")
    rows = data["matrix"]
    if not isinstance(rows, list) or len(rows) != group.order:
        raise SpecError(f"{source}: field 'matrix' needs {group.order} rows (one per element of G)")
    W = []
    for i, row in enumerate(rows):
        where = f"{source}: field 'matrix' row {i} {group.elements[i]}"
        if not isinstance(row, list) or len(row) != outputs:
            raise SpecError(f"{where}: needs {outputs} entries")
        W.append([_probability(v, f"{where} col {j}") for j, v in enumerate(row)])
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise SpecError(f"{source}: field 'name' must be a string")
    try:
        return make_channel(group, outputs, W, name)
    except ValueError as exc:
        raise SpecError(f"{source}: field 'matrix': {exc}") from exc


def parse_channel_text(text: str, source: str = "<spec>") -> Channel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return channel_from_dict(data, source)


def parse_channel_file(path) -> Channel:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from exc
    return parse_channel_text(text, str(path))


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def row_order_comment(group: Group) -> str:
    labels = ", ".join("(" + ",".join(map(str, g)) + ")" for g in group.elements)
    return f"matrix rows are the group elements in lexicographic order: {labels}"


def channel_to_dict(channel: Channel, exact: list | None = None) -> dict:
    """Spec dictionary for a channel; ``exact`` may supply string entries."""
    matrix = exact if exact is not None else channel.matrix.tolist()
    out = {
        "group": [list(r) for r in channel.group.rings],
        "outputs": channel.output_size,
        "matrix": matrix,
        "comment": row_order_comment(channel.group),
    }
    if channel.name:
        out["name"] = channel.name
    return out


def dumps_channel(channel: Channel, exact: list | None = None) -> str:
    """Pretty JSON with one matrix row per line."""
    data = channel_to_dict(channel, exact)
    lines = [f"  {json.dumps(key)}: {json.dumps(val)}" for key, val in data.items() if key != "matrix"]
    rows = ",\n".join("    " + json.dumps(r) for r in data["matrix"])
    lines.append(f'  "matrix": [\n{rows}\n  ]')
    return "{\n" + ",\n".join(lines) + "\n}\n"


def write_channel_file(path, channel: Channel, exact: list | None = None) -> None:
    Path(path).write_text(dumps_channel(channel, exact), encoding="utf-8")
