"""JSON file format for network snapshots.

The on-disk document is deterministic: fixed key order, maps keyed in
variable declaration order, floats rendered as their shortest round-trip
decimal (Python's default). Serialization therefore yields byte-identical
output for equal networks.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any

from .network import Cpt, Network, Variable

FORMAT_VERSION = 1


class ParseError(ValueError):
    """Malformed network or script file: bad JSON or wrong document shape."""


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise ParseError(message)


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def from_document(doc: Any) -> Network:
    """Build a Network from a parsed JSON document.

    Only the document *shape* is enforced here; invariant violations (bad row
    sums, cycles, dangling references) are left for validate_network so that
    broken files can still be loaded and reported on.
    """
    _expect(isinstance(doc, dict), "network document must be a JSON object")
    _expect("format_version" in doc, "missing required field format_version")
    fv = doc["format_version"]
    _expect(
        _is_number(fv) and fv == FORMAT_VERSION,
        f"unsupported format_version {fv!r} (expected {FORMAT_VERSION})",
    )
    label = doc.get("version_label")
    _expect(isinstance(label, str), "version_label must be a string")

    raw_vars = doc.get("variables")
    _expect(isinstance(raw_vars, list), "variables must be an array")
    variables = []
    for i, rv in enumerate(raw_vars):
        _expect(isinstance(rv, dict), f"variables[{i}] must be an object")
        vid = rv.get("id")
        name = rv.get("name")
        outs = rv.get("outcomes")
        _expect(isinstance(vid, str), f"variables[{i}].id must be a string")
        _expect(isinstance(name, str), f"variables[{i}].name must be a string")
        _expect(
            isinstance(outs, list) and all(isinstance(o, str) for o in outs),
            f"variables[{i}].outcomes must be an array of strings",
        )
        variables.append(Variable(vid, name, tuple(outs)))

    raw_parents = doc.get("parents")
    _expect(isinstance(raw_parents, dict), "parents must be an object")
    parents: dict[str, tuple[str, ...]] = {}
    for key, val in raw_parents.items():
        _expect(
            isinstance(val, list) and all(isinstance(p, str) for p in val),
            f"parents.{key} must be an array of variable ids",
        )
        parents[key] = tuple(val)
    for v in variables:
        parents.setdefault(v.id, ())

    raw_cpts = doc.get("cpts")
    _expect(isinstance(raw_cpts, dict), "cpts must be an object")
    cpts: dict[str, Cpt] = {}
    for key, rows in raw_cpts.items():
        _expect(isinstance(rows, list), f"cpts.{key} must be an array of rows")
        converted = []
        for j, row in enumerate(rows):
            _expect(
                isinstance(row, list) and all(_is_number(x) for x in row),
                f"cpts.{key}[{j}] must be an array of numbers",
            )
            converted.append(tuple(float(x) for x in row))
        cpts[key] = Cpt(key, parents.get(key, ()), tuple(converted))

    return Network(label, tuple(variables), parents, cpts)


def to_document(net: Network) -> dict[str, Any]:
    """Canonical JSON document for a complete (non-pending) network."""
    if net.stale:
        raise ValueError(
            "cannot serialize network with nodes pending re-encoding: "
            + ", ".join(sorted(net.stale))
        )
    return {
        "format_version": FORMAT_VERSION,
        "version_label": net.version_label,
        "variables": [
            {"id": v.id, "name": v.name, "outcomes": list(v.outcomes)}
            for v in net.variables
        ],
        "parents": {v.id: list(net.parents_of(v.id)) for v in net.variables},
        "cpts": {
            v.id: [list(row) for row in net.cpts[v.id].rows]
            for v in net.variables
            if v.id in net.cpts
        },
    }


def dumps(net: Network) -> str:
    return json.dumps(to_document(net), indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Network:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"parse error at line {e.lineno} column {e.colno}: {e.msg}"
        ) from None
    return from_document(doc)


def load_network(path: str | Path) -> Network:
    return loads(Path(path).read_text(encoding="utf-8"))


def write_text_atomic(path: str | Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename over `path`."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def save_network(net: Network, path: str | Path) -> None:
    write_text_atomic(path, dumps(net))
