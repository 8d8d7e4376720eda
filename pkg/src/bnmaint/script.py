"""Change scripts: a JSON array of edit records applied in sequence.

Elicited probability blocks are keyed by explicit parent-configuration
assignments (outcome labels, never row indices), so a script survives any
reordering of a file's rows. Each record names its operation:

* ``add_outcomes`` - node, outcomes, mode ("ignored" or "general"), blocks
  holding per-configuration values (the new outcomes' probabilities, or the
  full new row in general mode).
* ``split_outcome`` - node, outcome, parts, mode ("split" or "general"),
  form ("weights" or "probs", split mode), blocks per configuration.
* ``reuse_successor_rows`` - node, parent, blocks ({outcome, given, values})
  holding one full row per new parent outcome and other-parent config.
* ``add_arc`` - from, to, mode ("assumed-constant" with baseline plus
  labeled row blocks, or "general" with full-configuration blocks).
* ``add_variable`` - variable {id, name, outcomes}, parents, blocks for its
  own table, mode, baseline, successors: [{node, blocks}].
* ``remove_arc`` - from, to, blocks (replacement rows).
* ``remove_outcome`` - node, outcome, and either renormalize: true or
  blocks plus successors: [{node, blocks}].
* ``replace_cpt`` - node, blocks.

A block is ``{"given": {parent id: outcome label, ...}, "values": [...]}``;
row-per-outcome blocks carry an additional ``"outcome"`` key. Blocks must
cover every configuration exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

from . import edits
from .edits import MaintenanceError, Transaction
from .netio import ParseError
from .network import Network, Variable, config_index


class ScriptError(Exception):
    """A change-script record failed; `op_index` is 1-based."""

    def __init__(self, op_index: int | None, message: str):
        super().__init__(message)
        self.op_index = op_index
        self.message = message

    def __str__(self) -> str:
        if self.op_index is None:
            return self.message
        return f"op {self.op_index}: {self.message}"


@dataclass(frozen=True)
class ScriptResult:
    transactions: tuple[Transaction, ...]
    final: Network


def parse_script(doc: Any) -> list[dict]:
    """Shape check only; record contents are resolved against the live
    network as each op applies."""
    if not isinstance(doc, list):
        raise ParseError("change script must be a JSON array of operations")
    for i, rec in enumerate(doc, 1):
        if not isinstance(rec, dict):
            raise ParseError(f"script entry {i} must be an object")
    return doc


def apply_script(net: Network, ops: Sequence[Mapping[str, Any]]) -> ScriptResult:
    """Apply every record in order; any failure aborts the whole script.

    The final network must be complete: a script that leaves nodes pending
    re-encoding fails.
    """
    transactions: list[Transaction] = []
    current = net
    for i, rec in enumerate(ops, 1):
        try:
            t = _apply_one(current, rec)
        except (MaintenanceError, ValueError, KeyError, TypeError) as e:
            msg = e.args[0] if e.args else str(e)
            raise ScriptError(i, str(msg)) from e
        transactions.append(t)
        current = t.after
    if current.stale:
        raise ScriptError(
            None,
            "script leaves nodes pending re-encoding: "
            + ", ".join(sorted(current.stale)),
        )
    return ScriptResult(tuple(transactions), current)


# ---------------------------------------------------------------------------
# field and block helpers
# ---------------------------------------------------------------------------


def _field(rec: Mapping[str, Any], name: str, kind: type, what: str = "") -> Any:
    if name not in rec:
        raise MaintenanceError(f"missing field {name!r}{what}")
    value = rec[name]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise MaintenanceError(f"field {name!r} must be a number")
        return float(value)
    if not isinstance(value, kind):
        raise MaintenanceError(f"field {name!r} must be of type {kind.__name__}")
    return value


def _string_list(rec: Mapping[str, Any], name: str) -> list[str]:
    value = _field(rec, name, list)
    if not all(isinstance(x, str) for x in value):
        raise MaintenanceError(f"field {name!r} must be an array of strings")
    return value


def _values(block: Mapping[str, Any]) -> list[float]:
    raw = block.get("values")
    if not isinstance(raw, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw
    ):
        raise MaintenanceError('block field "values" must be an array of numbers')
    return [float(x) for x in raw]


def _resolve_config(
    given: Any,
    parent_ids: Sequence[str],
    outcomes_of: Callable[[str], tuple[str, ...]],
) -> tuple[int, ...]:
    if not isinstance(given, dict):
        raise MaintenanceError('block field "given" must be an object')
    if set(given) != set(parent_ids):
        raise MaintenanceError(
            f'block "given" must assign exactly ({", ".join(parent_ids)})'
        )
    config = []
    for pid in parent_ids:
        label = given[pid]
        outs = outcomes_of(pid)
        if label not in outs:
            raise MaintenanceError(f"unknown outcome {label!r} of {pid}")
        config.append(outs.index(label))
    return tuple(config)


def _config_blocks(
    blocks: Any,
    parent_ids: Sequence[str],
    outcomes_of: Callable[[str], tuple[str, ...]],
    what: str,
) -> list[list[float]]:
    """Blocks keyed by full parent configuration -> values in row order."""
    if not isinstance(blocks, list):
        raise MaintenanceError(f"{what}: blocks must be an array")
    radices = [len(outcomes_of(p)) for p in parent_ids]
    total = math.prod(radices)
    out: list[list[float] | None] = [None] * total
    for block in blocks:
        if not isinstance(block, dict):
            raise MaintenanceError(f"{what}: each block must be an object")
        config = _resolve_config(block.get("given", {}), parent_ids, outcomes_of)
        j = config_index(config, radices)
        if out[j] is not None:
            raise MaintenanceError(f"{what}: duplicate block for configuration {config}")
        out[j] = _values(block)
    missing = [j for j, v in enumerate(out) if v is None]
    if missing:
        raise MaintenanceError(
            f"{what}: missing block for {len(missing)} of {total} configurations"
        )
    return out  # type: ignore[return-value]


def _labeled_row_blocks(
    blocks: Any,
    other_parent_ids: Sequence[str],
    outcomes_of: Callable[[str], tuple[str, ...]],
    what: str,
) -> dict[str, list[list[float]]]:
    """Blocks keyed by (outcome label, other-parent configuration) -> rows
    grouped per label, each group in other-parent row order."""
    if not isinstance(blocks, list):
        raise MaintenanceError(f"{what}: blocks must be an array")
    grouped: dict[str, list[dict]] = {}
    for block in blocks:
        if not isinstance(block, dict):
            raise MaintenanceError(f"{what}: each block must be an object")
        label = block.get("outcome")
        if not isinstance(label, str):
            raise MaintenanceError(f'{what}: block field "outcome" must be a string')
        grouped.setdefault(label, []).append(block)
    return {
        label: _config_blocks(group, other_parent_ids, outcomes_of, f"{what} ({label})")
        for label, group in grouped.items()
    }


def _net_outcomes(net: Network, extra: Mapping[str, tuple[str, ...]] | None = None):
    def outcomes_of(pid: str) -> tuple[str, ...]:
        if extra and pid in extra:
            return extra[pid]
        return net.outcomes(pid)

    return outcomes_of


# ---------------------------------------------------------------------------
# per-record handlers
# ---------------------------------------------------------------------------


def _apply_one(net: Network, rec: Mapping[str, Any]) -> Transaction:
    name = rec.get("op")
    if not isinstance(name, str):
        raise MaintenanceError('missing or non-string "op" field')
    handler = _HANDLERS.get(name)
    if handler is None:
        raise MaintenanceError(f"unknown operation {name!r}")
    return handler(net, rec)


def _op_add_outcomes(net: Network, rec: Mapping[str, Any]) -> Transaction:
    node = _field(rec, "node", str)
    labels = _string_list(rec, "outcomes")
    mode = rec.get("mode", edits.MODE_GENERAL)
    blocks = _config_blocks(
        rec.get("blocks", []), net.parents_of(node), _net_outcomes(net), node
    )
    if mode == edits.MODE_IGNORED:
        return edits.add_outcomes_ignored(net, node, labels, blocks)
    if mode == edits.MODE_GENERAL:
        return edits.add_outcomes_general(net, node, labels, blocks)
    raise MaintenanceError(f"mode {mode!r} is not legal for add_outcomes")


def _op_split_outcome(net: Network, rec: Mapping[str, Any]) -> Transaction:
    node = _field(rec, "node", str)
    outcome = _field(rec, "outcome", str)
    parts = _string_list(rec, "parts")
    mode = rec.get("mode", edits.MODE_SPLIT)
    blocks = _config_blocks(
        rec.get("blocks", []), net.parents_of(node), _net_outcomes(net), node
    )
    if mode == edits.MODE_SPLIT:
        form = rec.get("form", "weights")
        return edits.split_outcome(net, node, outcome, parts, blocks, form=form)
    if mode == edits.MODE_GENERAL:
        return edits.split_outcome_general(net, node, outcome, parts, blocks)
    raise MaintenanceError(f"mode {mode!r} is not legal for split_outcome")


def _op_reuse_successor_rows(net: Network, rec: Mapping[str, Any]) -> Transaction:
    node = _field(rec, "node", str)
    parent = _field(rec, "parent", str)
    others = tuple(p for p in net.parents_of(node) if p != parent)
    rows = _labeled_row_blocks(
        rec.get("blocks", []), others, _net_outcomes(net), node
    )
    info = net.stale.get(node)
    if info is not None and info.cause == edits.KIND_SPLIT_OUTCOME:
        return edits.reuse_successor_rows_split(net, node, parent, rows)
    return edits.reuse_successor_rows_ignored(net, node, parent, rows)


def _op_add_arc(net: Network, rec: Mapping[str, Any]) -> Transaction:
    src = _field(rec, "from", str)
    dst = _field(rec, "to", str)
    mode = rec.get("mode", edits.MODE_GENERAL)
    if mode == edits.MODE_ASSUMED_CONSTANT:
        baseline = _field(rec, "baseline", str)
        rows = _labeled_row_blocks(
            rec.get("blocks", []), net.parents_of(dst), _net_outcomes(net), dst
        )
        return edits.add_arc_assumed_constant(net, src, dst, baseline, rows)
    if mode == edits.MODE_GENERAL:
        parent_ids = net.parents_of(dst) + (src,)
        blocks = _config_blocks(
            rec.get("blocks", []), parent_ids, _net_outcomes(net), dst
        )
        return edits.add_arc_general(net, src, dst, blocks)
    raise MaintenanceError(f"mode {mode!r} is not legal for add_arc")


def _op_add_variable(net: Network, rec: Mapping[str, Any]) -> Transaction:
    raw = _field(rec, "variable", dict)
    vid = _field(raw, "id", str)
    name = raw.get("name", vid)
    if not isinstance(name, str):
        raise MaintenanceError('variable field "name" must be a string')
    outcomes = tuple(_string_list(raw, "outcomes"))
    variable = Variable(vid, name, outcomes)
    parent_ids = tuple(_string_list(rec, "parents"))
    mode = rec.get("mode", edits.MODE_GENERAL)
    own_blocks = _config_blocks(
        rec.get("blocks", []), parent_ids, _net_outcomes(net), vid
    )
    lookup = _net_outcomes(net, {vid: outcomes})
    successors: dict[str, object] = {}
    raw_succ = rec.get("successors", [])
    if not isinstance(raw_succ, list):
        raise MaintenanceError('"successors" must be an array')
    baseline = None
    if mode == edits.MODE_ASSUMED_CONSTANT:
        baseline = _field(rec, "baseline", str)
    for entry in raw_succ:
        if not isinstance(entry, dict):
            raise MaintenanceError("each successor entry must be an object")
        s = _field(entry, "node", str)
        if mode == edits.MODE_ASSUMED_CONSTANT:
            successors[s] = _labeled_row_blocks(
                entry.get("blocks", []), net.parents_of(s), lookup, s
            )
        else:
            successors[s] = _config_blocks(
                entry.get("blocks", []), net.parents_of(s) + (vid,), lookup, s
            )
    return edits.add_variable(
        net,
        variable,
        parent_ids,
        own_blocks,
        mode=mode,
        baseline=baseline,
        successors=successors,
    )


def _op_remove_arc(net: Network, rec: Mapping[str, Any]) -> Transaction:
    src = _field(rec, "from", str)
    dst = _field(rec, "to", str)
    remaining = tuple(p for p in net.parents_of(dst) if p != src)
    blocks = _config_blocks(rec.get("blocks", []), remaining, _net_outcomes(net), dst)
    return edits.remove_arc(net, src, dst, blocks)


def _op_remove_outcome(net: Network, rec: Mapping[str, Any]) -> Transaction:
    node = _field(rec, "node", str)
    outcome = _field(rec, "outcome", str)
    if rec.get("renormalize", False):
        return edits.remove_outcome(net, node, outcome, renormalize=True)
    reduced = {
        node: tuple(o for o in net.outcomes(node) if o != outcome)
    }
    lookup = _net_outcomes(net, reduced)
    blocks = _config_blocks(rec.get("blocks", []), net.parents_of(node), lookup, node)
    succ: dict[str, list[list[float]]] = {}
    raw_succ = rec.get("successors", [])
    if not isinstance(raw_succ, list):
        raise MaintenanceError('"successors" must be an array')
    for entry in raw_succ:
        if not isinstance(entry, dict):
            raise MaintenanceError("each successor entry must be an object")
        s = _field(entry, "node", str)
        succ[s] = _config_blocks(entry.get("blocks", []), net.parents_of(s), lookup, s)
    return edits.remove_outcome(
        net, node, outcome, replacement_rows=blocks, successor_replacements=succ
    )


def _op_replace_cpt(net: Network, rec: Mapping[str, Any]) -> Transaction:
    node = _field(rec, "node", str)
    blocks = _config_blocks(
        rec.get("blocks", []), net.parents_of(node), _net_outcomes(net), node
    )
    return edits.replace_cpt(net, node, blocks)


_HANDLERS: dict[str, Callable[[Network, Mapping[str, Any]], Transaction]] = {
    "add_outcomes": _op_add_outcomes,
    "split_outcome": _op_split_outcome,
    "reuse_successor_rows": _op_reuse_successor_rows,
    "add_arc": _op_add_arc,
    "add_variable": _op_add_variable,
    "remove_arc": _op_remove_arc,
    "remove_outcome": _op_remove_outcome,
    "replace_cpt": _op_replace_cpt,
}
