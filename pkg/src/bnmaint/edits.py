"""Structural edits applied as pure transactions.

Every operation takes a network snapshot plus the expert-supplied numbers the
edit needs, and returns a :class:`Transaction` carrying the edited snapshot,
per-node assessment bookkeeping, and (for the rescaling cases) the scale
factors it computed. Inputs are never mutated. Elicited numbers that violate
their constraints are rejected outright, never silently repaired.

Three edits let existing probabilities survive instead of being re-elicited:

* ``add_outcomes_ignored`` - newly recognized outcomes join a variable; each
  old row is scaled by the per-configuration probability that none of the
  new outcomes occurs, so the old outcomes keep their relative proportions.
* ``split_outcome`` - one outcome is refined into parts whose probabilities
  partition the original mass per configuration; all other entries are kept
  bit-for-bit.
* ``add_arc_assumed_constant`` / ``add_variable`` (assumed-constant mode) -
  a node gains a new conditioning variable whose baseline outcome reproduces
  the previous state of knowledge, so the old rows become the
  baseline-conditioned block verbatim.

When a variable's outcome space changes, nodes conditioned on it keep their
old tables and are marked pending (:class:`bnmaint.network.StaleParent`)
until ``reuse_successor_rows_*`` or ``replace_cpt`` completes them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .network import (
    ROW_SUM_TOLERANCE,
    Cpt,
    Network,
    StaleParent,
    Variable,
    config_index,
    has_path,
    validate_network,
    would_create_cycle,
)

KIND_ADD_OUTCOMES = "add_outcomes"
KIND_SPLIT_OUTCOME = "split_outcome"
KIND_ADD_VARIABLE = "add_variable"
KIND_ADD_ARC = "add_arc"
KIND_REMOVE_ARC = "remove_arc"
KIND_REMOVE_OUTCOME = "remove_outcome"
KIND_REPLACE_CPT = "replace_cpt"
KIND_REUSE_SUCCESSOR_ROWS = "reuse_successor_rows"

MODE_GENERAL = "general"
MODE_IGNORED = "ignored"
MODE_SPLIT = "split"
MODE_ASSUMED_CONSTANT = "assumed-constant"

_LEGAL_MODES = {
    KIND_ADD_OUTCOMES: {MODE_GENERAL, MODE_IGNORED},
    KIND_SPLIT_OUTCOME: {MODE_GENERAL, MODE_SPLIT},
    KIND_ADD_VARIABLE: {MODE_GENERAL, MODE_ASSUMED_CONSTANT},
    KIND_ADD_ARC: {MODE_GENERAL, MODE_ASSUMED_CONSTANT},
    KIND_REMOVE_ARC: {MODE_GENERAL},
    KIND_REMOVE_OUTCOME: {MODE_GENERAL},
    KIND_REPLACE_CPT: {MODE_GENERAL},
    KIND_REUSE_SUCCESSOR_ROWS: {MODE_IGNORED, MODE_SPLIT},
}

_TOL = ROW_SUM_TOLERANCE


class MaintenanceError(ValueError):
    """An edit was rejected: bad reference, bad elicited input, illegal state."""


@dataclass(frozen=True)
class EditOp:
    """One structural change, with the elicited inputs that drove it."""

    kind: str
    mode: str
    node: str
    source: str | None = None  # arc source / changed parent
    labels: tuple[str, ...] = ()  # outcome labels involved in the change
    baseline: str | None = None
    renormalize: bool = False
    elicited: tuple = ()

    def __post_init__(self) -> None:
        legal = _LEGAL_MODES.get(self.kind)
        if legal is None:
            raise MaintenanceError(f"unknown edit kind {self.kind!r}")
        if self.mode not in legal:
            raise MaintenanceError(
                f"mode {self.mode!r} is not legal for {self.kind}"
            )
        object.__setattr__(self, "labels", tuple(self.labels))


@dataclass(frozen=True)
class RescaleFactors:
    """Per-configuration scale factors computed during a rescaling edit.

    For the ignored-outcome case each configuration carries one scalar (the
    probability that no new outcome occurs); for the split case each carries
    the weight vector that partitions the split outcome's mass.
    """

    case: str  # "ignored" or "split"
    per_config: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_config", tuple(self.per_config))


@dataclass(frozen=True)
class NodeAssessment:
    """Free-parameter accounting for one node in one transaction.

    A row over q outcomes costs q - 1 assessments. `baseline` is the cost of
    re-encoding the node's new table from scratch; `elicited` is what the
    edit actually required; `reused` is what carried over from the previous
    state of information.
    """

    node: str
    elicited: int
    reused: int
    baseline: int

    @property
    def ratio(self) -> float | None:
        return self.elicited / self.baseline if self.baseline else None


@dataclass(frozen=True)
class AssessmentReport:
    nodes: tuple[NodeAssessment, ...]
    notes: tuple[str, ...] = ()

    def for_node(self, node: str) -> NodeAssessment:
        for entry in self.nodes:
            if entry.node == node:
                return entry
        raise KeyError(f"no assessment entry for {node!r}")

    @property
    def total_elicited(self) -> int:
        return sum(e.elicited for e in self.nodes)

    @property
    def total_reused(self) -> int:
        return sum(e.reused for e in self.nodes)

    @property
    def total_baseline(self) -> int:
        return sum(e.baseline for e in self.nodes)


@dataclass(frozen=True)
class Transaction:
    """One applied edit: old snapshot, the operation, new snapshot, report."""

    before: Network
    op: EditOp
    after: Network
    report: AssessmentReport
    factors: RescaleFactors | None = None


def bump_label(label: str) -> str:
    """Advance a version label's numeric suffix: E -> E.1 -> E.2 -> ..."""
    base, dot, suffix = label.rpartition(".")
    if dot and suffix.isdigit():
        return f"{base}.{int(suffix) + 1}"
    return f"{label}.1"


# ---------------------------------------------------------------------------
# shared checks and builders
# ---------------------------------------------------------------------------


def _require_variable(net: Network, node: str) -> Variable:
    if not net.has_variable(node):
        raise MaintenanceError(f"unknown variable {node!r}")
    return net.variable(node)


def _require_not_stale(net: Network, nodes: Sequence[str]) -> None:
    pending = [n for n in nodes if n in net.stale]
    if pending:
        raise MaintenanceError(
            "nodes pending re-encoding must be completed first: "
            + ", ".join(pending)
        )


def _check_row(row: Sequence[float], width: int, what: str) -> tuple[float, ...]:
    row = tuple(float(x) for x in row)
    if len(row) != width:
        raise MaintenanceError(f"{what}: expected {width} entries, got {len(row)}")
    for x in row:
        if not 0.0 <= x <= 1.0:
            raise MaintenanceError(f"{what}: entry {x!r} outside [0, 1]")
    total = math.fsum(row)
    if abs(total - 1.0) > _TOL:
        raise MaintenanceError(f"{what}: entries sum to {total!r}, expected 1")
    return row


def _rows_payload(
    rows: Sequence[Sequence[float]], count: int, width: int, what: str
) -> tuple[tuple[float, ...], ...]:
    rows = list(rows)
    if len(rows) != count:
        raise MaintenanceError(f"{what}: expected {count} rows, got {len(rows)}")
    return tuple(_check_row(r, width, f"{what}, row {j}") for j, r in enumerate(rows))


def _finish(
    before: Network,
    op: EditOp,
    *,
    variables: tuple[Variable, ...] | None = None,
    parents: Mapping[str, tuple[str, ...]] | None = None,
    cpts: Mapping[str, Cpt] | None = None,
    stale: Mapping[str, StaleParent] | None = None,
    entries: Mapping[str, tuple[int, int, int]],
    factors: RescaleFactors | None = None,
    notes: Sequence[str] = (),
) -> Transaction:
    after = replace(
        before,
        version_label=bump_label(before.version_label),
        variables=before.variables if variables is None else variables,
        parents=before.parents if parents is None else parents,
        cpts=before.cpts if cpts is None else cpts,
        stale=dict(before.stale) if stale is None else stale,
    )
    report = validate_network(after)
    if not report.ok:
        raise MaintenanceError(
            "edit would produce an invalid network: " + report.findings[0].message
        )
    assessments = tuple(
        NodeAssessment(v.id, *entries.get(v.id, (0, 0, 0))) for v in after.variables
    )
    return Transaction(
        before, op, after, AssessmentReport(assessments, tuple(notes)), factors
    )


def _mark_children_stale(
    net: Network, node: str, old_outcomes: tuple[str, ...], cause: str
) -> dict[str, StaleParent]:
    stale = dict(net.stale)
    for child in net.children(node):
        stale[child] = StaleParent(node, old_outcomes, cause)
    return stale


# ---------------------------------------------------------------------------
# outcome-space growth
# ---------------------------------------------------------------------------


def add_outcomes_ignored(
    net: Network,
    node: str,
    new_outcomes: Sequence[str],
    new_probs: Sequence[Sequence[float]],
) -> Transaction:
    """Append newly recognized outcomes to `node`, reusing the old rows.

    `new_probs` supplies, for each parent configuration in row order, the
    probabilities of the new outcomes. Each old row is scaled by the leftover
    mass (one minus the new outcomes' total) and the new entries appended, so
    only the new outcomes' probabilities are elicited.
    """
    var = _require_variable(net, node)
    _require_not_stale(net, (node, *net.children(node)))
    labels = tuple(new_outcomes)
    if len(set(labels)) != len(labels):
        raise MaintenanceError("duplicate new outcome labels")
    collisions = [l for l in labels if l in var.outcomes]
    if collisions:
        raise MaintenanceError(
            f"outcome labels already exist on {node}: {', '.join(collisions)}"
        )
    rows = net.cpt(node).rows
    blocks = [tuple(float(x) for x in b) for b in new_probs]
    if len(blocks) != len(rows):
        raise MaintenanceError(
            f"expected {len(rows)} new-outcome blocks for {node}, got {len(blocks)}"
        )
    k = len(labels)
    lambdas: list[float] = []
    new_rows: list[tuple[float, ...]] = []
    for j, (row, block) in enumerate(zip(rows, blocks)):
        if len(block) != k:
            raise MaintenanceError(
                f"config {j} of {node}: expected {k} new-outcome probabilities, "
                f"got {len(block)}"
            )
        for x in block:
            if not 0.0 <= x <= 1.0:
                raise MaintenanceError(
                    f"config {j} of {node}: entry {x!r} outside [0, 1]"
                )
        mass = math.fsum(block)
        if mass > 1.0 + _TOL:
            raise MaintenanceError(
                f"config {j} of {node}: new-outcome mass {mass!r} exceeds 1"
            )
        lam = max(0.0, 1.0 - mass)
        lambdas.append(lam)
        if k == 0:
            new_rows.append(row)
        else:
            new_rows.append(tuple(lam * x for x in row) + block)

    variables = tuple(
        replace(v, outcomes=v.outcomes + labels) if v.id == node else v
        for v in net.variables
    )
    cpts = dict(net.cpts)
    cpts[node] = Cpt(node, net.parents_of(node), tuple(new_rows))
    stale = (
        _mark_children_stale(net, node, var.outcomes, KIND_ADD_OUTCOMES)
        if k
        else dict(net.stale)
    )
    m, rows_n = len(var.outcomes), len(rows)
    entries = (
        {node: (k * rows_n, (m - 1) * rows_n, (m + k - 1) * rows_n)} if k else {}
    )
    op = EditOp(
        KIND_ADD_OUTCOMES,
        MODE_IGNORED,
        node,
        labels=labels,
        elicited=tuple(blocks),
    )
    return _finish(
        net,
        op,
        variables=variables,
        cpts=cpts,
        stale=stale,
        entries=entries,
        factors=RescaleFactors("ignored", tuple(lambdas)),
    )


def add_outcomes_general(
    net: Network,
    node: str,
    new_outcomes: Sequence[str],
    replacement_rows: Sequence[Sequence[float]],
) -> Transaction:
    """Append outcomes with the node's whole new table supplied (no reuse)."""
    var = _require_variable(net, node)
    _require_not_stale(net, (node, *net.children(node)))
    labels = tuple(new_outcomes)
    if len(set(labels)) != len(labels):
        raise MaintenanceError("duplicate new outcome labels")
    collisions = [l for l in labels if l in var.outcomes]
    if collisions:
        raise MaintenanceError(
            f"outcome labels already exist on {node}: {', '.join(collisions)}"
        )
    m, k = len(var.outcomes), len(labels)
    rows_n = len(net.cpt(node).rows)
    payload = _rows_payload(
        replacement_rows, rows_n, m + k, f"replacement CPT for {node}"
    )
    variables = tuple(
        replace(v, outcomes=v.outcomes + labels) if v.id == node else v
        for v in net.variables
    )
    cpts = dict(net.cpts)
    cpts[node] = Cpt(node, net.parents_of(node), payload)
    stale = (
        _mark_children_stale(net, node, var.outcomes, KIND_ADD_OUTCOMES)
        if k
        else dict(net.stale)
    )
    cost = (m + k - 1) * rows_n
    entries = {node: (cost, 0, cost)} if k else {}
    op = EditOp(
        KIND_ADD_OUTCOMES, MODE_GENERAL, node, labels=labels, elicited=payload
    )
    return _finish(
        net, op, variables=variables, cpts=cpts, stale=stale, entries=entries
    )


def split_outcome(
    net: Network,
    node: str,
    split_label: str,
    parts: Sequence[str],
    values: Sequence[Sequence[float]],
    form: str = "weights",
) -> Transaction:
    """Refine one outcome of `node` into `parts`, partitioning its mass.

    `values` gives one vector per parent configuration in row order: either
    weights summing to one (``form="weights"``) or the parts' probabilities
    summing to the outcome's old probability (``form="probs"``). Every other
    entry of the table is kept bit-for-bit.
    """
    var = _require_variable(net, node)
    _require_not_stale(net, (node, *net.children(node)))
    if form not in ("weights", "probs"):
        raise MaintenanceError(f"unknown split input form {form!r}")
    if split_label not in var.outcomes:
        raise MaintenanceError(f"unknown outcome {split_label!r} of {node}")
    s = var.outcomes.index(split_label)
    part_labels = tuple(parts)
    if not part_labels:
        raise MaintenanceError("a split needs at least one part")
    if len(set(part_labels)) != len(part_labels):
        raise MaintenanceError("duplicate part labels")
    collisions = [l for l in part_labels if l in var.outcomes]
    if collisions:
        raise MaintenanceError(
            f"part labels already exist on {node}: {', '.join(collisions)}"
        )
    rows = net.cpt(node).rows
    vectors = [tuple(float(x) for x in v) for v in values]
    if len(vectors) != len(rows):
        raise MaintenanceError(
            f"expected {len(rows)} split vectors for {node}, got {len(vectors)}"
        )
    k = len(part_labels)
    weights_per_config: list[tuple[float, ...]] = []
    new_rows: list[tuple[float, ...]] = []
    for j, (row, vec) in enumerate(zip(rows, vectors)):
        if len(vec) != k:
            raise MaintenanceError(
                f"config {j} of {node}: expected {k} split values, got {len(vec)}"
            )
        old_value = row[s]
        if form == "weights":
            for w in vec:
                if not 0.0 <= w <= 1.0:
                    raise MaintenanceError(
                        f"config {j} of {node}: weight {w!r} outside [0, 1]"
                    )
            total = math.fsum(vec)
            if abs(total - 1.0) > _TOL:
                raise MaintenanceError(
                    f"config {j} of {node}: weights sum to {total!r}, expected 1"
                )
            weights = vec
        else:
            for x in vec:
                if x < 0.0:
                    raise MaintenanceError(
                        f"config {j} of {node}: probability {x!r} is negative"
                    )
            total = math.fsum(vec)
            if abs(total - old_value) > _TOL:
                raise MaintenanceError(
                    f"config {j} of {node}: part probabilities sum to {total!r}, "
                    f"expected the outcome's old probability {old_value!r}"
                )
            if old_value == 0.0:
                weights = tuple(1.0 / k for _ in range(k))
            else:
                weights = tuple(min(1.0, x / old_value) for x in vec)
        weights_per_config.append(weights)
        part_values = tuple(w * old_value for w in weights)
        new_rows.append(row[:s] + part_values + row[s + 1:])

    new_outcome_order = var.outcomes[:s] + part_labels + var.outcomes[s + 1:]
    variables = tuple(
        replace(v, outcomes=new_outcome_order) if v.id == node else v
        for v in net.variables
    )
    cpts = dict(net.cpts)
    cpts[node] = Cpt(node, net.parents_of(node), tuple(new_rows))
    stale = _mark_children_stale(net, node, var.outcomes, KIND_SPLIT_OUTCOME)
    m, rows_n = len(var.outcomes), len(rows)
    baseline = (m + k - 2) * rows_n
    entries = {node: ((k - 1) * rows_n, baseline - (k - 1) * rows_n, baseline)}
    op = EditOp(
        KIND_SPLIT_OUTCOME,
        MODE_SPLIT,
        node,
        labels=(split_label,) + part_labels,
        elicited=tuple(weights_per_config),
    )
    return _finish(
        net,
        op,
        variables=variables,
        cpts=cpts,
        stale=stale,
        entries=entries,
        factors=RescaleFactors("split", tuple(weights_per_config)),
    )


def split_outcome_general(
    net: Network,
    node: str,
    split_label: str,
    parts: Sequence[str],
    replacement_rows: Sequence[Sequence[float]],
) -> Transaction:
    """Refine an outcome but re-elicit the node's whole table (no reuse)."""
    var = _require_variable(net, node)
    _require_not_stale(net, (node, *net.children(node)))
    if split_label not in var.outcomes:
        raise MaintenanceError(f"unknown outcome {split_label!r} of {node}")
    s = var.outcomes.index(split_label)
    part_labels = tuple(parts)
    if not part_labels:
        raise MaintenanceError("a split needs at least one part")
    if len(set(part_labels)) != len(part_labels):
        raise MaintenanceError("duplicate part labels")
    collisions = [l for l in part_labels if l in var.outcomes]
    if collisions:
        raise MaintenanceError(
            f"part labels already exist on {node}: {', '.join(collisions)}"
        )
    m, k = len(var.outcomes), len(part_labels)
    rows_n = len(net.cpt(node).rows)
    payload = _rows_payload(
        replacement_rows, rows_n, m + k - 1, f"replacement CPT for {node}"
    )
    new_outcome_order = var.outcomes[:s] + part_labels + var.outcomes[s + 1:]
    variables = tuple(
        replace(v, outcomes=new_outcome_order) if v.id == node else v
        for v in net.variables
    )
    cpts = dict(net.cpts)
    cpts[node] = Cpt(node, net.parents_of(node), payload)
    stale = _mark_children_stale(net, node, var.outcomes, KIND_SPLIT_OUTCOME)
    cost = (m + k - 2) * rows_n
    entries = {node: (cost, 0, cost)}
    op = EditOp(
        KIND_SPLIT_OUTCOME,
        MODE_GENERAL,
        node,
        labels=(split_label,) + part_labels,
        elicited=payload,
    )
    return _finish(
        net, op, variables=variables, cpts=cpts, stale=stale, entries=entries
    )


# ---------------------------------------------------------------------------
# successor completion after an outcome-space change
# ---------------------------------------------------------------------------


def pending_label_split(
    net: Network, successor: str
) -> tuple[list[str], dict[str, int]]:
    """For a node pending re-encoding, classify the changed parent's current
    outcomes: returns (labels needing elicited rows, labels whose rows are
    inherited mapped to their old outcome index).

    Old labels still present are always inherited. A split into a single
    part is a pure relabel, so the part inherits the vanished outcome's rows.
    """
    info = net.stale[successor]
    parent_var = net.variable(info.parent)
    old_index = {l: i for i, l in enumerate(info.old_outcomes)}
    inherited = {l: old_index[l] for l in parent_var.outcomes if l in old_index}
    new_labels = [l for l in parent_var.outcomes if l not in old_index]
    if info.cause == KIND_SPLIT_OUTCOME:
        vanished = [l for l in info.old_outcomes if l not in set(parent_var.outcomes)]
        if (
            len(new_labels) == 1
            and len(vanished) == 1
            and len(parent_var.outcomes) == len(info.old_outcomes)
        ):
            inherited[new_labels[0]] = old_index[vanished[0]]
            new_labels = []
    return new_labels, inherited


def _reuse_successor_rows(
    net: Network,
    successor: str,
    changed_parent: str,
    rows_by_label: Mapping[str, Sequence[Sequence[float]]],
    expected_cause: str,
    mode: str,
) -> Transaction:
    _require_variable(net, successor)
    _require_variable(net, changed_parent)
    if changed_parent not in net.parents_of(successor):
        raise MaintenanceError(f"{changed_parent} is not a parent of {successor}")
    if successor not in net.stale:
        if rows_by_label:
            raise MaintenanceError(f"{successor} has no pending re-encoding")
        op = EditOp(
            KIND_REUSE_SUCCESSOR_ROWS, mode, successor, source=changed_parent
        )
        return _finish(net, op, entries={})  # degenerate: nothing changed

    info = net.stale[successor]
    if info.parent != changed_parent:
        raise MaintenanceError(
            f"pending change on {successor} concerns parent {info.parent}, "
            f"not {changed_parent}"
        )
    if info.cause != expected_cause:
        raise MaintenanceError(
            f"pending change on {successor} came from {info.cause}; "
            "use the matching reuse operation"
        )

    parent_var = net.variable(changed_parent)
    parent_pos = net.parents_of(successor).index(changed_parent)
    cur_radices = net.radices(successor)
    old_radices = net.table_radices(successor)
    other_radices = cur_radices[:parent_pos] + cur_radices[parent_pos + 1:]
    rows_other = math.prod(other_radices)
    width = len(net.outcomes(successor))
    old_rows = net.cpt(successor).rows

    needed, inherited = pending_label_split(net, successor)
    if set(rows_by_label) != set(needed):
        raise MaintenanceError(
            f"{successor}: elicited rows required for outcomes "
            f"({', '.join(needed)}) of {changed_parent}, "
            f"got ({', '.join(sorted(rows_by_label))})"
        )
    validated = {
        label: _rows_payload(
            rows_by_label[label],
            rows_other,
            width,
            f"rows for {successor} given {changed_parent}={label}",
        )
        for label in needed
    }

    new_rows: list[tuple[float, ...]] = []
    for config in itertools.product(*(range(r) for r in cur_radices)):
        label = parent_var.outcomes[config[parent_pos]]
        if label in inherited:
            old_cfg = (
                config[:parent_pos] + (inherited[label],) + config[parent_pos + 1:]
            )
            new_rows.append(old_rows[config_index(old_cfg, old_radices)])
        else:
            other_cfg = config[:parent_pos] + config[parent_pos + 1:]
            new_rows.append(validated[label][config_index(other_cfg, other_radices)])

    cpts = dict(net.cpts)
    cpts[successor] = Cpt(successor, net.parents_of(successor), tuple(new_rows))
    stale = dict(net.stale)
    del stale[successor]
    baseline = (width - 1) * len(new_rows)
    elicited = (width - 1) * len(needed) * rows_other
    entries = {successor: (elicited, baseline - elicited, baseline)}
    op = EditOp(
        KIND_REUSE_SUCCESSOR_ROWS,
        mode,
        successor,
        source=changed_parent,
        labels=tuple(needed),
        elicited=tuple((label, validated[label]) for label in needed),
    )
    return _finish(net, op, cpts=cpts, stale=stale, entries=entries)


def reuse_successor_rows_ignored(
    net: Network,
    successor: str,
    changed_parent: str,
    rows_for_new_outcomes: Mapping[str, Sequence[Sequence[float]]],
) -> Transaction:
    """Complete a successor after its parent gained outcomes: rows conditioned
    on the parent's old outcomes are copied verbatim from the previous state;
    only rows conditioned on the new outcomes are taken from elicitation.

    `rows_for_new_outcomes` maps each new outcome label to that outcome's
    rows, one per configuration of the successor's other parents in row
    order.
    """
    return _reuse_successor_rows(
        net,
        successor,
        changed_parent,
        rows_for_new_outcomes,
        KIND_ADD_OUTCOMES,
        MODE_IGNORED,
    )


def reuse_successor_rows_split(
    net: Network,
    successor: str,
    changed_parent: str,
    rows_for_parts: Mapping[str, Sequence[Sequence[float]]],
) -> Transaction:
    """Complete a successor after its parent's outcome was split: rows for the
    untouched outcomes are copied verbatim; rows for the parts are elicited.
    A single-part split is a relabel and needs no rows at all."""
    return _reuse_successor_rows(
        net, successor, changed_parent, rows_for_parts, KIND_SPLIT_OUTCOME, MODE_SPLIT
    )


# ---------------------------------------------------------------------------
# conditioning changes
# ---------------------------------------------------------------------------


def _appended_parent_table(
    old_rows: tuple[tuple[float, ...], ...],
    src_outcomes: tuple[str, ...],
    width: int,
    baseline: str | None,
    rows_by_label: Mapping[str, Sequence[Sequence[float]]],
    what: str,
) -> tuple[tuple[tuple[float, ...], ...], dict[str, tuple[tuple[float, ...], ...]]]:
    """Build a table for a node that appends a new last parent.

    With a baseline, that outcome's block is the old table verbatim and every
    other outcome's block comes from `rows_by_label`. Returns the new rows
    plus the validated elicited blocks.
    """
    rows_other = len(old_rows)
    needed = [l for l in src_outcomes if l != baseline]
    if set(rows_by_label) != set(needed):
        raise MaintenanceError(
            f"{what}: elicited rows required for outcomes ({', '.join(needed)}), "
            f"got ({', '.join(sorted(rows_by_label))})"
        )
    validated = {
        label: _rows_payload(
            rows_by_label[label], rows_other, width, f"{what}, outcome {label}"
        )
        for label in needed
    }
    new_rows: list[tuple[float, ...]] = []
    for other in range(rows_other):
        for label in src_outcomes:
            if label == baseline:
                new_rows.append(old_rows[other])
            else:
                new_rows.append(validated[label][other])
    return tuple(new_rows), validated


def add_arc_assumed_constant(
    net: Network,
    src: str,
    dst: str,
    baseline: str,
    rows_for_other_outcomes: Mapping[str, Sequence[Sequence[float]]],
) -> Transaction:
    """Condition `dst` on `src`, treating `src` = `baseline` as the outcome
    that reproduces the previous state of knowledge: for every configuration
    of the other parents, the baseline-conditioned row is the old row
    verbatim; rows for the remaining outcomes are elicited."""
    src_var = _require_variable(net, src)
    _require_variable(net, dst)
    _require_not_stale(net, (src, dst))
    if src == dst:
        raise MaintenanceError(f"arc {src}->{dst} would create cycle {src}")
    if src in net.parents_of(dst):
        raise MaintenanceError(f"arc {src}->{dst} already exists")
    if would_create_cycle(net, src, dst):
        raise MaintenanceError(f"arc {src}->{dst} would create a cycle")
    if baseline not in src_var.outcomes:
        raise MaintenanceError(f"baseline {baseline!r} is not an outcome of {src}")

    width = len(net.outcomes(dst))
    old_rows = net.cpt(dst).rows
    new_rows, validated = _appended_parent_table(
        old_rows,
        src_var.outcomes,
        width,
        baseline,
        rows_for_other_outcomes,
        f"rows for {dst} given {src}",
    )
    parents = dict(net.parents)
    parents[dst] = net.parents_of(dst) + (src,)
    cpts = dict(net.cpts)
    cpts[dst] = Cpt(dst, parents[dst], new_rows)
    rows_other = len(old_rows)
    baseline_cost = (width - 1) * len(new_rows)
    elicited = (width - 1) * len(validated) * rows_other
    entries = {dst: (elicited, baseline_cost - elicited, baseline_cost)}
    op = EditOp(
        KIND_ADD_ARC,
        MODE_ASSUMED_CONSTANT,
        dst,
        source=src,
        baseline=baseline,
        elicited=tuple(sorted(validated.items())),
    )
    return _finish(net, op, parents=parents, cpts=cpts, entries=entries)


def add_arc_general(
    net: Network,
    src: str,
    dst: str,
    replacement_rows: Sequence[Sequence[float]],
) -> Transaction:
    """Condition `dst` on `src` with its whole new table supplied.

    `src` becomes the last parent, so its outcome varies fastest in the new
    row order."""
    src_var = _require_variable(net, src)
    _require_variable(net, dst)
    _require_not_stale(net, (src, dst))
    if src == dst:
        raise MaintenanceError(f"arc {src}->{dst} would create cycle {src}")
    if src in net.parents_of(dst):
        raise MaintenanceError(f"arc {src}->{dst} already exists")
    if would_create_cycle(net, src, dst):
        raise MaintenanceError(f"arc {src}->{dst} would create a cycle")
    width = len(net.outcomes(dst))
    count = len(net.cpt(dst).rows) * len(src_var.outcomes)
    payload = _rows_payload(
        replacement_rows, count, width, f"replacement CPT for {dst}"
    )
    parents = dict(net.parents)
    parents[dst] = net.parents_of(dst) + (src,)
    cpts = dict(net.cpts)
    cpts[dst] = Cpt(dst, parents[dst], payload)
    cost = (width - 1) * count
    entries = {dst: (cost, 0, cost)}
    op = EditOp(KIND_ADD_ARC, MODE_GENERAL, dst, source=src, elicited=payload)
    return _finish(net, op, parents=parents, cpts=cpts, entries=entries)


def add_variable(
    net: Network,
    variable: Variable,
    parents: Sequence[str],
    cpt_rows: Sequence[Sequence[float]],
    *,
    mode: str = MODE_GENERAL,
    baseline: str | None = None,
    successors: Mapping[str, object] | None = None,
) -> Transaction:
    """Introduce a new variable; its own table is always fully elicited.

    `successors` names existing nodes that gain the variable as their new
    last parent. In assumed-constant mode each maps to
    ``{outcome label: rows}`` for the non-baseline outcomes (the baseline
    block reuses the old table verbatim); in general mode each maps to the
    full replacement row list.
    """
    if net.has_variable(variable.id):
        raise MaintenanceError(f"variable id {variable.id!r} already exists")
    if not variable.outcomes:
        raise MaintenanceError("a variable needs at least one outcome")
    if len(set(variable.outcomes)) != len(variable.outcomes):
        raise MaintenanceError("duplicate outcome labels")
    parent_ids = tuple(parents)
    for p in parent_ids:
        _require_variable(net, p)
    if len(set(parent_ids)) != len(parent_ids):
        raise MaintenanceError("duplicate parents")
    successors = dict(successors or {})
    for s in successors:
        _require_variable(net, s)
    _require_not_stale(net, tuple(successors))
    if mode not in (MODE_GENERAL, MODE_ASSUMED_CONSTANT):
        raise MaintenanceError(f"mode {mode!r} is not legal for add_variable")
    if mode == MODE_ASSUMED_CONSTANT:
        if baseline is None:
            raise MaintenanceError("assumed-constant mode needs a baseline outcome")
        if baseline not in variable.outcomes:
            raise MaintenanceError(
                f"baseline {baseline!r} is not an outcome of {variable.id}"
            )
    for s in successors:
        if s in parent_ids:
            raise MaintenanceError(
                f"{s} cannot be both parent and successor of {variable.id}"
            )
        for p in parent_ids:
            if has_path(net, s, p):
                raise MaintenanceError(
                    f"successor {s} reaches parent {p}; adding {variable.id} "
                    "would create a cycle"
                )

    width = len(variable.outcomes)
    own_count = math.prod(len(net.outcomes(p)) for p in parent_ids)
    own_rows = _rows_payload(
        cpt_rows, own_count, width, f"CPT for new variable {variable.id}"
    )

    new_parents = dict(net.parents)
    new_parents[variable.id] = parent_ids
    cpts = dict(net.cpts)
    cpts[variable.id] = Cpt(variable.id, parent_ids, own_rows)
    entries: dict[str, tuple[int, int, int]] = {
        variable.id: ((width - 1) * own_count, 0, (width - 1) * own_count)
    }

    for s, payload in successors.items():
        s_width = len(net.outcomes(s))
        old_rows = net.cpt(s).rows
        if mode == MODE_ASSUMED_CONSTANT:
            if not isinstance(payload, Mapping):
                raise MaintenanceError(
                    f"successor {s}: expected rows keyed by outcome label"
                )
            new_rows, validated = _appended_parent_table(
                old_rows,
                variable.outcomes,
                s_width,
                baseline,
                payload,
                f"rows for {s} given {variable.id}",
            )
            baseline_cost = (s_width - 1) * len(new_rows)
            elicited = (s_width - 1) * len(validated) * len(old_rows)
        else:
            count = len(old_rows) * width
            new_rows = _rows_payload(
                payload, count, s_width, f"replacement CPT for {s}"
            )
            baseline_cost = (s_width - 1) * count
            elicited = baseline_cost
        new_parents[s] = net.parents_of(s) + (variable.id,)
        cpts[s] = Cpt(s, new_parents[s], new_rows)
        entries[s] = (elicited, baseline_cost - elicited, baseline_cost)

    variables = net.variables + (variable,)
    op = EditOp(
        KIND_ADD_VARIABLE,
        mode,
        variable.id,
        labels=variable.outcomes,
        baseline=baseline,
        elicited=own_rows,
    )
    return _finish(
        net, op, variables=variables, parents=new_parents, cpts=cpts, entries=entries
    )


# ---------------------------------------------------------------------------
# general reassessment edits (no reuse rule applies)
# ---------------------------------------------------------------------------


def replace_cpt(net: Network, node: str, rows: Sequence[Sequence[float]]) -> Transaction:
    """Swap one node's table for a fully elicited one.

    On a node pending re-encoding, the rows must fit the parents' current
    outcome spaces and the pending marker is cleared.
    """
    var = _require_variable(net, node)
    radices = net.radices(node)
    count = math.prod(radices)
    width = len(var.outcomes)
    payload = _rows_payload(rows, count, width, f"replacement CPT for {node}")
    cpts = dict(net.cpts)
    cpts[node] = Cpt(node, net.parents_of(node), payload)
    stale = dict(net.stale)
    stale.pop(node, None)
    cost = (width - 1) * count
    op = EditOp(KIND_REPLACE_CPT, MODE_GENERAL, node, elicited=payload)
    return _finish(
        net, op, cpts=cpts, stale=stale, entries={node: (cost, 0, cost)}
    )


def remove_arc(
    net: Network, src: str, dst: str, replacement_rows: Sequence[Sequence[float]]
) -> Transaction:
    """Drop arc src -> dst; `dst` gets a fully elicited replacement table."""
    _require_variable(net, src)
    _require_variable(net, dst)
    _require_not_stale(net, (dst,))
    if src not in net.parents_of(dst):
        raise MaintenanceError(f"no arc {src}->{dst}")
    new_parent_order = tuple(p for p in net.parents_of(dst) if p != src)
    count = math.prod(len(net.outcomes(p)) for p in new_parent_order)
    width = len(net.outcomes(dst))
    payload = _rows_payload(
        replacement_rows, count, width, f"replacement CPT for {dst}"
    )
    parents = dict(net.parents)
    parents[dst] = new_parent_order
    cpts = dict(net.cpts)
    cpts[dst] = Cpt(dst, new_parent_order, payload)
    cost = (width - 1) * count
    op = EditOp(KIND_REMOVE_ARC, MODE_GENERAL, dst, source=src, elicited=payload)
    return _finish(net, op, parents=parents, cpts=cpts, entries={dst: (cost, 0, cost)})


def remove_outcome(
    net: Network,
    node: str,
    outcome: str,
    *,
    replacement_rows: Sequence[Sequence[float]] | None = None,
    successor_replacements: Mapping[str, Sequence[Sequence[float]]] | None = None,
    renormalize: bool = False,
) -> Transaction:
    """Delete an outcome. General reassessment: replacement tables must be
    supplied for the node and all of its direct successors.

    With ``renormalize=True`` (a convenience outside the reuse rules, flagged
    as such in the report) the node's rows drop the outcome's column and are
    rescaled to sum to one, and successors drop the rows conditioned on the
    removed outcome verbatim; no replacements may be supplied.
    """
    var = _require_variable(net, node)
    children = net.children(node)
    _require_not_stale(net, (node, *children))
    if outcome not in var.outcomes:
        raise MaintenanceError(f"unknown outcome {outcome!r} of {node}")
    if len(var.outcomes) < 2:
        raise MaintenanceError(f"cannot remove the only outcome of {node}")
    idx = var.outcomes.index(outcome)
    m = len(var.outcomes)
    rows = net.cpt(node).rows
    notes: list[str] = []
    entries: dict[str, tuple[int, int, int]] = {}
    cpts = dict(net.cpts)

    if renormalize:
        if replacement_rows is not None or successor_replacements:
            raise MaintenanceError(
                "renormalize and replacement tables are mutually exclusive"
            )
        new_rows = []
        for j, row in enumerate(rows):
            rest = row[:idx] + row[idx + 1:]
            total = math.fsum(rest)
            if total <= 0.0:
                raise MaintenanceError(
                    f"cannot renormalize row {j} of {node}: remaining mass is 0"
                )
            new_rows.append(tuple(x / total for x in rest))
        cpts[node] = Cpt(node, net.parents_of(node), tuple(new_rows))
        node_baseline = (m - 2) * len(rows)
        entries[node] = (0, node_baseline, node_baseline)
        notes.append(
            f"NON-PAPER: rows of {node} renormalized after dropping {outcome!r}"
        )
        for s in children:
            pos = net.parents_of(s).index(node)
            radices = net.radices(s)
            kept = [
                net.cpt(s).rows[config_index(cfg, radices)]
                for cfg in itertools.product(*(range(r) for r in radices))
                if cfg[pos] != idx
            ]
            cpts[s] = Cpt(s, net.parents_of(s), tuple(kept))
            s_baseline = (len(net.outcomes(s)) - 1) * len(kept)
            entries[s] = (0, s_baseline, s_baseline)
        notes.append(
            "NON-PAPER: successor rows conditioned on the dropped outcome deleted"
        )
    else:
        if replacement_rows is None:
            raise MaintenanceError(f"replacement CPT required for {node}")
        provided = dict(successor_replacements or {})
        missing = [s for s in children if s not in provided]
        if missing:
            raise MaintenanceError(
                "replacement CPTs required for successors: " + ", ".join(missing)
            )
        unknown = [s for s in provided if s not in children]
        if unknown:
            raise MaintenanceError(
                "replacements supplied for non-successors: " + ", ".join(unknown)
            )
        payload = _rows_payload(
            replacement_rows, len(rows), m - 1, f"replacement CPT for {node}"
        )
        cpts[node] = Cpt(node, net.parents_of(node), payload)
        node_cost = (m - 2) * len(rows)
        entries[node] = (node_cost, 0, node_cost)
        for s in children:
            pos = net.parents_of(s).index(node)
            radices = list(net.radices(s))
            radices[pos] -= 1
            count = math.prod(radices)
            s_width = len(net.outcomes(s))
            s_payload = _rows_payload(
                provided[s], count, s_width, f"replacement CPT for {s}"
            )
            cpts[s] = Cpt(s, net.parents_of(s), s_payload)
            s_cost = (s_width - 1) * count
            entries[s] = (s_cost, 0, s_cost)

    variables = tuple(
        replace(v, outcomes=v.outcomes[:idx] + v.outcomes[idx + 1:])
        if v.id == node
        else v
        for v in net.variables
    )
    op = EditOp(
        KIND_REMOVE_OUTCOME,
        MODE_GENERAL,
        node,
        labels=(outcome,),
        renormalize=renormalize,
    )
    return _finish(
        net, op, variables=variables, cpts=cpts, entries=entries, notes=notes
    )
