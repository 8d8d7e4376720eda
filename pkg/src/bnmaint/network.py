"""Data model for discrete probabilistic networks.

A network is an immutable snapshot: variables with ordered outcome spaces, a
parent map describing the DAG, and one conditional probability table (CPT) per
variable. Table rows are indexed by mixed-radix encoding of the parent
outcomes, last parent varying fastest. Snapshots are never mutated in place;
edits produce new snapshots (see :mod:`bnmaint.edits`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

ROW_SUM_TOLERANCE = 1e-9

# One outcome index per parent, in parent order.
ParentConfig = tuple[int, ...]


def _as_float_rows(rows: Iterable[Iterable[float]]) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(float(x) for x in row) for row in rows)


@dataclass(frozen=True)
class Variable:
    """A chance variable. Outcome order is canonical for every row that
    conditions on this variable or describes its distribution."""

    id: str
    name: str
    outcomes: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "outcomes", tuple(self.outcomes))


@dataclass(frozen=True)
class Cpt:
    """Conditional probability table: one distribution row per parent
    configuration, rows ordered by :func:`config_index`."""

    node: str
    parent_order: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parent_order", tuple(self.parent_order))
        object.__setattr__(self, "rows", _as_float_rows(self.rows))


@dataclass(frozen=True)
class StaleParent:
    """Marks a node whose table still conditions on `parent`'s previous
    outcome space. The old table is kept verbatim so its rows can be reused
    when the node is re-encoded."""

    parent: str
    old_outcomes: tuple[str, ...]
    cause: str  # "add_outcomes" or "split_outcome"

    def __post_init__(self) -> None:
        object.__setattr__(self, "old_outcomes", tuple(self.old_outcomes))


@dataclass(frozen=True)
class Network:
    """Immutable snapshot of a network under one state of information.

    `version_label` names the snapshot's lineage; edits derive the next label
    by appending/advancing a numeric suffix. `stale` records nodes whose
    tables are pending re-encoding after a parent's outcome space changed.
    """

    version_label: str
    variables: tuple[Variable, ...]
    parents: Mapping[str, tuple[str, ...]]
    cpts: Mapping[str, Cpt]
    stale: Mapping[str, StaleParent] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(
            self, "parents", {k: tuple(v) for k, v in self.parents.items()}
        )
        object.__setattr__(self, "cpts", dict(self.cpts))
        object.__setattr__(self, "stale", dict(self.stale))

    @cached_property
    def _by_id(self) -> dict[str, Variable]:
        # First declaration wins; duplicates are surfaced by validate_network.
        out: dict[str, Variable] = {}
        for v in self.variables:
            out.setdefault(v.id, v)
        return out

    def ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables)

    def has_variable(self, node: str) -> bool:
        return node in self._by_id

    def variable(self, node: str) -> Variable:
        try:
            return self._by_id[node]
        except KeyError:
            raise KeyError(f"unknown variable {node!r}") from None

    def outcomes(self, node: str) -> tuple[str, ...]:
        return self.variable(node).outcomes

    def parents_of(self, node: str) -> tuple[str, ...]:
        return self.parents.get(node, ())

    def children(self, node: str) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables if node in self.parents_of(v.id))

    def cpt(self, node: str) -> Cpt:
        try:
            return self.cpts[node]
        except KeyError:
            raise KeyError(f"no CPT for variable {node!r}") from None

    def radices(self, node: str) -> tuple[int, ...]:
        """Outcome counts of the node's parents, in parent order."""
        return tuple(len(self.variable(p).outcomes) for p in self.parents_of(node))

    def table_radices(self, node: str) -> tuple[int, ...]:
        """Radices the node's stored table is shaped for. For a node pending
        re-encoding this counts the changed parent at its old size."""
        info = self.stale.get(node)
        rad = []
        for p in self.parents_of(node):
            if info is not None and p == info.parent:
                rad.append(len(info.old_outcomes))
            else:
                rad.append(len(self.variable(p).outcomes))
        return tuple(rad)

    def config_count(self, node: str) -> int:
        return math.prod(self.radices(node))


def config_index(config: Sequence[int], radices: Sequence[int]) -> int:
    """Mixed-radix row index of one parent configuration.

    The last parent varies fastest, so (0, 0) < (0, 1) < ... < (1, 0) < ...
    Raises IndexError when the configuration does not fit the radices.
    """
    if len(config) != len(radices):
        raise IndexError(
            f"config {tuple(config)} does not match radices {tuple(radices)}"
        )
    index = 0
    for value, radix in zip(config, radices):
        if not 0 <= value < radix:
            raise IndexError(
                f"config {tuple(config)} out of range for radices {tuple(radices)}"
            )
        index = index * radix + value
    return index


def enumerate_configs(net: Network, node: str) -> list[ParentConfig]:
    """All parent configurations of `node` in table row order.

    A root yields exactly one empty configuration.
    """
    net.variable(node)  # raises for unknown ids
    radices = net.radices(node)
    return [tuple(c) for c in itertools.product(*(range(r) for r in radices))]


def has_path(net: Network, source: str, target: str) -> bool:
    """True when a directed path source -> ... -> target exists (or equal)."""
    if source == target:
        return True
    seen = {source}
    frontier = [source]
    while frontier:
        nxt = []
        for n in frontier:
            for c in net.children(n):
                if c == target:
                    return True
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return False


def would_create_cycle(net: Network, src: str, dst: str) -> bool:
    """True when adding arc src -> dst would close a directed cycle."""
    return has_path(net, dst, src)


@dataclass(frozen=True)
class Finding:
    node: str | None
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def ok(self) -> bool:
        return not self.findings

    def messages(self) -> list[str]:
        return [f.message for f in self.findings]


def _find_cycle(net: Network) -> list[str] | None:
    declared = {v.id for v in net.variables}
    children: dict[str, list[str]] = {v.id: [] for v in net.variables}
    for child, ps in net.parents.items():
        if child not in declared:
            continue
        for p in ps:
            if p in declared:
                children[p].append(child)
    color: dict[str, int] = {}  # 0 = in progress, 1 = done
    for start in children:
        if start in color:
            continue
        color[start] = 0
        path = [start]
        stack = [(start, iter(children[start]))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 1
                stack.pop()
                path.pop()
                continue
            if nxt not in color:
                color[nxt] = 0
                path.append(nxt)
                stack.append((nxt, iter(children[nxt])))
            elif color[nxt] == 0:
                return path[path.index(nxt):]
    return None


def structural_findings(net: Network) -> list[Finding]:
    """Shape-level problems: references, acyclicity, table dimensions.

    These are exactly the conditions under which a joint distribution cannot
    be enumerated from the network.
    """
    out: list[Finding] = []
    declared: dict[str, Variable] = {}
    for v in net.variables:
        if v.id in declared:
            out.append(Finding(v.id, f"duplicate variable id {v.id}"))
            continue
        declared[v.id] = v
        if not v.outcomes:
            out.append(Finding(v.id, f"variable {v.id} has no outcomes"))
        elif len(set(v.outcomes)) != len(v.outcomes):
            out.append(Finding(v.id, f"duplicate outcome labels on variable {v.id}"))

    for child, ps in net.parents.items():
        if child not in declared:
            out.append(Finding(child, f"parents declared for unknown variable {child}"))
            continue
        seen_parents = set()
        for p in ps:
            if p not in declared:
                out.append(Finding(child, f"unknown parent {p} of {child}"))
            elif p in seen_parents:
                out.append(Finding(child, f"duplicate parent {p} of {child}"))
            seen_parents.add(p)

    for nid, info in net.stale.items():
        if nid not in declared:
            out.append(
                Finding(nid, f"pending re-encoding recorded for unknown variable {nid}")
            )
        elif info.parent not in net.parents_of(nid):
            out.append(
                Finding(
                    nid,
                    f"pending re-encoding of {nid} references non-parent {info.parent}",
                )
            )

    cycle = _find_cycle(net)
    if cycle is not None:
        out.append(Finding(None, "cycle " + ",".join(cycle)))

    for vid, v in declared.items():
        cpt = net.cpts.get(vid)
        if cpt is None:
            out.append(Finding(vid, f"no CPT for node {vid}"))
            continue
        if cpt.node != vid:
            out.append(Finding(vid, f"CPT stored under {vid} names node {cpt.node}"))
        ps = net.parents_of(vid)
        if cpt.parent_order != ps:
            out.append(
                Finding(
                    vid,
                    f"CPT of {vid} orders parents ({','.join(cpt.parent_order)}) "
                    f"but declared parents are ({','.join(ps)})",
                )
            )
            continue
        if any(p not in declared for p in ps):
            continue  # shape unverifiable; dangling-parent finding already emitted
        expected = math.prod(net.table_radices(vid))
        if len(cpt.rows) != expected:
            out.append(
                Finding(
                    vid,
                    f"node {vid} has {len(cpt.rows)} CPT rows, expected {expected}",
                )
            )
        width = len(v.outcomes)
        for j, row in enumerate(cpt.rows):
            if len(row) != width:
                out.append(
                    Finding(
                        vid,
                        f"row {j} of node {vid} has {len(row)} entries, expected {width}",
                    )
                )

    for extra in net.cpts:
        if extra not in declared:
            out.append(Finding(extra, f"CPT for unknown variable {extra}"))
    return out


def numeric_findings(
    net: Network, tolerance: float = ROW_SUM_TOLERANCE
) -> list[Finding]:
    """Value-level problems: entry range and row normalization."""
    out: list[Finding] = []
    declared = set()
    for v in net.variables:
        if v.id in declared:
            continue
        declared.add(v.id)
        cpt = net.cpts.get(v.id)
        if cpt is None:
            continue
        for j, row in enumerate(cpt.rows):
            for x in row:
                if not 0.0 <= x <= 1.0:
                    out.append(
                        Finding(
                            v.id,
                            f"entry {x} in row {j} of node {v.id} outside [0, 1]",
                        )
                    )
            total = math.fsum(row)
            if abs(total - 1.0) > tolerance:
                out.append(Finding(v.id, f"row {j} of node {v.id} sums to {total}"))
    return out


def validate_network(
    net: Network, tolerance: float = ROW_SUM_TOLERANCE
) -> ValidationReport:
    """Check every network invariant; findings are data, not exceptions."""
    findings = structural_findings(net) + numeric_findings(net, tolerance)
    return ValidationReport(tuple(findings))
