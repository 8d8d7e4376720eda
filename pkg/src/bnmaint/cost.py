"""Assessment-count formulas, ratio curves, and transaction audits.

An "assessment" is one free probability parameter an expert must supply: a
row over q outcomes costs q - 1 of them. Counts are exact integers; ratios
are floats for reporting. The closed-form ratios below, as functions of the
old outcome count m and the number of new/added outcomes k:

=====================  ==============  =================
case                   changed node    successor
=====================  ==============  =================
ignored outcome        k/(m+k-1)       k/(m+k)
split outcome          (k-1)/(m+k-2)   k/(m+k-1)
assumed constant       1               (k-1)/k
=====================  ==============  =================

The conditioning-set factor always cancels out of the ratio. Counts take the
explicit outcome counts (radices) of the conditioning set, so heterogeneous
predecessors are handled by the product of the actual radices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .edits import (
    KIND_ADD_ARC,
    KIND_ADD_OUTCOMES,
    KIND_ADD_VARIABLE,
    KIND_REMOVE_ARC,
    KIND_REMOVE_OUTCOME,
    KIND_REPLACE_CPT,
    KIND_REUSE_SUCCESSOR_ROWS,
    KIND_SPLIT_OUTCOME,
    MODE_ASSUMED_CONSTANT,
    MODE_GENERAL,
    MODE_IGNORED,
    MODE_SPLIT,
    AssessmentReport,
    NodeAssessment,
    Transaction,
    pending_label_split,
)

CASE_IGNORED = "ignored"
CASE_SPLIT = "split"
CASE_ASSUMED_CONSTANT = "assumed-constant"
ROLE_CHANGED = "changed"
ROLE_SUCCESSOR = "successor"

CASES = (CASE_IGNORED, CASE_SPLIT, CASE_ASSUMED_CONSTANT)
ROLES = (ROLE_CHANGED, ROLE_SUCCESSOR)


@dataclass(frozen=True)
class CostQuery:
    """Parameters of one counting question.

    m: outcome count before the change; k: outcomes added (or, for the
    assumed-constant case, the added variable's outcome count); p: the
    successor's outcome count (successor role only); radices: outcome counts
    of the relevant conditioning set (the changed node's own predecessors,
    or the successor's predecessors other than the changed one).
    """

    case: str
    role: str
    m: int = 1
    k: int = 1
    p: int = 2
    radices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "radices", tuple(self.radices))


@dataclass(frozen=True)
class CostResult:
    general: int
    special: int
    ratio: float | None


def _validate_query(q: CostQuery) -> None:
    if q.case not in CASES:
        raise ValueError(f"unknown case {q.case!r}")
    if q.role not in ROLES:
        raise ValueError(f"unknown role {q.role!r}")
    if q.m < 1:
        raise ValueError("m must be >= 1")
    if q.k < 1:
        raise ValueError("k must be >= 1")
    if q.role == ROLE_SUCCESSOR and q.p < 2:
        raise ValueError("successor role needs p >= 2")
    if any(r < 1 for r in q.radices):
        raise ValueError("radices entries must be >= 1")


def assessment_cost(q: CostQuery) -> CostResult:
    """Exact free-parameter counts for the general case and the special case.

    For the changed node under the assumed-constant case there is no saving:
    the added variable's own distribution is always fully elicited, so
    general = special and the ratio is 1.
    """
    _validate_query(q)
    scale = math.prod(q.radices)
    m, k, p = q.m, q.k, q.p
    if q.case == CASE_IGNORED:
        if q.role == ROLE_CHANGED:
            general, special = (m + k - 1) * scale, k * scale
        else:
            general = (m + k) * (p - 1) * scale
            special = k * (p - 1) * scale
    elif q.case == CASE_SPLIT:
        if q.role == ROLE_CHANGED:
            general, special = (m + k - 2) * scale, (k - 1) * scale
        else:
            general = (m + k - 1) * (p - 1) * scale
            special = k * (p - 1) * scale
    else:  # assumed constant
        if q.role == ROLE_CHANGED:
            count = (k - 1) * scale
            return CostResult(count, count, 1.0)
        general = k * (p - 1) * scale
        special = (k - 1) * (p - 1) * scale
    ratio = special / general if general > 0 else None
    return CostResult(general, special, ratio)


def curve_ratio(case: str, role: str, m: int, k: int) -> float | None:
    """Closed-form special/general ratio; None where both counts are zero."""
    if case == CASE_IGNORED:
        return k / (m + k - 1) if role == ROLE_CHANGED else k / (m + k)
    if case == CASE_SPLIT:
        if role == ROLE_CHANGED:
            return None if m + k == 2 else (k - 1) / (m + k - 2)
        return k / (m + k - 1)
    if case == CASE_ASSUMED_CONSTANT:
        return 1.0 if role == ROLE_CHANGED else (k - 1) / k
    raise ValueError(f"unknown case {case!r}")


@dataclass(frozen=True)
class CurvePoint:
    m: int
    k: int
    ratio: float | None


def ratio_curves(
    case: str, role: str, m_values: Sequence[int], k_values: Sequence[int]
) -> tuple[CurvePoint, ...]:
    """The ratio surface over a (m, k) grid, in deterministic (m, k) order."""
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    if role not in ROLES:
        raise ValueError(f"unknown role {role!r}")
    ms, ks = list(m_values), list(k_values)
    if not ms or not ks:
        raise ValueError("m and k ranges must be non-empty")
    if any(v < 1 for v in ms + ks):
        raise ValueError("m and k values must be >= 1")
    return tuple(
        CurvePoint(m, k, curve_ratio(case, role, m, k)) for m in ms for k in ks
    )


def curves_csv(case: str, role: str, points: Iterable[CurvePoint]) -> str:
    lines = ["case,role,m,k,ratio"]
    for pt in points:
        ratio = "" if pt.ratio is None else f"{pt.ratio}"
        lines.append(f"{case},{role},{pt.m},{pt.k},{ratio}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# transaction audit
# ---------------------------------------------------------------------------


def audit_transaction(t: Transaction) -> AssessmentReport:
    """Recount a transaction's elicited/reused cells from its concrete
    before/after tables, independent of the counts the edit recorded.

    On homogeneous conditioning sets the counts reduce to the closed-form
    formulas; in general they use the product of the actual radices.
    """
    before, after, op = t.before, t.after, t.op
    entries: dict[str, tuple[int, int, int]] = {}
    notes: list[str] = []

    def node_free_params(node: str) -> int:
        return (len(after.outcomes(node)) - 1) * len(after.cpt(node).rows)

    if op.kind == KIND_ADD_OUTCOMES:
        m = len(before.outcomes(op.node))
        k = len(after.outcomes(op.node)) - m
        rows = len(after.cpt(op.node).rows)
        if k > 0:
            baseline = (m + k - 1) * rows
            elicited = k * rows if op.mode == MODE_IGNORED else baseline
            entries[op.node] = (elicited, baseline - elicited, baseline)
    elif op.kind == KIND_SPLIT_OUTCOME:
        m = len(before.outcomes(op.node))
        k = len(after.outcomes(op.node)) - m + 1
        rows = len(after.cpt(op.node).rows)
        baseline = (m + k - 2) * rows
        elicited = (k - 1) * rows if op.mode == MODE_SPLIT else baseline
        entries[op.node] = (elicited, baseline - elicited, baseline)
    elif op.kind == KIND_REUSE_SUCCESSOR_ROWS:
        if op.node in before.stale:
            parent_width = len(after.outcomes(op.source))
            rows_new = len(after.cpt(op.node).rows)
            rows_other = rows_new // parent_width
            needed, _ = pending_label_split(before, op.node)
            p = len(after.outcomes(op.node))
            baseline = (p - 1) * rows_new
            elicited = (p - 1) * len(needed) * rows_other
            entries[op.node] = (elicited, baseline - elicited, baseline)
    elif op.kind == KIND_ADD_ARC:
        src_width = len(after.outcomes(op.source))
        rows_new = len(after.cpt(op.node).rows)
        rows_other = rows_new // src_width
        p = len(after.outcomes(op.node))
        baseline = (p - 1) * rows_new
        if op.mode == MODE_ASSUMED_CONSTANT:
            elicited = (p - 1) * (src_width - 1) * rows_other
        else:
            elicited = baseline
        entries[op.node] = (elicited, baseline - elicited, baseline)
    elif op.kind == KIND_ADD_VARIABLE:
        own = node_free_params(op.node)
        entries[op.node] = (own, 0, own)
        width = len(after.outcomes(op.node))
        for s in after.ids():
            if s == op.node:
                continue
            if op.node in after.parents_of(s) and op.node not in before.parents_of(s):
                rows_new = len(after.cpt(s).rows)
                rows_other = rows_new // width
                p = len(after.outcomes(s))
                baseline = (p - 1) * rows_new
                if op.mode == MODE_ASSUMED_CONSTANT:
                    elicited = (p - 1) * (width - 1) * rows_other
                else:
                    elicited = baseline
                entries[s] = (elicited, baseline - elicited, baseline)
    elif op.kind in (KIND_REPLACE_CPT, KIND_REMOVE_ARC):
        cost = node_free_params(op.node)
        entries[op.node] = (cost, 0, cost)
    elif op.kind == KIND_REMOVE_OUTCOME:
        cost = node_free_params(op.node)
        if op.renormalize:
            entries[op.node] = (0, cost, cost)
            notes.append(
                f"NON-PAPER: rows of {op.node} renormalized after dropping "
                f"{op.labels[0]!r}"
            )
        else:
            entries[op.node] = (cost, 0, cost)
        for s in before.children(op.node):
            s_cost = node_free_params(s)
            entries[s] = (0, s_cost, s_cost) if op.renormalize else (s_cost, 0, s_cost)
        if op.renormalize:
            notes.append(
                "NON-PAPER: successor rows conditioned on the dropped outcome deleted"
            )
    else:
        raise ValueError(f"cannot audit edit kind {op.kind!r}")

    assessments = tuple(
        NodeAssessment(v.id, *entries.get(v.id, (0, 0, 0))) for v in after.variables
    )
    return AssessmentReport(assessments, tuple(notes))


def audit_csv(report: AssessmentReport) -> str:
    lines = ["node,elicited,reused,general_baseline"]
    for e in report.nodes:
        lines.append(f"{e.node},{e.elicited},{e.reused},{e.baseline}")
    return "\n".join(lines) + "\n"


def aggregate_reports(
    reports: Sequence[AssessmentReport], node_order: Sequence[str]
) -> AssessmentReport:
    """Sum per-node counts across transactions (for multi-op scripts)."""
    sums: dict[str, list[int]] = {n: [0, 0, 0] for n in node_order}
    notes: list[str] = []
    for rep in reports:
        for e in rep.nodes:
            acc = sums.setdefault(e.node, [0, 0, 0])
            acc[0] += e.elicited
            acc[1] += e.reused
            acc[2] += e.baseline
        notes.extend(rep.notes)
    assessments = tuple(NodeAssessment(n, *sums[n]) for n in node_order)
    return AssessmentReport(assessments, tuple(notes))
