"""Exhaustive joint-distribution enumeration, used as independent ground truth.

The joint table is the plain chain-rule product over every full outcome
assignment; no factorization tricks, no approximation. It exists to
cross-check the edit operations and is never used on the editing path itself.
Networks with nodes pending re-encoding have no joint distribution and are
refused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .network import Network, structural_findings

DEFAULT_CELL_CAP = 10**6


class OracleError(ValueError):
    """The network cannot be enumerated (shape problem or pending edits)."""


class JointSizeError(OracleError):
    """The joint table would exceed the configured cell cap."""


class ZeroEvidenceError(OracleError):
    """Conditioning on an event of probability zero."""


@dataclass(frozen=True)
class JointTable:
    """Full joint distribution: one probability per complete assignment.

    `probs` has one axis per variable, in network declaration order; entry
    [i1, ..., in] is the probability that each variable takes its i-th
    outcome.
    """

    variables: tuple[str, ...]
    outcomes: tuple[tuple[str, ...], ...]
    probs: np.ndarray

    def total(self) -> float:
        return float(self.probs.sum())

    def prob(self, assignment: Mapping[str, str]) -> float:
        idx = []
        for var, outs in zip(self.variables, self.outcomes):
            if var not in assignment:
                raise OracleError(f"assignment missing variable {var}")
            try:
                idx.append(outs.index(assignment[var]))
            except ValueError:
                raise OracleError(
                    f"unknown outcome {assignment[var]!r} of {var}"
                ) from None
        return float(self.probs[tuple(idx)])


def joint_distribution(net: Network, cap: int = DEFAULT_CELL_CAP) -> JointTable:
    """Enumerate the full joint of a structurally sound, complete network."""
    if net.stale:
        raise OracleError(
            "network has nodes pending re-encoding: " + ", ".join(sorted(net.stale))
        )
    findings = structural_findings(net)
    if findings:
        raise OracleError("network is not enumerable: " + findings[0].message)

    counts = [len(v.outcomes) for v in net.variables]
    size = math.prod(counts)
    if size > cap:
        raise JointSizeError(f"joint table would hold {size} cells (cap {cap})")

    pos = {v.id: i for i, v in enumerate(net.variables)}
    joint = np.ones(tuple(counts), dtype=float)
    for v in net.variables:
        cpt = net.cpt(v.id)
        radices = net.radices(v.id)
        table = np.asarray(cpt.rows, dtype=float).reshape(
            radices + (len(v.outcomes),)
        )
        axes = [pos[p] for p in cpt.parent_order] + [pos[v.id]]
        order = sorted(range(len(axes)), key=lambda i: axes[i])
        table = np.transpose(table, order)
        shape = [1] * len(counts)
        for a in axes:
            shape[a] = counts[a]
        joint = joint * table.reshape(shape)
    return JointTable(net.ids(), tuple(v.outcomes for v in net.variables), joint)


def conditional(
    joint: JointTable,
    query_vars: Sequence[str],
    evidence: Mapping[str, str],
) -> np.ndarray:
    """Distribution over joint assignments of `query_vars` given `evidence`.

    Returned flat, enumerated over the query variables in the order given
    (last variable varying fastest), and normalized. Evidence maps variable
    ids to outcome labels; conditioning on nothing yields the marginal.
    """
    query = list(query_vars)
    if not query:
        raise OracleError("query must name at least one variable")
    if len(set(query)) != len(query):
        raise OracleError("duplicate variable in query")
    pos = {v: i for i, v in enumerate(joint.variables)}
    for v in query:
        if v not in pos:
            raise OracleError(f"unknown variable {v!r}")
        if v in evidence:
            raise OracleError(f"variable {v} appears in both query and evidence")

    indexer: list[object] = [slice(None)] * len(joint.variables)
    for var, label in evidence.items():
        if var not in pos:
            raise OracleError(f"unknown variable {var!r}")
        outs = joint.outcomes[pos[var]]
        try:
            indexer[pos[var]] = outs.index(label)
        except ValueError:
            raise OracleError(f"unknown outcome {label!r} of {var}") from None

    sub = joint.probs[tuple(indexer)]
    remaining = [v for v in joint.variables if v not in evidence]
    keep = set(query)
    sum_axes = tuple(i for i, v in enumerate(remaining) if v not in keep)
    marg = sub.sum(axis=sum_axes) if sum_axes else sub
    total = float(marg.sum())
    if total <= 0.0:
        raise ZeroEvidenceError("evidence has probability zero")
    kept_order = [v for v in remaining if v in keep]
    perm = [kept_order.index(v) for v in query]
    return np.transpose(marg, perm).ravel() / total


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    failures: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _parent_node_marginal(net: Network, node: str) -> np.ndarray:
    """Joint marginal over (parents of node, node), shaped (configs, outcomes)."""
    jt = joint_distribution(net)
    pos = {v: i for i, v in enumerate(jt.variables)}
    parent_order = net.cpt(node).parent_order
    keep = [pos[p] for p in parent_order] + [pos[node]]
    others = tuple(i for i in range(len(jt.variables)) if i not in keep)
    arr = np.transpose(jt.probs, tuple(keep) + others)
    rows = math.prod(net.radices(node))
    width = len(net.outcomes(node))
    return arr.reshape(rows, width, -1).sum(axis=2)


def check_ignored_identity(
    before: Network,
    after: Network,
    node: str,
    new_outcomes: Sequence[str],
    tolerance: float = 1e-8,
) -> CheckResult:
    """Verify from the full joint that, conditioned on the new outcomes not
    occurring, the node's distribution under the new state of information
    equals the old one, for every parent configuration.

    Configurations whose old-outcome mass is zero carry no information about
    the old distribution and are skipped.
    """
    old = before.outcomes(node)
    m = len(old)
    expected = old + tuple(new_outcomes)
    if after.outcomes(node) != expected:
        raise OracleError(
            f"{node} does not extend its old outcome space by {tuple(new_outcomes)}"
        )
    marg = _parent_node_marginal(after, node)
    old_block = marg[:, :m]
    totals = old_block.sum(axis=1)
    before_rows = np.asarray(before.cpt(node).rows, dtype=float)

    mask = totals > 0.0
    failures: list[str] = []
    if mask.any():
        cond = old_block[mask] / totals[mask, None]
        devs = np.abs(cond - before_rows[mask]).max(axis=1)
        config_ids = np.nonzero(mask)[0]
        for j, dev in zip(config_ids, devs):
            if dev > tolerance:
                failures.append(f"config {int(j)}: deviation {float(dev):.3g}")
    return CheckResult(not failures, tuple(failures))


def check_assumed_constant_identity(
    before: Network,
    after: Network,
    var: str,
    baseline: str,
    tolerance: float = 1e-8,
) -> CheckResult:
    """Verify from the full joints that conditioning the edited network on
    `var` = `baseline` reproduces the original network's distribution over
    every other variable.

    `var` must be a root in `after`. When `var` already existed before the
    edit (the arc-addition flow), the reference is the old joint
    marginalized over `var`.
    """
    if after.parents_of(var):
        raise OracleError(f"{var} is not a root in the edited network")
    jt_after = joint_distribution(after)
    rest = [v for v in jt_after.variables if v != var]
    if not rest:
        return CheckResult(True)
    cond = conditional(jt_after, rest, {var: baseline})

    jt_before = joint_distribution(before)
    if var in jt_before.variables:
        axis = jt_before.variables.index(var)
        ref_arr = jt_before.probs.sum(axis=axis)
        ref_order = [v for v in jt_before.variables if v != var]
    else:
        ref_arr = jt_before.probs
        ref_order = list(jt_before.variables)
    if ref_order != rest:
        perm = [ref_order.index(v) for v in rest]
        ref_arr = np.transpose(ref_arr, perm)
    ref = ref_arr.ravel()
    ref = ref / ref.sum()

    devs = np.abs(cond - ref)
    failures = []
    if devs.size:
        bad = np.nonzero(devs > tolerance)[0]
        rest_counts = [
            len(jt_after.outcomes[jt_after.variables.index(v)]) for v in rest
        ]
        for flat in bad[:10]:
            assignment = []
            idx = int(flat)
            for v, c in zip(reversed(rest), reversed(rest_counts)):
                assignment.append(f"{v}={idx % c}")
                idx //= c
            failures.append(
                "deviation %.3g at %s" % (float(devs[flat]), ",".join(reversed(assignment)))
            )
        if len(bad) > 10:
            failures.append(f"... {len(bad) - 10} more cells")
    return CheckResult(not failures, tuple(failures))
