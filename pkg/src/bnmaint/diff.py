"""Structural and numeric comparison of two network snapshots."""

from __future__ import annotations

from dataclasses import dataclass

from .network import Network


@dataclass(frozen=True)
class DiffEntry:
    section: str  # meta | variables | outcomes | arcs | cpts
    message: str


def _arcs(net: Network) -> list[tuple[str, str]]:
    return [(p, v.id) for v in net.variables for p in net.parents_of(v.id)]


def diff_networks(
    a: Network, b: Network, tolerance: float = 1e-9
) -> tuple[DiffEntry, ...]:
    """All differences between two snapshots; empty means identical up to
    `tolerance` on CPT cells."""
    out: list[DiffEntry] = []
    if a.version_label != b.version_label:
        out.append(
            DiffEntry(
                "meta",
                f'version_label "{a.version_label}" -> "{b.version_label}"',
            )
        )

    a_ids, b_ids = set(a.ids()), set(b.ids())
    for vid in a.ids():
        if vid not in b_ids:
            out.append(DiffEntry("variables", f"removed {vid}"))
    for vid in b.ids():
        if vid not in a_ids:
            out.append(DiffEntry("variables", f"added {vid}"))
    common = [vid for vid in a.ids() if vid in b_ids]
    for vid in common:
        va, vb = a.variable(vid), b.variable(vid)
        if va.name != vb.name:
            out.append(
                DiffEntry("variables", f"name of {vid} changed: {va.name} -> {vb.name}")
            )
        if va.outcomes != vb.outcomes:
            sa, sb = set(va.outcomes), set(vb.outcomes)
            for o in va.outcomes:
                if o not in sb:
                    out.append(DiffEntry("outcomes", f"outcomes[{vid}]: removed {o}"))
            for o in vb.outcomes:
                if o not in sa:
                    out.append(DiffEntry("outcomes", f"outcomes[{vid}]: added {o}"))
            if sa == sb:
                out.append(DiffEntry("outcomes", f"outcomes[{vid}]: reordered"))

    arcs_a, arcs_b = _arcs(a), _arcs(b)
    set_a, set_b = set(arcs_a), set(arcs_b)
    for p, c in arcs_a:
        if (p, c) not in set_b:
            out.append(DiffEntry("arcs", f"removed {p}->{c}"))
    for p, c in arcs_b:
        if (p, c) not in set_a:
            out.append(DiffEntry("arcs", f"added {p}->{c}"))

    for vid in common:
        va, vb = a.variable(vid), b.variable(vid)
        if va.outcomes != vb.outcomes or a.parents_of(vid) != b.parents_of(vid):
            continue  # structure changed; covered above
        if any(
            a.variable(p).outcomes != b.variable(p).outcomes
            for p in a.parents_of(vid)
            if p in b_ids
        ):
            continue
        ca = a.cpts.get(vid)
        cb = b.cpts.get(vid)
        if ca is None or cb is None:
            if ca is not cb:
                out.append(DiffEntry("cpts", f"cpt[{vid}]: present in only one file"))
            continue
        if len(ca.rows) != len(cb.rows):
            out.append(
                DiffEntry(
                    "cpts",
                    f"cpt[{vid}]: row count {len(ca.rows)} -> {len(cb.rows)}",
                )
            )
            continue
        parent_outcomes = [a.variable(p).outcomes for p in a.parents_of(vid)]
        for j, (ra, rb) in enumerate(zip(ca.rows, cb.rows)):
            if len(ra) != len(rb):
                out.append(
                    DiffEntry("cpts", f"cpt[{vid}] row {j}: width {len(ra)} -> {len(rb)}")
                )
                continue
            config = _config_labels(j, a.parents_of(vid), parent_outcomes)
            for i, (xa, xb) in enumerate(zip(ra, rb)):
                if abs(xa - xb) > tolerance:
                    out.append(
                        DiffEntry(
                            "cpts",
                            f"cpt[{vid}] row {j}{config} [{va.outcomes[i]}]: "
                            f"{xa} -> {xb}",
                        )
                    )
    return tuple(out)


def _config_labels(
    row: int, parent_ids: tuple[str, ...], parent_outcomes: list[tuple[str, ...]]
) -> str:
    if not parent_ids:
        return ""
    idx = row
    labels = []
    for pid, outs in zip(reversed(parent_ids), reversed(parent_outcomes)):
        labels.append(f"{pid}={outs[idx % len(outs)]}")
        idx //= len(outs)
    return " (" + ",".join(reversed(labels)) + ")"


def format_diff(entries: tuple[DiffEntry, ...]) -> str:
    return "\n".join(e.message for e in entries)
