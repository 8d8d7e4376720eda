"""Shared builders: tiny fixed networks and seeded random generators."""

from __future__ import annotations

import random
from dataclasses import replace

import pytest

from bnmaint.network import Cpt, Network, Variable


def make_net(variables, parents=None, cpts=None, label="E") -> Network:
    """Terse network builder: variables as (id, outcomes) pairs, name = id."""
    vs = tuple(Variable(vid, vid, tuple(outs)) for vid, outs in variables)
    given = {vid: tuple(ps) for vid, ps in (parents or {}).items()}
    full_parents = {v.id: given.get(v.id, ()) for v in vs}
    cpt_objs = {
        vid: Cpt(vid, full_parents[vid], tuple(tuple(r) for r in rows))
        for vid, rows in (cpts or {}).items()
    }
    return Network(label, vs, full_parents, cpt_objs)


@pytest.fixture
def chain_net() -> Network:
    """A -> B, both binary."""
    return make_net(
        [("A", ["a1", "a2"]), ("B", ["b1", "b2"])],
        parents={"B": ["A"]},
        cpts={"A": [(0.5, 0.5)], "B": [(0.9, 0.1), (0.3, 0.7)]},
    )


def with_cell(net: Network, node: str, row: int, col: int, value: float) -> Network:
    """Copy of `net` with one CPT cell overwritten (for mutation tests)."""
    cpt = net.cpt(node)
    rows = [list(r) for r in cpt.rows]
    rows[row][col] = value
    cpts = dict(net.cpts)
    cpts[node] = Cpt(node, cpt.parent_order, tuple(tuple(r) for r in rows))
    return replace(net, cpts=cpts)


def random_row(rng: random.Random, width: int) -> tuple[float, ...]:
    xs = [rng.uniform(0.05, 1.0) for _ in range(width)]
    total = sum(xs)
    return tuple(x / total for x in xs)


def random_network(
    rng: random.Random,
    min_nodes: int = 2,
    max_nodes: int = 5,
    min_outcomes: int = 2,
    max_outcomes: int = 4,
    max_parents: int = 2,
    label: str = "E",
) -> Network:
    """Random DAG with normalized strictly positive rows."""
    n = rng.randint(min_nodes, max_nodes)
    ids = [f"N{i}" for i in range(n)]
    variables = tuple(
        Variable(
            vid,
            vid,
            tuple(f"{vid.lower()}x{j}" for j in range(rng.randint(min_outcomes, max_outcomes))),
        )
        for vid in ids
    )
    widths = {v.id: len(v.outcomes) for v in variables}
    parents: dict[str, tuple[str, ...]] = {}
    for i, vid in enumerate(ids):
        pool = ids[:i]
        count = rng.randint(0, min(max_parents, len(pool)))
        parents[vid] = tuple(sorted(rng.sample(pool, count)))
    cpts = {}
    for vid in ids:
        rows_n = 1
        for p in parents[vid]:
            rows_n *= widths[p]
        cpts[vid] = Cpt(
            vid, parents[vid], tuple(random_row(rng, widths[vid]) for _ in range(rows_n))
        )
    return Network(label, variables, parents, cpts)


def random_mass_blocks(
    rng: random.Random, configs: int, k: int, lo: float = 0.1, hi: float = 0.5
) -> list[tuple[float, ...]]:
    """Per-config new-outcome probabilities with total mass in [lo, hi],
    keeping the leftover scale factor comfortably away from zero."""
    blocks = []
    for _ in range(configs):
        mass = rng.uniform(lo, hi)
        cuts = sorted(rng.uniform(0.05, 0.95) for _ in range(k - 1))
        edges = [0.0, *cuts, 1.0]
        blocks.append(
            tuple(mass * (edges[i + 1] - edges[i]) for i in range(k))
        )
    return blocks


def random_weights(rng: random.Random, k: int) -> tuple[float, ...]:
    xs = [rng.uniform(0.05, 1.0) for _ in range(k)]
    total = sum(xs)
    return tuple(x / total for x in xs)
