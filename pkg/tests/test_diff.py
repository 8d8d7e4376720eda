"""Structural and numeric network diffs."""

from __future__ import annotations

from bnmaint import edits
from bnmaint.diff import diff_networks, format_diff

from conftest import make_net, with_cell


def test_identical_networks_are_empty_diff(chain_net):
    assert diff_networks(chain_net, chain_net) == ()


def test_rescaled_row_lists_cells_with_old_and_new(chain_net):
    changed = with_cell(with_cell(chain_net, "B", 0, 0, 0.72), "B", 0, 1, 0.28)
    entries = diff_networks(chain_net, changed)
    cpts = [e for e in entries if e.section == "cpts"]
    assert len(cpts) == 2
    text = format_diff(entries)
    assert "cpt[B] row 0 (A=a1) [b1]: 0.9 -> 0.72" in text
    assert "cpt[B] row 0 (A=a1) [b2]: 0.1 -> 0.28" in text


def test_added_outcome_reported_under_outcomes_section(chain_net):
    t = edits.add_outcomes_ignored(chain_net, "A", ["a3"], [(0.2,)])
    t2 = edits.reuse_successor_rows_ignored(t.after, "B", "A", {"a3": [(0.5, 0.5)]})
    entries = diff_networks(chain_net, t2.after)
    outcome_entries = [e for e in entries if e.section == "outcomes"]
    assert any("outcomes[A]: added a3" == e.message for e in outcome_entries)


def test_variable_and_arc_changes(chain_net):
    other = make_net(
        [("A", ["a1", "a2"]), ("C", ["c1", "c2"])],
        cpts={"A": [(0.5, 0.5)], "C": [(0.3, 0.7)]},
    )
    text = format_diff(diff_networks(chain_net, other))
    assert "removed B" in text
    assert "added C" in text
    assert "removed A->B" in text


def test_version_label_change_is_a_difference(chain_net):
    t = edits.replace_cpt(chain_net, "B", chain_net.cpt("B").rows)
    entries = diff_networks(chain_net, t.after)
    assert [e.section for e in entries] == ["meta"]
    assert 'version_label "E" -> "E.1"' in format_diff(entries)


def test_tolerance_suppresses_tiny_cell_noise(chain_net):
    noisy = with_cell(chain_net, "B", 0, 0, 0.9 + 1e-12)
    assert diff_networks(chain_net, noisy) == ()
    assert diff_networks(chain_net, noisy, tolerance=0.0) != ()
