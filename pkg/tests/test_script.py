"""Change-script parsing and sequential application."""

from __future__ import annotations

import json

import pytest

from bnmaint.netio import ParseError
from bnmaint.script import ScriptError, apply_script, parse_script

from conftest import make_net


@pytest.fixture
def two_parent_net():
    return make_net(
        [("A", ["a1", "a2"]), ("D", ["d1", "d2"]), ("B", ["b1", "b2"])],
        parents={"B": ["A", "D"]},
        cpts={
            "A": [(0.5, 0.5)],
            "D": [(0.4, 0.6)],
            "B": [(0.9, 0.1), (0.8, 0.2), (0.3, 0.7), (0.2, 0.8)],
        },
    )


def _round_trip(ops):
    return parse_script(json.loads(json.dumps(ops)))


class TestParse:
    def test_must_be_array(self):
        with pytest.raises(ParseError, match="array"):
            parse_script({"op": "replace_cpt"})
        with pytest.raises(ParseError, match="object"):
            parse_script(["nope"])

    def test_unknown_op_fails_at_apply(self, chain_net):
        with pytest.raises(ScriptError, match="op 1: unknown operation"):
            apply_script(chain_net, [{"op": "teleport"}])


class TestApply:
    def test_grow_then_reuse(self, two_parent_net):
        ops = _round_trip(
            [
                {
                    "op": "add_outcomes",
                    "mode": "ignored",
                    "node": "A",
                    "outcomes": ["a3"],
                    "blocks": [{"given": {}, "values": [0.2]}],
                },
                {
                    "op": "reuse_successor_rows",
                    "node": "B",
                    "parent": "A",
                    "blocks": [
                        {"outcome": "a3", "given": {"D": "d1"}, "values": [0.5, 0.5]},
                        {"outcome": "a3", "given": {"D": "d2"}, "values": [0.6, 0.4]},
                    ],
                },
            ]
        )
        result = apply_script(two_parent_net, ops)
        assert len(result.transactions) == 2
        final = result.final
        assert final.outcomes("A") == ("a1", "a2", "a3")
        assert final.cpt("B").rows[4] == (0.5, 0.5)
        assert final.cpt("B").rows[5] == (0.6, 0.4)
        assert final.version_label == "E.2"
        assert not final.stale

    def test_blocks_are_keyed_by_labels_not_order(self, two_parent_net):
        shuffled = _round_trip(
            [
                {
                    "op": "replace_cpt",
                    "node": "B",
                    "blocks": [
                        {"given": {"A": "a2", "D": "d2"}, "values": [0.4, 0.6]},
                        {"given": {"A": "a1", "D": "d1"}, "values": [0.1, 0.9]},
                        {"given": {"A": "a2", "D": "d1"}, "values": [0.3, 0.7]},
                        {"given": {"A": "a1", "D": "d2"}, "values": [0.2, 0.8]},
                    ],
                }
            ]
        )
        result = apply_script(two_parent_net, shuffled)
        assert result.final.cpt("B").rows == (
            (0.1, 0.9),
            (0.2, 0.8),
            (0.3, 0.7),
            (0.4, 0.6),
        )

    def test_failure_names_op_index(self, chain_net):
        ops = [
            {
                "op": "add_outcomes",
                "mode": "ignored",
                "node": "A",
                "outcomes": ["a3"],
                "blocks": [{"given": {}, "values": [0.2]}],
            },
            {
                "op": "replace_cpt",
                "node": "B",
                "blocks": [{"given": {"A": "a1"}, "values": [0.5, 0.5]}],
            },
        ]
        # op 2 misses the rows for a2/a3 configurations
        with pytest.raises(ScriptError) as info:
            apply_script(chain_net, ops)
        assert info.value.op_index == 2
        assert str(info.value).startswith("op 2:")

    def test_unresolved_pending_nodes_fail_the_script(self, chain_net):
        ops = [
            {
                "op": "add_outcomes",
                "mode": "ignored",
                "node": "A",
                "outcomes": ["a3"],
                "blocks": [{"given": {}, "values": [0.2]}],
            }
        ]
        with pytest.raises(ScriptError, match="pending re-encoding: B"):
            apply_script(chain_net, ops)

    def test_empty_script_is_identity(self, chain_net):
        result = apply_script(chain_net, [])
        assert result.final == chain_net

    def test_duplicate_and_missing_blocks_rejected(self, chain_net):
        dup = [
            {
                "op": "replace_cpt",
                "node": "B",
                "blocks": [
                    {"given": {"A": "a1"}, "values": [0.5, 0.5]},
                    {"given": {"A": "a1"}, "values": [0.5, 0.5]},
                ],
            }
        ]
        with pytest.raises(ScriptError, match="duplicate block"):
            apply_script(chain_net, dup)
        missing = [
            {
                "op": "replace_cpt",
                "node": "B",
                "blocks": [{"given": {"A": "a1"}, "values": [0.5, 0.5]}],
            }
        ]
        with pytest.raises(ScriptError, match="missing block"):
            apply_script(chain_net, missing)

    def test_unknown_outcome_label_rejected(self, chain_net):
        ops = [
            {
                "op": "replace_cpt",
                "node": "B",
                "blocks": [
                    {"given": {"A": "bogus"}, "values": [0.5, 0.5]},
                    {"given": {"A": "a2"}, "values": [0.5, 0.5]},
                ],
            }
        ]
        with pytest.raises(ScriptError, match="unknown outcome 'bogus'"):
            apply_script(chain_net, ops)


class TestEveryOpKind:
    def test_split_then_reuse(self, chain_net):
        ops = _round_trip(
            [
                {
                    "op": "split_outcome",
                    "mode": "split",
                    "node": "A",
                    "outcome": "a2",
                    "parts": ["a2u", "a2v"],
                    "form": "weights",
                    "blocks": [{"given": {}, "values": [0.25, 0.75]}],
                },
                {
                    "op": "reuse_successor_rows",
                    "node": "B",
                    "parent": "A",
                    "blocks": [
                        {"outcome": "a2u", "given": {}, "values": [0.6, 0.4]},
                        {"outcome": "a2v", "given": {}, "values": [0.2, 0.8]},
                    ],
                },
            ]
        )
        result = apply_script(chain_net, ops)
        assert result.final.outcomes("A") == ("a1", "a2u", "a2v")
        assert result.final.cpt("A").rows[0] == pytest.approx(
            (0.5, 0.125, 0.375), abs=1e-15
        )

    def test_split_probs_form(self, chain_net):
        ops = [
            {
                "op": "split_outcome",
                "node": "A",
                "outcome": "a2",
                "parts": ["u", "v"],
                "form": "probs",
                "blocks": [{"given": {}, "values": [0.2, 0.3]}],
            },
            {
                "op": "reuse_successor_rows",
                "node": "B",
                "parent": "A",
                "blocks": [
                    {"outcome": "u", "given": {}, "values": [0.6, 0.4]},
                    {"outcome": "v", "given": {}, "values": [0.2, 0.8]},
                ],
            },
        ]
        ops[0]["mode"] = "split"
        result = apply_script(chain_net, ops)
        assert result.final.cpt("A").rows[0] == pytest.approx(
            (0.5, 0.2, 0.3), abs=1e-12
        )

    def test_add_arc_assumed_constant(self):
        net = make_net(
            [("A", ["a0", "a1"]), ("B", ["b1", "b2"])],
            cpts={"A": [(0.5, 0.5)], "B": [(0.6, 0.4)]},
        )
        ops = [
            {
                "op": "add_arc",
                "mode": "assumed-constant",
                "from": "A",
                "to": "B",
                "baseline": "a0",
                "blocks": [{"outcome": "a1", "given": {}, "values": [0.2, 0.8]}],
            }
        ]
        result = apply_script(net, ops)
        assert result.final.cpt("B").rows == ((0.6, 0.4), (0.2, 0.8))

    def test_add_arc_general(self):
        net = make_net(
            [("A", ["a0", "a1"]), ("B", ["b1", "b2"])],
            cpts={"A": [(0.5, 0.5)], "B": [(0.6, 0.4)]},
        )
        ops = [
            {
                "op": "add_arc",
                "mode": "general",
                "from": "A",
                "to": "B",
                "blocks": [
                    {"given": {"A": "a0"}, "values": [0.7, 0.3]},
                    {"given": {"A": "a1"}, "values": [0.2, 0.8]},
                ],
            }
        ]
        result = apply_script(net, ops)
        assert result.final.cpt("B").rows == ((0.7, 0.3), (0.2, 0.8))

    def test_add_variable_with_successor(self, chain_net):
        ops = [
            {
                "op": "add_variable",
                "mode": "assumed-constant",
                "variable": {"id": "N", "name": "New factor", "outcomes": ["n0", "n1"]},
                "parents": [],
                "baseline": "n0",
                "blocks": [{"given": {}, "values": [0.7, 0.3]}],
                "successors": [
                    {
                        "node": "B",
                        "blocks": [
                            {"outcome": "n1", "given": {"A": "a1"}, "values": [0.5, 0.5]},
                            {"outcome": "n1", "given": {"A": "a2"}, "values": [0.1, 0.9]},
                        ],
                    }
                ],
            }
        ]
        result = apply_script(chain_net, ops)
        final = result.final
        assert final.parents_of("B") == ("A", "N")
        assert final.cpt("B").rows == (
            (0.9, 0.1),
            (0.5, 0.5),
            (0.3, 0.7),
            (0.1, 0.9),
        )

    def test_add_variable_general_successor_blocks_use_new_id(self, chain_net):
        ops = [
            {
                "op": "add_variable",
                "mode": "general",
                "variable": {"id": "N", "outcomes": ["n0", "n1"]},
                "parents": ["A"],
                "blocks": [
                    {"given": {"A": "a1"}, "values": [0.7, 0.3]},
                    {"given": {"A": "a2"}, "values": [0.4, 0.6]},
                ],
                "successors": [
                    {
                        "node": "B",
                        "blocks": [
                            {"given": {"A": "a1", "N": "n0"}, "values": [0.9, 0.1]},
                            {"given": {"A": "a1", "N": "n1"}, "values": [0.8, 0.2]},
                            {"given": {"A": "a2", "N": "n0"}, "values": [0.3, 0.7]},
                            {"given": {"A": "a2", "N": "n1"}, "values": [0.2, 0.8]},
                        ],
                    }
                ],
            }
        ]
        result = apply_script(chain_net, ops)
        assert result.final.cpt("B").rows == (
            (0.9, 0.1),
            (0.8, 0.2),
            (0.3, 0.7),
            (0.2, 0.8),
        )

    def test_remove_arc_and_outcome_and_replace(self, chain_net):
        ops = [
            {
                "op": "remove_arc",
                "from": "A",
                "to": "B",
                "blocks": [{"given": {}, "values": [0.55, 0.45]}],
            },
            {
                "op": "remove_outcome",
                "node": "A",
                "outcome": "a2",
                "renormalize": True,
            },
            {
                "op": "replace_cpt",
                "node": "B",
                "blocks": [{"given": {}, "values": [0.5, 0.5]}],
            },
        ]
        result = apply_script(chain_net, ops)
        assert result.final.outcomes("A") == ("a1",)
        assert result.final.cpt("B").rows == ((0.5, 0.5),)
        assert result.final.version_label == "E.3"

    def test_remove_outcome_with_replacements(self):
        net = make_net(
            [("A", ["a1", "a2", "a3"]), ("B", ["b1", "b2"])],
            parents={"B": ["A"]},
            cpts={
                "A": [(0.2, 0.5, 0.3)],
                "B": [(0.9, 0.1), (0.4, 0.6), (0.5, 0.5)],
            },
        )
        ops = [
            {
                "op": "remove_outcome",
                "node": "A",
                "outcome": "a2",
                "blocks": [{"given": {}, "values": [0.45, 0.55]}],
                "successors": [
                    {
                        "node": "B",
                        "blocks": [
                            {"given": {"A": "a1"}, "values": [0.9, 0.1]},
                            {"given": {"A": "a3"}, "values": [0.5, 0.5]},
                        ],
                    }
                ],
            }
        ]
        result = apply_script(net, ops)
        assert result.final.outcomes("A") == ("a1", "a3")
        assert result.final.cpt("A").rows == ((0.45, 0.55),)
