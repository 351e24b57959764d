"""Edge cases pinned by contract: degenerate inputs, divergence, tie rules."""

import logging
import random

import numpy as np
import pytest

from rescueaid.assets import graphs_dir
from rescueaid.case_data import Table, build_dictionary, filter_cases, merge_case_tables
from rescueaid.groups import VitalKind
from rescueaid.recognition import TrainingConfig, init_model, train
from rescueaid.recognition.training import TrainingDivergedError
from rescueaid.treatment import NodeKind, next_actions, parse_guard
from rescueaid.treatment.model import DataContext, EpcEdge, EpcNode, TreatmentGraph
from rescueaid.treatment.parser import load_sop


class TestDegenerateInputs:
    def test_filter_of_empty_table_returns_empty_plus_report(self):
        table = Table(columns=["case_id", "SpO2"], rows=[])
        dictionary = build_dictionary(Table(columns=["case_id", "SpO2"], rows=[{"case_id": "1", "SpO2": "95"}]))
        filtered, report = filter_cases(table, dictionary)
        assert len(filtered) == 0
        assert report.total_outliers == 0
        assert report.total_fills == 0

    def test_seventy_overlapping_tables_merge_to_one_row_per_id(self):
        rng = random.Random(70)
        tables = []
        for t in range(70):
            rows = []
            for _ in range(8):
                case = f"case-{rng.randint(0, 39)}"
                rows.append({"case_id": case, f"col{t % 5}": f"v{rng.randint(0, 3)}"})
            tables.append(Table(columns=["case_id", f"col{t % 5}"], rows=rows, name=f"file{t:02d}.csv"))
        merged, report = merge_case_tables(tables)
        ids = [row["case_id"] for row in merged.rows]
        assert len(ids) == len(set(ids))
        assert report.rows_in == 70 * 8
        assert report.rows_out == len(ids) <= 40


class TestTrainingDivergence:
    def test_nan_loss_aborts_naming_epoch_and_batch(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=(64, 4)) * 1e3
        y = rng.integers(0, 10, size=64)
        config = TrainingConfig(hidden_layout=[8], learning_rate=1e18, epochs=5, batch_size=16, seed=1)
        model = init_model(4, [8], seed=1)
        with np.errstate(all="ignore"):  # inf/nan arithmetic is the point
            with pytest.raises(TrainingDivergedError, match=r"epoch \d+, batch \d+"):
                train(model, x, y, config)


def overlapping_guard_graph():
    """XorSplit whose two guards are both true; built in code because the
    validator would (rightly) flag this shape."""
    nodes = {
        "s": EpcNode("s", NodeKind.START_EVENT, "start"),
        "x": EpcNode("x", NodeKind.XOR_SPLIT, ""),
        "f1": EpcNode("f1", NodeKind.FUNCTION, "first declared"),
        "f2": EpcNode("f2", NodeKind.FUNCTION, "second declared"),
        "end": EpcNode("end", NodeKind.END_EVENT, "done"),
    }
    edges = [
        EpcEdge("s", "x"),
        EpcEdge("x", "f1", parse_guard("SpO2 < 95")),
        EpcEdge("x", "f2", parse_guard("SpO2 < 99")),
        EpcEdge("f1", "end"),
        EpcEdge("f2", "end"),
    ]
    return TreatmentGraph(graph_id="overlap", nodes=nodes, edges=edges)


class TestTraversalRules:
    def test_multiple_true_guards_first_declared_edge_wins_with_warning(self, caplog):
        graph = overlapping_guard_graph()
        ctx = DataContext()
        ctx.set_vital(VitalKind.SPO2, 90.0, at=0)  # both guards true
        with caplog.at_level(logging.WARNING):
            result = next_actions(graph, "s", ctx)
        assert result.functions == ["f1"]
        assert any("first declared" in record.message for record in caplog.records)

    def test_all_false_xor_split_is_a_logged_dead_end(self, caplog):
        graph = overlapping_guard_graph()
        ctx = DataContext()
        ctx.set_vital(VitalKind.SPO2, 100.0, at=0)
        with caplog.at_level(logging.WARNING):
            result = next_actions(graph, "s", ctx)
        assert result.functions == []
        assert result.pending == []

    def test_actions_are_always_functions_and_pending_iff_unknown(self):
        graph = load_sop(graphs_dir() / "airway.sop")
        rng = random.Random(11)
        positions = list(graph.nodes)
        for _ in range(200):
            ctx = DataContext()
            if rng.random() < 0.5:
                ctx.set_vital(VitalKind.SPO2, rng.uniform(70, 100), at=0)
            if rng.random() < 0.5:
                ctx.set_answer("q_airway_clear", rng.choice(["yes", "no"]))
            position = rng.choice(positions)
            result = next_actions(graph, position, ctx)
            for function_id in result.functions:
                assert graph.node(function_id).kind is NodeKind.FUNCTION
            # pending items arise exactly when some traversed guard was Unknown,
            # i.e. a split rests in the resting set
            resting_splits = [
                node_id for node_id in result.resting if graph.node(node_id).is_connector()
            ]
            assert bool(result.pending) == bool(resting_splits)
