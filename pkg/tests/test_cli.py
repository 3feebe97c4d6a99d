"""End-to-end CLI runs over temporary files."""

import numpy as np
import pytest

from mucca.cli import main
from mucca.graph import load_edge_list, load_labels


@pytest.fixture
def workspace(tmp_path):
    graph = tmp_path / "graph.txt"
    graph.write_text(
        "# toy graph\n"
        "0 1 1.0\n1 2 0.5\n2 3 2.0\n1 4 0.7\n0 2 0.9\n")
    labels = tmp_path / "labels.txt"
    labels.write_text("0 0\n3 1\n")
    return tmp_path, graph, labels


class TestSpanning:
    def test_mst_roundtrips_as_edge_list(self, workspace, capsys):
        tmp, graph, _ = workspace
        out = tmp / "tree.txt"
        assert main(["spanning", "--mode", "mst", "--graph", str(graph),
                     "--out", str(out)]) == 0
        tree = load_edge_list(out)
        assert tree.num_edges == 4
        assert "total similarity" in capsys.readouterr().out

    def test_rst_seeded(self, workspace):
        tmp, graph, _ = workspace
        a, b = tmp / "a.txt", tmp / "b.txt"
        main(["spanning", "--mode", "rst", "--seed", "5",
              "--graph", str(graph), "--out", str(a)])
        main(["spanning", "--mode", "rst", "--seed", "5",
              "--graph", str(graph), "--out", str(b)])
        assert a.read_text() == b.read_text()


class TestPredict:
    def test_labels_total_and_training_kept(self, workspace):
        tmp, graph, labels = workspace
        out = tmp / "pred.txt"
        assert main(["predict", "--tree", "mst", "--graph", str(graph),
                     "--labels", str(labels), "--out", str(out)]) == 0
        pred = load_labels(out, 5)
        assert pred.num_revealed == 5
        assert pred.labels[0] == 0 and pred.labels[3] == 1

    def test_committee_flag(self, workspace):
        tmp, graph, labels = workspace
        out = tmp / "pred.txt"
        assert main(["predict", "--tree", "rst", "--seed", "3",
                     "--committee", "3", "--graph", str(graph),
                     "--labels", str(labels), "--out", str(out)]) == 0
        assert load_labels(out, 5).num_revealed == 5


class TestSolveEss:
    def test_writes_labels_and_log(self, workspace):
        tmp, graph, labels = workspace
        out, log = tmp / "pred.txt", tmp / "trace.csv"
        assert main(["solve-ess", "--graph", str(graph),
                     "--labels", str(labels), "--out", str(out),
                     "--log", str(log)]) == 0
        pred = load_labels(out, 5)
        assert pred.num_revealed == 5
        lines = log.read_text().strip().splitlines()
        assert lines[0] == "iteration,potential,max_row_delta"
        assert len(lines) >= 2
        # potential column is non-decreasing
        pots = [float(line.split(",")[1]) for line in lines[1:]]
        assert all(b >= a - 1e-9 for a, b in zip(pots, pots[1:]))


class TestBaseline:
    @pytest.mark.parametrize("algo", ["wmv", "labprop"])
    def test_both_algorithms(self, workspace, algo):
        tmp, graph, labels = workspace
        out = tmp / f"{algo}.txt"
        assert main(["baseline", "--algo", algo, "--graph", str(graph),
                     "--labels", str(labels), "--out", str(out)]) == 0
        assert load_labels(out, 5).num_revealed == 5


class TestBuildGraph:
    def test_builds_graph_and_labels(self, tmp_path, capsys):
        feats = tmp_path / "feats.csv"
        feats.write_text("x0,x1,label\n0,0,a\n0.1,0,a\n5,5,b\n5.1,5,b\n")
        out_g, out_l = tmp_path / "g.txt", tmp_path / "l.txt"
        assert main(["build-graph", "--k", "2", "--features", str(feats),
                     "--out-graph", str(out_g),
                     "--out-labels", str(out_l)]) == 0
        g = load_edge_list(out_g)
        assert g.n == 4
        y = load_labels(out_l, 4)
        assert list(y.labels) == [0, 0, 1, 1]

    def test_missing_label_column_is_an_error(self, tmp_path, capsys):
        feats = tmp_path / "feats.csv"
        feats.write_text("1,2\n3,4\n")
        code = main(["build-graph", "--k", "1", "--features", str(feats),
                     "--out-graph", str(tmp_path / "g.txt"),
                     "--out-labels", str(tmp_path / "l.txt")])
        assert code == 2
        assert "label" in capsys.readouterr().err


class TestExperiment:
    def test_grid_to_csv(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        lines = []
        for i in range(1, 40):
            lines.append(f"{i} {rng.integers(0, i)} "
                         f"{rng.uniform(0.2, 1.0):.4f}")
        graph = tmp_path / "graph.txt"
        graph.write_text("\n".join(lines) + "\n")
        labels = tmp_path / "labels.txt"
        labels.write_text("\n".join(f"{i} {int(i >= 20)}" for i in range(40)))
        config = tmp_path / "config.txt"
        config.write_text(
            "algorithms = mucca:mst, mucca:rst:3, wmv\n"
            "fractions = 0.2, 0.4\n"
            "runs = 2\n"
            "seed = 11\n")
        out = tmp_path / "results.csv"
        assert main(["experiment", "--config", str(config),
                     "--graph", str(graph), "--labels", str(labels),
                     "--out", str(out)]) == 0
        rows = out.read_text().strip().splitlines()
        assert rows[0].startswith("algorithm,tree_mode")
        assert len(rows) == 1 + 3 * 2 * 2
        assert "3*mucca+rst" in capsys.readouterr().out

    def test_bad_config_reports_error(self, tmp_path, capsys):
        config = tmp_path / "config.txt"
        config.write_text("fractions = 0.2\n")
        code = main(["experiment", "--config", str(config),
                     "--graph", "nope", "--labels", "nope",
                     "--out", str(tmp_path / "r.csv")])
        assert code == 2
        assert "algorithms" in capsys.readouterr().err


class TestErrorPaths:
    def test_malformed_graph_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("0 1\n")
        code = main(["spanning", "--mode", "mst", "--graph", str(bad),
                     "--out", str(tmp_path / "t.txt")])
        assert code == 2
        assert "line 1" in capsys.readouterr().err
