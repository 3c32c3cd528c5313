"""
Tests for file formats (tools.file_manager)
"""

# INPUT:  pytest, numpy, json, tools.file_manager
# OUTPUT: 测试函数集
# POSITION: Tests/Unit Tests - 文件格式读写单元测试

import json

import numpy as np
import pytest

from core.counting import enumerate_spanning_trees
from core.errors import InputValidationError
from tools.file_manager import FileManager
from tools.graph_generators import clique, grid


@pytest.fixture
def fm(tmp_path):
    return FileManager(tmp_path)


class TestGraphFiles:
    """测试图文件"""

    def test_round_trip(self, fm):
        g = grid(2, 3)
        fm.write_graph(g, "g.txt")
        assert fm.read_graph("g.txt") == g

    def test_trailing_blank_lines_allowed(self, fm):
        (fm.base_dir / "g.txt").write_text("3 3\n0 1\n1 2\n0 2\n\n\n")
        assert fm.read_graph("g.txt").m == 3

    @pytest.mark.parametrize(
        "content",
        [
            "",
            "3\n0 1\n",
            "3 3\n0 1\n1 2\n",
            "3 2\n0 1\n\n1 2\n",
            "3 3\n0 1\n1 x\n0 2\n",
            "3 3\n0 1\n1 2 3\n0 2\n",
            "3 3\n0 1\n1 1\n0 2\n",
            "4 3\n0 1\n1 2\n0 2\n",
        ],
        ids=["empty", "short-header", "missing-edge", "inner-blank", "non-int", "extra-field", "self-loop", "disconnected"],
    )
    def test_rejects_malformed(self, fm, content):
        (fm.base_dir / "g.txt").write_text(content)
        with pytest.raises(InputValidationError):
            fm.read_graph("g.txt")

    def test_missing_file(self, fm):
        with pytest.raises(InputValidationError):
            fm.read_graph("nope.txt")


class TestWeightFiles:
    """测试权重文件"""

    def test_round_trip_is_exact(self, fm):
        g = clique(4)
        w = np.random.default_rng(0).normal(size=g.m)
        fm.write_weights(w, "w.txt")
        np.testing.assert_array_equal(fm.read_weights("w.txt", g), w)

    def test_length_mismatch(self, fm):
        (fm.base_dir / "w.txt").write_text("0.5\n1.5\n")
        with pytest.raises(InputValidationError):
            fm.read_weights("w.txt", clique(4))

    @pytest.mark.parametrize("bad", ["abc", "1.0 2.0", "nan"])
    def test_rejects_bad_entries(self, fm, bad):
        (fm.base_dir / "w.txt").write_text("0\n0\n" + bad + "\n")
        with pytest.raises(InputValidationError):
            fm.read_weights("w.txt", clique(3))


class TestTreeFiles:
    """测试树集合文件"""

    def test_round_trip(self, fm):
        g = clique(4)
        trees = enumerate_spanning_trees(g)[:5]
        fm.write_trees(trees, 0.5, "s.txt")
        dset = fm.read_trees("s.txt", g)
        assert dset.trees == tuple(trees)
        assert dset.separation == 0.5
        assert dset.method == "file"

    def test_rejects_non_tree(self, fm):
        (fm.base_dir / "s.txt").write_text("1 0\n0 1 3\n")
        with pytest.raises(InputValidationError):
            fm.read_trees("s.txt", clique(4))

    def test_rejects_count_mismatch(self, fm):
        (fm.base_dir / "s.txt").write_text("2 0\n0 1 2\n")
        with pytest.raises(InputValidationError):
            fm.read_trees("s.txt", clique(4))


class TestResultFiles:
    """测试 CSV 与 JSON 输出"""

    def test_csv_header_and_line_endings(self, fm):
        row = {
            "graph_id": "cycle(n=4)",
            "n": 4,
            "m": 4,
            "D_or_R0": 1,
            "relation": "l1",
            "mechanism": "expmech",
            "epsilon": 0.5,
            "trial": 0,
            "seed": 123,
            "error": 0.1,
            "runtime_ns": 1000,
        }
        path = fm.write_rows([row], "out/rows.csv")
        raw = path.read_bytes()
        assert raw.startswith(b"graph_id,n,m,D_or_R0,relation,mechanism,epsilon,trial,seed,error,runtime_ns\r\n")
        assert raw.count(b"\r\n") == 2
        assert b'"cycle(n=4)"' not in raw
        df = fm.read_rows("out/rows.csv")
        assert df.loc[0, "error"] == 0.1
        assert df.loc[0, "mechanism"] == "expmech"

    def test_commas_are_quoted(self, fm):
        row = {"graph_id": "grid(cols=3,rows=2)", "n": 6}
        raw = fm.write_rows([row], "rows.csv", columns=["graph_id", "n"]).read_bytes()
        assert b'"grid(cols=3,rows=2)",6\r\n' in raw

    def test_save_json(self, fm):
        path = fm.save_json({"value": 1.5, "vacuous": False}, "report.json")
        assert json.loads(path.read_text()) == {"value": 1.5, "vacuous": False}
