"""
File management for graphs, weights, tree sets and experiment results.

Text formats (whitespace-separated, parsed strictly, trailing blank lines allowed):

- graph:   line 1 "n m", then m lines "u v" (0-indexed)
- weights: m lines, one decimal weight per line, in edge index order
- trees:   line 1 "k separation", then k lines of ascending edge ids

Experiment rows are written as CSV with a fixed header, RFC-4180 quoting and
CRLF line endings.
"""

# ============================================================================
# 文件头注释 (File Header)
# INPUT:  外部依赖 - pandas (CSV 读写), numpy (权重向量), json (报告),
#                   pathlib (路径处理), config (CSV 列与换行符),
#                   core.graph (build_graph / make_tree / as_weights)
# OUTPUT: 对外提供 - FileManager类,提供read_graph()、write_graph()、read_weights()、
#                   write_weights()、read_trees()、write_trees()、write_rows()、
#                   read_rows()、save_json()等文件管理方法
# POSITION: 系统地位 - Tool/Manager (工具层-文件管理)
#                     CLI 与实验运行器的文件操作基础设施
# ============================================================================

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config import get_experiment_config
from core.errors import InputValidationError
from core.graph import as_weights, build_graph, make_tree
from core.state import DissimilarSet, ExperimentRow, Graph, SpanningTree, WeightVector

logger = logging.getLogger("tools.file_manager")

PathLike = Union[str, Path]


class FileManager:
    """
    Reads and writes the toolkit's file formats.
    """

    def __init__(self, base_dir: Optional[Path] = None):
        """
        Initialize FileManager.

        Args:
            base_dir: Directory relative paths are resolved against (default: current directory)
        """
        self.base_dir = Path(base_dir) if base_dir else Path.cwd()

    def resolve(self, path: PathLike) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.base_dir / path

    def _lines(self, path: PathLike, what: str) -> List[str]:
        """Non-trailing lines of a text file; blank lines are only allowed at the end."""
        file_path = self.resolve(path)
        if not file_path.exists():
            raise InputValidationError(f"{what} file not found: {file_path}")
        lines = file_path.read_text(encoding="utf-8").splitlines()
        while lines and not lines[-1].strip():
            lines.pop()
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                raise InputValidationError(f"{file_path}:{lineno}: unexpected blank line in {what} file")
        return lines

    def _write_text(self, path: PathLike, content: str) -> Path:
        file_path = self.resolve(path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
        return file_path

    # ------------------------------------------------------------------
    # Graphs
    # ------------------------------------------------------------------

    def read_graph(self, path: PathLike) -> Graph:
        """
        Parse a graph file.

        Raises:
            InputValidationError: malformed header or edge lines, or an invalid graph
        """
        lines = self._lines(path, "graph")
        if not lines:
            raise InputValidationError(f"Graph file {path} is empty")
        n, m = _ints(lines[0], 2, f"{path}:1")
        if len(lines) - 1 != m:
            raise InputValidationError(f"Graph file {path} declares m={m} but lists {len(lines) - 1} edges")
        edges = [_ints(line, 2, f"{path}:{i}") for i, line in enumerate(lines[1:], start=2)]
        return build_graph(n, edges)

    def write_graph(self, graph: Graph, path: PathLike) -> Path:
        body = "".join(f"{u} {v}\n" for u, v in graph.edges)
        file_path = self._write_text(path, f"{graph.n} {graph.m}\n{body}")
        logger.debug(f"Wrote graph n={graph.n} m={graph.m} to {file_path}")
        return file_path

    # ------------------------------------------------------------------
    # Weights
    # ------------------------------------------------------------------

    def read_weights(self, path: PathLike, graph: Graph) -> WeightVector:
        """Parse a weights file aligned with the graph's edge indexing."""
        lines = self._lines(path, "weights")
        if len(lines) != graph.m:
            raise InputValidationError(f"Weights file {path} has {len(lines)} entries, graph has m={graph.m}")
        values = []
        for i, line in enumerate(lines, start=1):
            parts = line.split()
            if len(parts) != 1:
                raise InputValidationError(f"{path}:{i}: expected one weight, got {line!r}")
            try:
                values.append(float(parts[0]))
            except ValueError:
                raise InputValidationError(f"{path}:{i}: not a decimal number: {parts[0]!r}")
        return as_weights(graph, values)

    def write_weights(self, w: WeightVector, path: PathLike) -> Path:
        return self._write_text(path, "".join(f"{float(x)!r}\n" for x in np.asarray(w, dtype=np.float64)))

    # ------------------------------------------------------------------
    # Tree sets
    # ------------------------------------------------------------------

    def read_trees(self, path: PathLike, graph: Graph) -> DissimilarSet:
        """Parse a tree-set file; every line is validated as a spanning tree."""
        lines = self._lines(path, "tree set")
        if not lines:
            raise InputValidationError(f"Tree set file {path} is empty")
        header = lines[0].split()
        if len(header) != 2:
            raise InputValidationError(f"{path}:1: expected 'k separation', got {lines[0]!r}")
        try:
            k, separation = int(header[0]), float(header[1])
        except ValueError:
            raise InputValidationError(f"{path}:1: expected 'k separation', got {lines[0]!r}")
        if len(lines) - 1 != k:
            raise InputValidationError(f"Tree set file {path} declares {k} trees but lists {len(lines) - 1}")
        trees = tuple(
            make_tree(graph, _ints(line, graph.n - 1, f"{path}:{i}"))
            for i, line in enumerate(lines[1:], start=2)
        )
        return DissimilarSet(trees=trees, separation=separation, method="file")

    def write_trees(self, trees: Sequence[SpanningTree], separation: float, path: PathLike) -> Path:
        body = "".join(f"{t.format()}\n" for t in trees)
        return self._write_text(path, f"{len(trees)} {separation!r}\n{body}")

    # ------------------------------------------------------------------
    # Experiment rows
    # ------------------------------------------------------------------

    def write_rows(self, rows: Sequence[ExperimentRow], path: PathLike, columns: Optional[List[str]] = None) -> Path:
        """Write rows as CSV with the fixed header and CRLF line endings."""
        config = get_experiment_config()
        columns = columns or config["csv_columns"]
        file_path = self.resolve(path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        df = pd.DataFrame(list(rows), columns=columns)
        df.to_csv(
            file_path,
            index=False,
            lineterminator=config["csv_line_terminator"],
            quoting=csv.QUOTE_MINIMAL,
            float_format="%.17g",
        )
        logger.info(f"Wrote {len(df)} rows to {file_path}")
        return file_path

    def read_rows(self, path: PathLike) -> pd.DataFrame:
        file_path = self.resolve(path)
        if not file_path.exists():
            raise InputValidationError(f"Results file not found: {file_path}")
        return pd.read_csv(file_path)

    def save_json(self, data: Dict[str, Any], path: PathLike) -> Path:
        """
        Save a report as JSON.

        Args:
            data: Dictionary to save
            path: Target file

        Returns:
            Path to saved file
        """
        return self._write_text(path, json.dumps(data, indent=2, ensure_ascii=False) + "\n")


def _ints(line: str, count: int, where: str) -> Tuple[int, ...]:
    parts = line.split()
    if len(parts) != count:
        raise InputValidationError(f"{where}: expected {count} integers, got {line!r}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise InputValidationError(f"{where}: expected {count} integers, got {line!r}")
