"""
Grid diagrams (arc presentations) and the knot table file format.

A diagram of size n lists, for each column 1..n, the two rows holding its
markers, e.g. `[[2,5],[1,3],[2,4],[3,5],[1,4]]`. Every row must be used by
exactly two markers overall, so each row carries one horizontal arc and each
column one vertical arc.
"""

import logging
import re
from collections import Counter
from pathlib import Path
from typing import Dict, List, Tuple, Union

import orjson
from pydantic import BaseModel, ConfigDict, model_validator

from pipeline.errors import GridParseError

logger = logging.getLogger(__name__)

_BRAID_ENTRY = re.compile(r"^braid\s*\(?\s*([-\d\s,]*)\)?$")


class GridDiagram(BaseModel):
    model_config = ConfigDict(frozen=True)

    columns: Tuple[Tuple[int, int], ...]

    @model_validator(mode="after")
    def _row_usage(self) -> "GridDiagram":
        _validate(self.columns)
        return self

    @property
    def size(self) -> int:
        return len(self.columns)

    def horizontal_arcs(self) -> Dict[int, Tuple[int, int]]:
        """Row -> (left column, right column), 1-based."""
        cols_of_row: Dict[int, List[int]] = {}
        for i, (a, b) in enumerate(self.columns, start=1):
            cols_of_row.setdefault(a, []).append(i)
            cols_of_row.setdefault(b, []).append(i)
        return {row: (min(c), max(c)) for row, c in sorted(cols_of_row.items())}

    def vertical_arcs(self) -> Dict[int, Tuple[int, int]]:
        """Column -> (lower row, upper row), 1-based."""
        return {i: (min(p), max(p)) for i, p in enumerate(self.columns, start=1)}

    def to_text(self) -> str:
        return "[" + ",".join(f"[{a},{b}]" for a, b in self.columns) + "]"

    def mirror(self) -> "GridDiagram":
        """Reverse the column order."""
        return GridDiagram(columns=self.columns[::-1])

    def transpose(self) -> "GridDiagram":
        """Swap the roles of rows and columns."""
        rows_of: Dict[int, List[int]] = {}
        for i, (a, b) in enumerate(self.columns, start=1):
            rows_of.setdefault(a, []).append(i)
            rows_of.setdefault(b, []).append(i)
        columns = tuple(
            (rows_of[r][0], rows_of[r][1]) for r in range(1, self.size + 1)
        )
        return GridDiagram(columns=columns)


def _validate(columns: Tuple[Tuple[int, int], ...]) -> None:
    n = len(columns)
    if n < 2:
        raise GridParseError("size", f"Grid must have at least 2 columns, got {n}")
    for i, (a, b) in enumerate(columns, start=1):
        if a == b:
            raise GridParseError("marks", f"Column {i} has both markers in row {a}")
        for row in (a, b):
            if not 1 <= row <= n:
                raise GridParseError("rows", f"Column {i} uses row {row} outside 1..{n}")
    usage = Counter(row for pair in columns for row in pair)
    wrong = sorted(row for row in range(1, n + 1) if usage[row] != 2)
    if wrong:
        raise GridParseError(
            "rows", f"Rows {wrong} are not used by exactly two markers"
        )


def parse_grid(text: str) -> GridDiagram:
    """Parse a bracketed list of column marker pairs."""
    try:
        data = orjson.loads(text.strip())
    except orjson.JSONDecodeError as e:
        raise GridParseError("syntax", f"Malformed grid text: {e}") from e
    if not isinstance(data, list) or not all(
        isinstance(pair, list)
        and len(pair) == 2
        and all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
        for pair in data
    ):
        raise GridParseError("syntax", "Grid must be a list of [row, row] integer pairs")
    columns = tuple((pair[0], pair[1]) for pair in data)
    _validate(columns)
    return GridDiagram(columns=columns)


def parse_entry(entry: str) -> GridDiagram:
    """A table entry: a grid literal or `braid 1,1,-2` in Artin generators."""
    entry = entry.strip()
    match = _BRAID_ENTRY.match(entry)
    if match:
        from knots.braids import braid_to_grid

        letters = [int(x) for x in re.split(r"[\s,]+", match.group(1).strip()) if x]
        return braid_to_grid(letters)
    return parse_grid(entry)


def load_knot_table(
    path: Union[str, Path], transpose: bool = False
) -> Dict[str, GridDiagram]:
    """
    Read `name: diagram` lines; `#` starts a comment. Names must be unique and
    keep their file order.
    """
    table: Dict[str, GridDiagram] = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            name, sep, entry = line.partition(":")
            name = name.strip()
            if not sep or not name:
                raise GridParseError("syntax", f"{path}:{lineno}: expected 'name: diagram'")
            if name in table:
                raise GridParseError("syntax", f"{path}:{lineno}: duplicate knot {name!r}")
            try:
                diagram = parse_entry(entry)
            except GridParseError as e:
                raise GridParseError(e.kind, f"{path}:{lineno}: {e}") from e
            table[name] = diagram.transpose() if transpose else diagram
    logger.info(f"Loaded {len(table)} knots from {path}")
    return table
