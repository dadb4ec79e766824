"""
Braid closures as grid diagrams.

Braid time runs up the rows and every strand is a vertical segment in its
current column. A crossing between positions a and a+1 is one horizontal
move that passes under the other strand's vertical segment:

  sigma_a      the right strand moves left, just past the left strand
  sigma_a^-1   the left strand moves right, just past the right strand

Each move opens a fresh column, so the diagram has one row and one column per
crossing. The closure loops run to the right of everything, nested so that
they cross nothing.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Sequence, Set, Tuple

from knots.grid import GridDiagram
from pipeline.errors import GridParseError

logger = logging.getLogger(__name__)

Segment = Tuple[Fraction, Fraction, Fraction]  # (column key, row key, row key)


def braid_strands(word: Sequence[int]) -> int:
    return max((abs(x) for x in word), default=0) + 1


def closure_components(word: Sequence[int], strands: int) -> int:
    """Number of link components of the braid closure."""
    positions = list(range(strands))
    for letter in word:
        a = abs(letter) - 1
        positions[a], positions[a + 1] = positions[a + 1], positions[a]
    # positions[p] is the strand ending at p; closure sends it to strand p.
    seen: Set[int] = set()
    components = 0
    for start in range(strands):
        if start in seen:
            continue
        components += 1
        s = start
        while s not in seen:
            seen.add(s)
            s = positions.index(s)
    return components


def braid_to_grid(word: Sequence[int], strands: int = 0) -> GridDiagram:
    strands = max(strands, braid_strands(word))
    if any(x == 0 or abs(x) >= strands for x in word):
        raise GridParseError("braid", f"Braid letters must lie in 1..{strands - 1}")
    if closure_components(word, strands) != 1:
        raise GridParseError("braid", f"Closure of braid {list(word)} is not a knot")

    m, length = strands, len(word)
    bottom = [Fraction(p - m) for p in range(m)]
    top = [Fraction(length + m - p) for p in range(m)]

    column: Dict[int, Fraction] = {s: Fraction(s) for s in range(m)}
    start_row: Dict[int, Fraction] = {s: bottom[s] for s in range(m)}
    at_position: List[int] = list(range(m))
    used: List[Fraction] = sorted(column.values())
    segments: List[Segment] = []

    for t, letter in enumerate(word, start=1):
        row = Fraction(t)
        a = abs(letter) - 1
        left, right = at_position[a], at_position[a + 1]
        if letter > 0:
            mover, anchor = right, column[left]
            lower = [x for x in used if x < anchor]
            new_column = (max(lower) + anchor) / 2 if lower else anchor - 1
        else:
            mover, anchor = left, column[right]
            above = [x for x in used if x > anchor]
            new_column = (anchor + min(above)) / 2 if above else anchor + 1
        segments.append((column[mover], start_row[mover], row))
        column[mover] = new_column
        start_row[mover] = row
        used.append(new_column)
        at_position[a], at_position[a + 1] = right, left

    rightmost = max(used)
    for p in range(m):
        strand = at_position[p]
        segments.append((column[strand], start_row[strand], top[p]))
        segments.append((rightmost + 1 + (m - 1 - p), bottom[p], top[p]))

    column_rank = {x: i for i, x in enumerate(sorted({s[0] for s in segments}), start=1)}
    row_keys = sorted({r for s in segments for r in s[1:]})
    row_rank = {r: i for i, r in enumerate(row_keys, start=1)}
    ordered = sorted(segments, key=lambda s: column_rank[s[0]])
    columns = tuple((row_rank[lo], row_rank[hi]) for _, lo, hi in ordered)
    logger.debug(f"Braid {list(word)} on {m} strands -> grid of size {len(columns)}")
    return GridDiagram(columns=columns)
