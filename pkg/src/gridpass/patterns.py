"""Spatial arrangement taxonomy over occupied grid cells.

Classifies the shape users trace with their placements. Template families,
largest-match-wins, and the tie precedence below; anything without a template
instance of at least 3 cells is Undefined.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

MIN_PATTERN_SIZE = 3


class PatternKind(str, Enum):
    HORIZONTAL_LINE = "HorizontalLine"
    L_SHAPE = "LShape"
    DIAGONAL = "Diagonal"
    SQUARE_2X2 = "Square2x2"
    SQUARE_3X3 = "Square3x3"
    UNDEFINED = "Undefined"


# Size ties resolve in this order (lower wins).
PRECEDENCE: dict[PatternKind, int] = {
    PatternKind.HORIZONTAL_LINE: 0,
    PatternKind.L_SHAPE: 1,
    PatternKind.DIAGONAL: 2,
    PatternKind.SQUARE_2X2: 3,
    PatternKind.SQUARE_3X3: 4,
}


@dataclass(frozen=True)
class PatternClass:
    kind: PatternKind
    matched_size: int


def classify_pattern(cells: Iterable[int], rows: int, cols: int) -> PatternClass:
    """Classify occupied cells by their largest matching template instance.

    Templates (a candidate matches when all its cells are occupied):

    * HorizontalLine: >= 3 consecutive cells in one row.
    * Diagonal: >= 3 cells stepping (row+1, col+1) or (row+1, col-1).
    * LShape: a horizontal and a vertical segment (each >= 2 consecutive
      cells) sharing exactly one endpoint; size is their cell union.
    * Square2x2 / Square3x3: a fully occupied 2x2 or 3x3 block.

    The largest matched instance wins; equal sizes fall back to the
    precedence order HorizontalLine > LShape > Diagonal > Square2x2 >
    Square3x3. A lone vertical run matches nothing and is Undefined.
    """
    if rows < 1 or cols < 1:
        raise ValueError("grid must have at least one row and one column")
    cell_list = sorted(set(cells))
    for cell in cell_list:
        if not (0 <= cell < rows * cols):
            raise ValueError(f"cell {cell} outside the {rows}x{cols} grid")
    occupied = {(c // cols, c % cols) for c in cell_list}

    best: tuple[int, int] | None = None  # (size, -precedence) to maximize
    best_kind = PatternKind.UNDEFINED
    best_size = 0

    def offer(kind: PatternKind, size: int) -> None:
        nonlocal best, best_kind, best_size
        if size < MIN_PATTERN_SIZE:
            return
        key = (size, -PRECEDENCE[kind])
        if best is None or key > best:
            best = key
            best_kind = kind
            best_size = size

    def run_length(r: int, c: int, dr: int, dc: int) -> int:
        length = 0
        while (r, c) in occupied:
            length += 1
            r += dr
            c += dc
        return length

    # Maximal horizontal runs (start = no occupied cell to the left).
    for r, c in occupied:
        if (r, c - 1) not in occupied:
            offer(PatternKind.HORIZONTAL_LINE, run_length(r, c, 0, 1))

    # Maximal diagonal runs, both downward directions.
    for dr, dc in ((1, 1), (1, -1)):
        for r, c in occupied:
            if (r - dr, c - dc) not in occupied:
                offer(PatternKind.DIAGONAL, run_length(r, c, dr, dc))

    # L-shapes: treat each occupied cell as the corner; the best arms are the
    # longest horizontal and vertical runs leaving it (each needs >= 2 cells).
    for r, c in occupied:
        horizontal_arm = max(run_length(r, c, 0, 1), run_length(r, c, 0, -1))
        vertical_arm = max(run_length(r, c, 1, 0), run_length(r, c, -1, 0))
        if horizontal_arm >= 2 and vertical_arm >= 2:
            offer(PatternKind.L_SHAPE, horizontal_arm + vertical_arm - 1)

    # Fully occupied square blocks.
    for size, kind in ((2, PatternKind.SQUARE_2X2), (3, PatternKind.SQUARE_3X3)):
        for r in range(rows - size + 1):
            for c in range(cols - size + 1):
                block = {(r + i, c + j) for i in range(size) for j in range(size)}
                if block <= occupied:
                    offer(kind, size * size)

    if best is None:
        return PatternClass(PatternKind.UNDEFINED, 0)
    return PatternClass(best_kind, best_size)
