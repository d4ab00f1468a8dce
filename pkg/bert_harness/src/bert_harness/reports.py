"""Evaluation report formatting, field-compatible with the baseline evaluator.

The JSON keys (rows/cols/accuracy/percent) and the plain-text table layout
match the baseline classifier's reports exactly so the two are
diff-comparable.
"""

from __future__ import annotations

MATRIX_ROWS = ("europarl", "twitter", "joint")
MATRIX_COLS = ("europarl", "twitter")


def report_dict(accuracy: list[list[float]]) -> dict:
    return {
        "rows": list(MATRIX_ROWS),
        "cols": list(MATRIX_COLS),
        "accuracy": accuracy,
        "percent": [[round(100 * a, 1) for a in row] for row in accuracy],
    }


def format_table(accuracy: list[list[float]]) -> str:
    width = max(len(name) for name in MATRIX_ROWS + ("train \\ test",)) + 2
    col_width = max(max(len(c) for c in MATRIX_COLS), 6) + 2
    lines = [
        "train \\ test".ljust(width) + "".join(c.rjust(col_width) for c in MATRIX_COLS)
    ]
    for name, row in zip(MATRIX_ROWS, accuracy):
        lines.append(
            name.ljust(width) + "".join(f"{100 * a:.1f}".rjust(col_width) for a in row)
        )
    return "\n".join(lines) + "\n"
