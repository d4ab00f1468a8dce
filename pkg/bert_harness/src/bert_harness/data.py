"""Reading the shared instance JSONL schema.

Only "text" and "label" are needed here; the other schema fields
(target_token_index, domain, provenance) are tolerated and ignored, so any
file produced by the extraction pipeline loads as-is.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import SchemaError

LABEL_TO_ID = {"singular": 0, "plural": 1}
ID_TO_LABEL = {v: k for k, v in LABEL_TO_ID.items()}


@dataclass(frozen=True)
class Example:
    text: str
    label: int  # 0 singular, 1 plural


def read_examples(path: str | Path) -> list[Example]:
    examples = []
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError("line", str(exc), line_number=line_number)
            if "text" not in obj:
                raise SchemaError("text", "missing", line_number=line_number)
            if "label" not in obj:
                raise SchemaError("label", "missing", line_number=line_number)
            label = obj["label"]
            if label not in LABEL_TO_ID:
                raise SchemaError(
                    "label",
                    f"expected singular/plural, got {label!r}",
                    line_number=line_number,
                )
            examples.append(Example(text=obj["text"], label=LABEL_TO_ID[label]))
    return examples
