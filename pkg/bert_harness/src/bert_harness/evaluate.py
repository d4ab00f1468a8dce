"""Evaluate saved encoders and fill the train-corpus x test-corpus grid."""

from __future__ import annotations

import json
from pathlib import Path

from .config import FinetuneConfig
from .data import ID_TO_LABEL, read_examples
from .errors import ConfigError, LoadError
from .finetune import _accuracy, _finetune_examples, _load_encoder
from .reports import MATRIX_COLS, MATRIX_ROWS, format_table, report_dict


def _config_for(model_dir: Path, device: str) -> FinetuneConfig:
    path = model_dir / "finetune_config.json"
    if path.exists():
        with open(path, encoding="utf-8") as f:
            return FinetuneConfig.from_dict({**json.load(f), "device": device})
    return FinetuneConfig(device=device)


def evaluate_encoder(
    model_dir: str | Path, test_jsonl: str | Path, device: str = "cpu"
) -> float:
    """Accuracy of a saved model directory on a test JSONL."""
    model_dir = Path(model_dir)
    if not (model_dir / "config.json").exists():
        raise LoadError(f"no model found at {model_dir}")
    tokenizer, model = _load_encoder(str(model_dir), device)
    examples = read_examples(test_jsonl)
    if not examples:
        raise ConfigError(f"test file {test_jsonl} is empty")
    return _accuracy(model, tokenizer, examples, _config_for(model_dir, device))


def predict_labels(
    model_dir: str | Path, texts: list[str], device: str = "cpu"
) -> list[str]:
    """Predicted label strings for raw texts, using a saved model directory."""
    import torch

    model_dir = Path(model_dir)
    if not (model_dir / "config.json").exists():
        raise LoadError(f"no model found at {model_dir}")
    tokenizer, model = _load_encoder(str(model_dir), device)
    config = _config_for(model_dir, device)
    model.eval()
    out = []
    with torch.no_grad():
        for start in range(0, len(texts), 64):
            chunk = texts[start : start + 64]
            encoded = tokenizer(
                chunk,
                padding=True,
                truncation=True,
                max_length=config.max_sequence_length,
                return_tensors="pt",
            )
            encoded = {k: v for k, v in encoded.items() if k != "token_type_ids"}
            predictions = model(**encoded).logits.argmax(dim=-1).tolist()
            out.extend(ID_TO_LABEL[p] for p in predictions)
    return out


def eval_matrix(
    dataset_dirs: dict[str, str | Path],
    config: FinetuneConfig = FinetuneConfig(),
    out_dir: str | Path | None = None,
) -> dict:
    """Fine-tune europarl / twitter / joint rows and evaluate on both tests.

    dataset_dirs maps corpus name to a directory holding train/dev/test.jsonl
    (the dataset layout written by the extraction pipeline).
    """
    if set(dataset_dirs) != set(MATRIX_COLS):
        raise ConfigError(
            f"expected corpora named {sorted(MATRIX_COLS)}, got {sorted(dataset_dirs)}"
        )
    splits = {}
    for name, directory in dataset_dirs.items():
        directory = Path(directory)
        splits[name] = {
            part: read_examples(directory / f"{part}.jsonl")
            for part in ("train", "dev", "test")
        }
    rows = {
        "europarl": (splits["europarl"]["train"], splits["europarl"]["dev"]),
        "twitter": (splits["twitter"]["train"], splits["twitter"]["dev"]),
        "joint": (
            splits["europarl"]["train"] + splits["twitter"]["train"],
            splits["europarl"]["dev"] + splits["twitter"]["dev"],
        ),
    }
    accuracy = []
    for row in MATRIX_ROWS:
        train, dev = rows[row]
        model, tokenizer, _ = _finetune_examples(train, dev, config)
        accuracy.append(
            [
                _accuracy(model, tokenizer, splits[col]["test"], config)
                for col in MATRIX_COLS
            ]
        )
    report = report_dict(accuracy)
    report["config"] = config.to_dict()
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "eval_matrix.json", "w", encoding="utf-8") as f:
            json.dump(report, f, ensure_ascii=False, indent=2)
            f.write("\n")
        with open(out / "eval_matrix.txt", "w", encoding="utf-8") as f:
            f.write(format_table(accuracy))
    return report
