"""Fine-tune a pretrained encoder on the instance JSONL datasets.

Classification happens on the sequence-level pooled first-token
representation with a two-way head. The optimizer is AdamW at a fixed
learning rate (no schedule); per-epoch dev accuracy is logged to stderr and
recorded in the saved history. Inputs longer than max_sequence_length are
truncated from the right.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from .config import FinetuneConfig
from .data import Example, read_examples
from .errors import LoadError, ResourceError

_HISTORY_FILE = "history.json"
_CONFIG_FILE = "finetune_config.json"


def _load_encoder(name_or_dir: str, device):
    import torch
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(name_or_dir)
        model = AutoModelForSequenceClassification.from_pretrained(
            name_or_dir, num_labels=2
        )
    except OSError as exc:
        raise LoadError(f"cannot load encoder {name_or_dir!r}: {exc}")
    return tokenizer, model.to(torch.device(device))


def _batches(n, batch_size, generator=None):
    import torch

    order = (
        torch.randperm(n, generator=generator) if generator is not None else torch.arange(n)
    )
    for start in range(0, n, batch_size):
        yield order[start : start + batch_size]


def _encode(tokenizer, texts, max_length, device):
    encoded = tokenizer(
        texts,
        padding=True,
        truncation=True,
        max_length=max_length,
        return_tensors="pt",
    )
    return {k: v.to(device) for k, v in encoded.items() if k != "token_type_ids"}


def _accuracy(model, tokenizer, examples, config) -> float:
    import torch

    model.eval()
    correct = 0
    with torch.no_grad():
        for start in range(0, len(examples), 64):
            chunk = examples[start : start + 64]
            inputs = _encode(
                tokenizer,
                [e.text for e in chunk],
                config.max_sequence_length,
                next(model.parameters()).device,
            )
            predictions = model(**inputs).logits.argmax(dim=-1).tolist()
            correct += sum(1 for p, e in zip(predictions, chunk) if p == e.label)
    return correct / len(examples)


def _finetune_examples(
    train: list[Example],
    dev: list[Example],
    config: FinetuneConfig,
):
    """Shared training loop; returns (model, tokenizer, history)."""
    import torch

    tokenizer, model = _load_encoder(config.encoder_name, config.device)
    torch.manual_seed(config.seed)
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
    shuffler = torch.Generator().manual_seed(config.seed)
    labels_tensor = torch.tensor([e.label for e in train])
    history = {"train_loss": [], "dev_accuracy": []}
    try:
        for epoch in range(config.epochs):
            model.train()
            total_loss = 0.0
            n_batches = 0
            for batch in _batches(len(train), config.batch_size, shuffler):
                texts = [train[i].text for i in batch.tolist()]
                inputs = _encode(
                    tokenizer, texts, config.max_sequence_length,
                    next(model.parameters()).device,
                )
                output = model(**inputs, labels=labels_tensor[batch].to(
                    next(model.parameters()).device
                ))
                output.loss.backward()
                optimizer.step()
                optimizer.zero_grad()
                total_loss += output.loss.item()
                n_batches += 1
            dev_accuracy = _accuracy(model, tokenizer, dev, config)
            history["train_loss"].append(total_loss / max(1, n_batches))
            history["dev_accuracy"].append(dev_accuracy)
            print(
                f"epoch {epoch + 1}/{config.epochs}: "
                f"train loss {history['train_loss'][-1]:.4f}, "
                f"dev accuracy {dev_accuracy:.4f}",
                file=sys.stderr,
            )
    except RuntimeError as exc:
        if "out of memory" in str(exc).lower():
            raise ResourceError(
                "ran out of memory during fine-tuning; reduce --batch-size, "
                "shorten --max-seq-length, or pick a smaller encoder"
            )
        raise
    return model, tokenizer, history


def finetune(
    train_jsonl: str | Path,
    dev_jsonl: str | Path,
    config: FinetuneConfig = FinetuneConfig(),
    out_dir: str | Path = "finetuned-model",
) -> Path:
    """Train on train_jsonl, track dev accuracy, save everything to out_dir."""
    train = read_examples(train_jsonl)
    dev = read_examples(dev_jsonl)
    model, tokenizer, history = _finetune_examples(train, dev, config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out)
    tokenizer.save_pretrained(out)
    with open(out / _CONFIG_FILE, "w", encoding="utf-8") as f:
        json.dump(config.to_dict(), f, indent=2)
        f.write("\n")
    with open(out / _HISTORY_FILE, "w", encoding="utf-8") as f:
        json.dump(history, f, indent=2)
        f.write("\n")
    return out
