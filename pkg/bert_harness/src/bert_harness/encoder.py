"""Offline tiny-encoder builder.

Desk-scale runs and CI cannot fetch pretrained weights, so this builds a
randomly initialized miniature encoder whose WordPiece vocabulary is derived
from a training corpus. Smoke tests fine-tune it exactly like a hub
checkpoint: the resulting directory loads through from_pretrained.
"""

from __future__ import annotations

from collections import Counter
from pathlib import Path

from .data import read_examples

SPECIAL_TOKENS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]


def build_vocab(texts, max_size: int = 8000) -> dict[str, int]:
    """Specials plus the most frequent lowercased whitespace-split words."""
    counts = Counter()
    for text in texts:
        counts.update(text.lower().split())
    words = [w for w, _ in counts.most_common(max(0, max_size - len(SPECIAL_TOKENS)))]
    return {token: i for i, token in enumerate(SPECIAL_TOKENS + words)}


def make_tiny_encoder(
    train_jsonl: str | Path,
    out_dir: str | Path,
    hidden_size: int = 64,
    num_layers: int = 2,
    num_heads: int = 2,
    vocab_size: int = 8000,
    seed: int = 0,
) -> Path:
    """Random-init miniature encoder + corpus vocabulary, saved to a directory."""
    import torch
    from transformers import BertConfig, BertForSequenceClassification, BertTokenizer

    examples = read_examples(train_jsonl)
    vocab = build_vocab((e.text for e in examples), max_size=vocab_size)
    tokenizer = BertTokenizer(vocab=vocab, do_lower_case=True)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=hidden_size,
        num_hidden_layers=num_layers,
        num_attention_heads=num_heads,
        intermediate_size=hidden_size * 2,
        max_position_embeddings=512,
        num_labels=2,
    )
    torch.manual_seed(seed)
    model = BertForSequenceClassification(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tokenizer.save_pretrained(out)
    model.save_pretrained(out)
    return out
