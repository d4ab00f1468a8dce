"""Pretrained-encoder fine-tuning harness for the plural-you JSONL datasets."""

from .config import FinetuneConfig

__version__ = "0.1.0"

__all__ = ["FinetuneConfig", "__version__"]

try:  # keep library output clean; progress bars are noise in logs and tests
    from transformers.utils import logging as _hf_logging

    _hf_logging.disable_progress_bar()
except Exception:  # pragma: no cover - transformers layout changes
    pass
