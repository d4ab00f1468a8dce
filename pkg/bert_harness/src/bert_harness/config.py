"""Fine-tuning configuration for the encoder harness."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class FinetuneConfig:
    learning_rate: float = 2e-5
    batch_size: int = 24
    epochs: int = 10
    encoder_name: str = "bert-base-uncased"
    max_sequence_length: int = 128
    seed: int = 42
    device: str = "cpu"

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.max_sequence_length < 8:
            raise ConfigError(
                f"max_sequence_length must be >= 8, got {self.max_sequence_length}"
            )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> "FinetuneConfig":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in obj.items() if k in known})
