"""Feature-hashed logistic regression baseline and the transfer evaluation grid.

Features are lowercased unigrams and bigrams in a window around the target
token, tagged with side and distance bucket, signed-hashed into a fixed-size
weight vector. Training is seeded-shuffle SGD on the L2-regularized logistic
loss with a 1/sqrt(t) learning-rate decay.

The hash is FNV-1a (64-bit) over the UTF-8 feature string followed by the
splitmix64 finalizer; the index is the hash modulo the table size and the
top hash bit gives the feature's sign.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .dataset import DatasetBundle
from .errors import ConfigError, DegenerateDataError, SchemaError, TooSmallError
from .instances import LabeledInstance, Plurality
from .tokenizer import token_strings

_MASK64 = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

_MODEL_FORMAT = "plural-you-model"
_MODEL_VERSION = 1


def hash_feature(name: str) -> int:
    """FNV-1a then splitmix64 finalizer; stable across runs and platforms."""
    h = _FNV_OFFSET
    for byte in name.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    h ^= h >> 30
    h = (h * 0xBF58476D1CE4E5B9) & _MASK64
    h ^= h >> 27
    h = (h * 0x94D049BB133111EB) & _MASK64
    h ^= h >> 31
    return h


def _distance_bucket(distance: int) -> str:
    return str(distance) if distance < 3 else "3+"


def _length_bucket(n_tokens: int) -> str:
    for upper, name in ((4, "1-4"), (8, "5-8"), (16, "9-16"), (32, "17-32")):
        if n_tokens <= upper:
            return name
    return "33+"


def featurize(
    instance: LabeledInstance, window: int = 5, hash_bits: int = 20
) -> dict[int, float]:
    """Signed-hashed context features for the target token.

    Raises IndexError if the target index does not address a token.
    """
    tokens = [t.casefold() for t in token_strings(instance.text)]
    target = instance.target_token_index
    if not 0 <= target < len(tokens):
        raise IndexError(
            f"target index {target} out of range for {len(tokens)} tokens"
        )
    dim = 1 << hash_bits
    names = [f"len|{_length_bucket(len(tokens))}"]
    lo, hi = max(0, target - window), min(len(tokens), target + window + 1)
    for j in range(lo, hi):
        if j == target:
            continue
        side = "L" if j < target else "R"
        bucket = _distance_bucket(abs(j - target))
        names.append(f"u|{side}|{bucket}|{tokens[j]}")
        if j + 1 < hi and j + 1 != target:
            pair_side = "L" if j + 1 < target else "R"
            pair_bucket = _distance_bucket(min(abs(j - target), abs(j + 1 - target)))
            names.append(f"b|{pair_side}|{pair_bucket}|{tokens[j]}_{tokens[j + 1]}")
    features: dict[int, float] = {}
    for name in names:
        h = hash_feature(name)
        index = h % dim
        sign = 1.0 if (h >> 63) == 0 else -1.0
        features[index] = features.get(index, 0.0) + sign
    return features


@dataclass(frozen=True)
class Hyperparams:
    window: int = 5
    hash_bits: int = 20
    learning_rate: float = 0.1
    l2: float = 1e-5
    epochs: int = 5
    seed: int = 42

    def __post_init__(self):
        if self.window < 0 or self.hash_bits < 1 or self.epochs < 1:
            raise ConfigError(f"invalid hyperparameters: {self}")
        if self.learning_rate <= 0 or self.l2 < 0:
            raise ConfigError(f"invalid hyperparameters: {self}")


@dataclass
class Model:
    weights: np.ndarray  # dense float64, length 2**hash_bits
    bias: float
    hyperparams: Hyperparams
    training_domain: str
    epoch_losses: list[float]

    def decision(self, features: Mapping[int, float]) -> float:
        if not features:
            return self.bias
        indices = np.fromiter(features.keys(), dtype=np.int64, count=len(features))
        values = np.fromiter(features.values(), dtype=np.float64, count=len(features))
        return float(self.weights[indices] @ values) + self.bias

    def save(self, path: str | Path) -> None:
        nonzero = np.flatnonzero(self.weights)
        obj = {
            "format": _MODEL_FORMAT,
            "version": _MODEL_VERSION,
            "hyperparams": asdict(self.hyperparams),
            "training_domain": self.training_domain,
            "bias": self.bias,
            "epoch_losses": self.epoch_losses,
            "weights": {
                "indices": nonzero.tolist(),
                "values": self.weights[nonzero].tolist(),
            },
        }
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(obj, f, ensure_ascii=False)
            f.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "Model":
        with open(path, encoding="utf-8") as f:
            obj = json.load(f)
        if obj.get("format") != _MODEL_FORMAT or obj.get("version") != _MODEL_VERSION:
            raise SchemaError("format", f"not a recognized model file: {path}")
        hp = Hyperparams(**obj["hyperparams"])
        weights = np.zeros(1 << hp.hash_bits)
        indices = obj["weights"]["indices"]
        values = obj["weights"]["values"]
        try:
            weights[indices] = values
        except (IndexError, ValueError) as exc:
            raise SchemaError("weights", f"inconsistent sparse weights: {exc}")
        return cls(
            weights=weights,
            bias=float(obj["bias"]),
            hyperparams=hp,
            training_domain=obj.get("training_domain", ""),
            epoch_losses=list(obj.get("epoch_losses", [])),
        )


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def _softplus(z: float) -> float:
    # log(1 + exp(z)) without overflow
    if z > 35:
        return z
    if z < -35:
        return 0.0
    return math.log1p(math.exp(z))


def _as_arrays(
    features: Iterable[Mapping[int, float]]
) -> list[tuple[np.ndarray, np.ndarray]]:
    out = []
    for vector in features:
        idx = np.fromiter(vector.keys(), dtype=np.int64, count=len(vector))
        val = np.fromiter(vector.values(), dtype=np.float64, count=len(vector))
        out.append((idx, val))
    return out


def regularized_loss_and_grad(
    weights: np.ndarray,
    bias: float,
    vectors: Sequence[Mapping[int, float]],
    labels: Sequence[int],
    l2: float,
) -> tuple[float, np.ndarray, float]:
    """Full-batch loss, weight gradient, and bias gradient.

    loss = mean_i log(1 + exp(-y_i (w.x_i + b))) + l2/2 * ||w||^2 with
    y in {-1, +1}; the bias is not regularized.
    """
    n = len(vectors)
    grad_w = np.zeros_like(weights)
    grad_b = 0.0
    loss = 0.0
    for vector, y in zip(vectors, labels):
        idx = np.fromiter(vector.keys(), dtype=np.int64, count=len(vector))
        val = np.fromiter(vector.values(), dtype=np.float64, count=len(vector))
        z = float(weights[idx] @ val) + bias if len(idx) else bias
        loss += _softplus(-y * z)
        g = -y * _sigmoid(-y * z)
        if len(idx):
            np.add.at(grad_w, idx, g * val)
        grad_b += g
    loss = loss / n + 0.5 * l2 * float(weights @ weights)
    grad_w = grad_w / n + l2 * weights
    return loss, grad_w, grad_b / n


def _label_sign(label: Plurality) -> int:
    return 1 if label is Plurality.PLURAL else -1


def train(
    train_set: Sequence[LabeledInstance],
    hyperparams: Hyperparams = Hyperparams(),
    training_domain: str = "",
) -> Model:
    """Seeded-shuffle SGD; returns a model with finite weights.

    The learning rate decays as lr / sqrt(t) over global steps; the L2 term
    is applied through a lazily maintained scale factor so each update only
    touches the active features.
    """
    if not train_set:
        raise DegenerateDataError("training set is empty")
    labels = [_label_sign(i.label) for i in train_set]
    if len(set(labels)) < 2:
        raise DegenerateDataError("training set has a single class")
    hp = hyperparams
    vectors = _as_arrays(
        featurize(i, hp.window, hp.hash_bits) for i in train_set
    )
    dim = 1 << hp.hash_bits
    v = np.zeros(dim)
    scale = 1.0
    bias = 0.0
    rng = random.Random(hp.seed)
    order = list(range(len(train_set)))
    epoch_losses: list[float] = []
    t = 0
    for _ in range(hp.epochs):
        rng.shuffle(order)
        running = 0.0
        for i in order:
            t += 1
            eta = hp.learning_rate / math.sqrt(t)
            idx, val = vectors[i]
            y = labels[i]
            z = scale * float(v[idx] @ val) + bias if len(idx) else bias
            running += _softplus(-y * z)
            scale *= 1.0 - eta * hp.l2
            if scale < 1e-9:
                v *= scale
                scale = 1.0
            g = -y * _sigmoid(-y * z)
            if g != 0.0 and len(idx):
                v[idx] -= (eta * g / scale) * val
            bias -= eta * g
        weights = scale * v
        epoch_losses.append(
            running / len(train_set) + 0.5 * hp.l2 * float(weights @ weights)
        )
    weights = scale * v
    if not np.all(np.isfinite(weights)) or not math.isfinite(bias):
        raise DegenerateDataError("training diverged to non-finite weights")
    return Model(
        weights=weights,
        bias=bias,
        hyperparams=hp,
        training_domain=training_domain,
        epoch_losses=epoch_losses,
    )


def predict(model: Model, instance: LabeledInstance) -> tuple[Plurality, float]:
    """Plural probability via the sigmoid; ties at exactly 0.5 go to plural."""
    features = featurize(
        instance, model.hyperparams.window, model.hyperparams.hash_bits
    )
    probability = _sigmoid(model.decision(features))
    label = Plurality.PLURAL if probability >= 0.5 else Plurality.SINGULAR
    return label, probability


def evaluate(model: Model, test_set: Sequence[LabeledInstance]) -> float:
    """Plain accuracy: fraction of correct predictions."""
    if not test_set:
        raise TooSmallError("test set is empty")
    correct = sum(1 for i in test_set if predict(model, i)[0] is i.label)
    return correct / len(test_set)


_MATRIX_ROWS = ("europarl", "twitter", "joint")
_MATRIX_COLS = ("europarl", "twitter")


@dataclass
class EvalMatrix:
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    accuracy: list[list[float]]

    def __post_init__(self):
        if len(self.accuracy) != len(self.rows) or any(
            len(row) != len(self.cols) for row in self.accuracy
        ):
            raise ConfigError("accuracy grid does not match rows x cols")
        for row in self.accuracy:
            for cell in row:
                if not 0.0 <= cell <= 1.0:
                    raise ConfigError(f"accuracy {cell} outside [0, 1]")

    def cell(self, row: str, col: str) -> float:
        return self.accuracy[self.rows.index(row)][self.cols.index(col)]

    def to_dict(self) -> dict:
        return {
            "rows": list(self.rows),
            "cols": list(self.cols),
            "accuracy": self.accuracy,
            "percent": [[round(100 * a, 1) for a in row] for row in self.accuracy],
        }

    def format_table(self) -> str:
        width = max(len(name) for name in self.rows + ("train \\ test",)) + 2
        col_width = max(max(len(c) for c in self.cols), 6) + 2
        lines = [
            "train \\ test".ljust(width)
            + "".join(c.rjust(col_width) for c in self.cols)
        ]
        for name, row in zip(self.rows, self.accuracy):
            lines.append(
                name.ljust(width)
                + "".join(f"{100 * a:.1f}".rjust(col_width) for a in row)
            )
        return "\n".join(lines) + "\n"


def eval_matrix(
    bundles: Mapping[str, DatasetBundle],
    hyperparams: Hyperparams = Hyperparams(),
) -> EvalMatrix:
    """Train europarl / twitter / joint rows, evaluate on both test partitions."""
    if set(bundles) != set(_MATRIX_COLS):
        raise ConfigError(
            f"expected corpora named {sorted(_MATRIX_COLS)}, got {sorted(bundles)}"
        )
    train_sets = {
        "europarl": bundles["europarl"].train,
        "twitter": bundles["twitter"].train,
        "joint": bundles["europarl"].train + bundles["twitter"].train,
    }
    grid = []
    for row in _MATRIX_ROWS:
        model = train(train_sets[row], hyperparams, training_domain=row)
        grid.append([evaluate(model, bundles[col].test) for col in _MATRIX_COLS])
    return EvalMatrix(rows=_MATRIX_ROWS, cols=_MATRIX_COLS, accuracy=grid)
