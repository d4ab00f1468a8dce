"""Deduplicate, balance, split, and serialize labeled instances.

The split rule is floor-based: dev and test each get floor(ratio * N)
instances, train gets the remainder. Within dev the plural class absorbs the
odd instance, within test the singular class does, which keeps every
partition's class difference at most one and the train partition balanced to
within the input's own +/-1.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigError, DataError, EmptyClassError, SchemaError, TooSmallError
from .instances import LabeledInstance, Plurality, read_instances, write_instances

_METADATA_FORMAT = "plural-you-dataset"
_METADATA_VERSION = 1
PARTITIONS = ("train", "dev", "test")


def dedup(instances: Iterable[LabeledInstance]) -> list[LabeledInstance]:
    """Drop exact (text, label) duplicates, keeping the first occurrence."""
    seen: set[tuple[str, Plurality]] = set()
    out = []
    for instance in instances:
        key = (instance.text, instance.label)
        if key in seen:
            continue
        seen.add(key)
        out.append(instance)
    return out


def balance(
    plural: Sequence[LabeledInstance],
    singular: Sequence[LabeledInstance],
    seed: int = 42,
) -> list[LabeledInstance]:
    """Subsample the majority class to the minority size and shuffle the union."""
    if not plural or not singular:
        empty = "plural" if not plural else "singular"
        raise EmptyClassError(f"cannot balance: {empty} class is empty")
    rng = random.Random(seed)
    plural, singular = list(plural), list(singular)
    k = min(len(plural), len(singular))
    if len(plural) > k:
        rng.shuffle(plural)
        plural = plural[:k]
    elif len(singular) > k:
        rng.shuffle(singular)
        singular = singular[:k]
    merged = plural + singular
    rng.shuffle(merged)
    return merged


@dataclass
class DatasetBundle:
    train: list[LabeledInstance]
    dev: list[LabeledInstance]
    test: list[LabeledInstance]
    seed: int
    domain_tag: str

    def partitions(self) -> dict[str, list[LabeledInstance]]:
        return {"train": self.train, "dev": self.dev, "test": self.test}

    def size(self) -> int:
        return len(self.train) + len(self.dev) + len(self.test)

    def validate(self) -> None:
        seen: dict[tuple, str] = {}
        for name, part in self.partitions().items():
            for instance in part:
                key = instance.identity()
                if key in seen and seen[key] != name:
                    raise DataError(
                        f"instance {key} appears in both {seen[key]} and {name}"
                    )
                seen[key] = name
            n_plural = sum(1 for i in part if i.label is Plurality.PLURAL)
            n_singular = len(part) - n_plural
            if abs(n_plural - n_singular) > 1:
                raise DataError(
                    f"partition {name} is unbalanced: {n_plural} plural vs {n_singular} singular"
                )


def stratified_split(
    instances: Sequence[LabeledInstance],
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 42,
    domain_tag: str = "",
) -> DatasetBundle:
    """Seeded per-class shuffle, then floor-rule assignment to dev/test/train."""
    if len(ratios) != 3 or any(r < 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ConfigError(f"ratios {ratios} must be three non-negative numbers summing to 1")
    n = len(instances)
    if n < 10:
        raise TooSmallError(f"need at least 10 instances to split, got {n}")
    plural = [i for i in instances if i.label is Plurality.PLURAL]
    singular = [i for i in instances if i.label is Plurality.SINGULAR]
    if abs(len(plural) - len(singular)) > 1:
        raise DataError(
            f"split requires classes balanced to within one: "
            f"{len(plural)} plural vs {len(singular)} singular"
        )
    dev_n = math.floor(ratios[1] * n)
    test_n = math.floor(ratios[2] * n)
    dev_p, dev_s = (dev_n + 1) // 2, dev_n // 2
    test_p, test_s = test_n // 2, (test_n + 1) // 2
    if dev_p + test_p > len(plural) or dev_s + test_s > len(singular):
        raise TooSmallError(f"classes too small for ratios {ratios} at n={n}")
    rng = random.Random(seed)
    rng.shuffle(plural)
    rng.shuffle(singular)
    dev = plural[:dev_p] + singular[:dev_s]
    test = plural[dev_p : dev_p + test_p] + singular[dev_s : dev_s + test_s]
    train = plural[dev_p + test_p :] + singular[dev_s + test_s :]
    rng.shuffle(dev)
    rng.shuffle(test)
    rng.shuffle(train)
    bundle = DatasetBundle(train=train, dev=dev, test=test, seed=seed, domain_tag=domain_tag)
    bundle.validate()
    return bundle


def serialize(bundle: DatasetBundle, destination: str | Path) -> dict[str, Path]:
    """Write train/dev/test JSONL plus metadata.json into a directory."""
    dest = Path(destination)
    dest.mkdir(parents=True, exist_ok=True)
    paths = {}
    class_counts = {}
    for name, part in bundle.partitions().items():
        path = dest / f"{name}.jsonl"
        write_instances(path, part)
        paths[name] = path
        n_plural = sum(1 for i in part if i.label is Plurality.PLURAL)
        class_counts[name] = {"plural": n_plural, "singular": len(part) - n_plural}
    metadata = {
        "format": _METADATA_FORMAT,
        "version": _METADATA_VERSION,
        "seed": bundle.seed,
        "domain_tag": bundle.domain_tag,
        "counts": {name: len(part) for name, part in bundle.partitions().items()},
        "class_counts": class_counts,
    }
    meta_path = dest / "metadata.json"
    with open(meta_path, "w", encoding="utf-8") as f:
        json.dump(metadata, f, ensure_ascii=False, indent=2)
        f.write("\n")
    paths["metadata"] = meta_path
    return paths


def deserialize(source: str | Path) -> DatasetBundle:
    """Load a bundle directory written by :func:`serialize`."""
    src = Path(source)
    meta_path = src / "metadata.json"
    if not meta_path.exists():
        raise SchemaError("metadata.json", f"missing in {src}")
    with open(meta_path, encoding="utf-8") as f:
        try:
            metadata = json.load(f)
        except json.JSONDecodeError as exc:
            raise SchemaError("metadata.json", str(exc))
    if metadata.get("format") != _METADATA_FORMAT:
        raise SchemaError("format", f"not a dataset directory: {src}")
    parts = {}
    for name in PARTITIONS:
        path = src / f"{name}.jsonl"
        if not path.exists():
            raise SchemaError(name, f"partition file missing: {path}")
        parts[name] = read_instances(path)
        expected = metadata.get("counts", {}).get(name)
        if expected is not None and expected != len(parts[name]):
            raise SchemaError(
                name, f"metadata says {expected} instances, file has {len(parts[name])}"
            )
    return DatasetBundle(
        train=parts["train"],
        dev=parts["dev"],
        test=parts["test"],
        seed=metadata.get("seed", 0),
        domain_tag=metadata.get("domain_tag", ""),
    )
