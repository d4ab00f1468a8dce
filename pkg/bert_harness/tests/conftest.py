import json
import random

import pytest

WORDS = (
    "morning", "window", "coffee", "river", "music", "table", "garden", "paper",
    "light", "street", "cloud", "stone", "dinner", "road", "letter", "winter",
)


def planted_cue_records(seed, n_per_class, cue_plural="together", cue_singular="alone"):
    """Instance records in the shared JSONL schema; one cue token after the
    target decides the label."""
    rng = random.Random(seed)
    records = []
    for i in range(2 * n_per_class):
        plural = i < n_per_class
        cue = cue_plural if plural else cue_singular
        left = rng.choices(WORDS, k=rng.randint(1, 4))
        right = rng.choices(WORDS, k=rng.randint(0, 3))
        records.append(
            {
                "text": " ".join(left + ["you", cue] + right),
                "target_token_index": len(left),
                "label": "plural" if plural else "singular",
                "domain": "twitter",
                "provenance": {"source_id": f"cue{i:05d}"},
            }
        )
    rng.shuffle(records)
    return records


def write_jsonl(path, records):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False) + "\n")
    return path


@pytest.fixture(scope="session")
def cue_dataset(tmp_path_factory):
    """train/dev/test JSONL for the planted-cue task."""
    base = tmp_path_factory.mktemp("cue_data")
    write_jsonl(base / "train.jsonl", planted_cue_records(5, 1000))
    write_jsonl(base / "dev.jsonl", planted_cue_records(6, 100))
    write_jsonl(base / "test.jsonl", planted_cue_records(7, 200))
    return base


@pytest.fixture(scope="session")
def tiny_encoder(tmp_path_factory, cue_dataset):
    from bert_harness.encoder import make_tiny_encoder

    out = tmp_path_factory.mktemp("encoder") / "tiny"
    return make_tiny_encoder(cue_dataset / "train.jsonl", out, seed=0)
