import json
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from plural_you.dataset import balance, dedup, deserialize, serialize, stratified_split
from plural_you.errors import (
    ConfigError,
    DataError,
    EmptyClassError,
    ParseError,
    SchemaError,
    TooSmallError,
)
from plural_you.instances import Domain, Plurality, dumps_instance

from conftest import make_balanced, make_instance


class TestDedup:
    def test_keeps_first_occurrence(self):
        a = make_instance("you rock", 0, Plurality.PLURAL, source_id="a")
        b = make_instance("you rock", 0, Plurality.PLURAL, source_id="b")
        c = make_instance("hey you", 1, Plurality.SINGULAR, source_id="c")
        assert dedup([a, b, c]) == [a, c]

    def test_empty(self):
        assert dedup([]) == []

    def test_same_text_different_label_kept(self):
        a = make_instance("you rock", 0, Plurality.PLURAL, source_id="a")
        b = make_instance("you rock", 0, Plurality.SINGULAR, source_id="b")
        assert dedup([a, b]) == [a, b]

    def test_planted_duplicates(self):
        instances = make_balanced(100)
        rng = random.Random(4)
        duplicated = list(instances)
        for copy in rng.sample(instances, 7):
            duplicated.insert(rng.randrange(len(duplicated)), copy)
        assert len(duplicated) == 107
        unique_keys = {(i.text, i.label) for i in duplicated}
        deduped = dedup(duplicated)
        assert len(deduped) == len(unique_keys) == 100


class TestBalance:
    def plural(self, n):
        return [
            make_instance(f"p{i} you win", 1, Plurality.PLURAL, source_id=f"p{i}")
            for i in range(n)
        ]

    def singular(self, n):
        return [
            make_instance(f"s{i} you win", 1, Plurality.SINGULAR, source_id=f"s{i}")
            for i in range(n)
        ]

    def test_majority_subsampled(self):
        merged = balance(self.plural(30), self.singular(40), seed=1)
        assert len(merged) == 60
        assert sum(1 for i in merged if i.label is Plurality.PLURAL) == 30

    def test_already_balanced_keeps_all(self):
        merged = balance(self.plural(5), self.singular(5), seed=1)
        assert len(merged) == 10

    def test_deterministic(self):
        a = balance(self.plural(20), self.singular(9), seed=5)
        b = balance(self.plural(20), self.singular(9), seed=5)
        assert [i.provenance.source_id for i in a] == [i.provenance.source_id for i in b]

    def test_empty_class_rejected(self):
        with pytest.raises(EmptyClassError):
            balance([], self.singular(3))

    def test_subsample_is_from_majority(self):
        merged = balance(self.plural(50), self.singular(10), seed=2)
        plural_kept = {i.provenance.source_id for i in merged if i.label is Plurality.PLURAL}
        assert len(plural_kept) == 10

    def test_corpus_scale_augmentation(self):
        merged = balance(self.plural(36_000), self.singular(40_000), seed=42)
        assert len(merged) == 72_000
        assert sum(1 for i in merged if i.label is Plurality.PLURAL) == 36_000


class TestSplit:
    @pytest.mark.parametrize(
        "n,expected",
        [(73703, (58963, 7370, 7370)), (14059, (11249, 1405, 1405)), (10, (8, 1, 1))],
    )
    def test_reference_partition_sizes(self, n, expected):
        bundle = stratified_split(make_balanced(n), seed=42)
        assert (len(bundle.train), len(bundle.dev), len(bundle.test)) == expected

    def test_too_small(self):
        with pytest.raises(TooSmallError):
            stratified_split(make_balanced(9))

    def test_bad_ratios(self):
        with pytest.raises(ConfigError):
            stratified_split(make_balanced(100), ratios=(0.5, 0.4, 0.2))

    def test_unbalanced_input_rejected(self):
        lopsided = make_balanced(50) + [
            make_instance(f"x{i} you", 1, Plurality.PLURAL, source_id=f"x{i}")
            for i in range(5)
        ]
        with pytest.raises(DataError):
            stratified_split(lopsided)

    def test_deterministic(self):
        a = stratified_split(make_balanced(200), seed=9)
        b = stratified_split(make_balanced(200), seed=9)
        for part in ("train", "dev", "test"):
            assert [i.provenance.source_id for i in a.partitions()[part]] == [
                i.provenance.source_id for i in b.partitions()[part]
            ]

    @settings(max_examples=30, deadline=None)
    @given(n=st.integers(min_value=10, max_value=4000), seed=st.integers(0, 2**32 - 1))
    def test_invariants_hold_for_any_size_and_seed(self, n, seed):
        instances = make_balanced(n)
        bundle = stratified_split(instances, seed=seed)
        bundle.validate()
        assert len(bundle.dev) == len(bundle.test) == math.floor(0.1 * n)
        assert bundle.size() == n
        union = {i.identity() for part in bundle.partitions().values() for i in part}
        assert union == {i.identity() for i in instances}

    def test_partition_class_difference_at_most_one(self):
        bundle = stratified_split(make_balanced(14059), seed=3)
        for part in bundle.partitions().values():
            n_plural = sum(1 for i in part if i.label is Plurality.PLURAL)
            assert abs(n_plural - (len(part) - n_plural)) <= 1


class TestSerialization:
    def test_round_trip(self, tmp_path):
        bundle = stratified_split(make_balanced(50), seed=7, domain_tag="twitter")
        serialize(bundle, tmp_path / "data")
        loaded = deserialize(tmp_path / "data")
        assert loaded == bundle

    def test_line_counts(self, tmp_path):
        bundle = stratified_split(make_balanced(120), seed=7, domain_tag="x")
        serialize(bundle, tmp_path / "data")
        total = 0
        for name in ("train", "dev", "test"):
            lines = (tmp_path / "data" / f"{name}.jsonl").read_text().splitlines()
            assert len(lines) == len(bundle.partitions()[name])
            assert all(line.startswith("{") for line in lines)  # header-free
            total += len(lines)
        assert total == 120

    def test_corpus_scale_line_count(self, tmp_path):
        bundle = stratified_split(make_balanced(73703), seed=42, domain_tag="twitter")
        serialize(bundle, tmp_path / "data")
        lines = sum(
            len((tmp_path / "data" / f"{name}.jsonl").read_text().splitlines())
            for name in ("train", "dev", "test")
        )
        assert lines == 73703

    def test_missing_label_is_schema_error_with_line(self, tmp_path):
        bundle = stratified_split(make_balanced(20), seed=7)
        serialize(bundle, tmp_path / "data")
        path = tmp_path / "data" / "dev.jsonl"
        lines = path.read_text().splitlines()
        broken = json.loads(lines[0])
        del broken["label"]
        lines[0] = json.dumps(broken)
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(SchemaError) as err:
            deserialize(tmp_path / "data")
        assert err.value.field == "label"
        assert err.value.line_number == 1

    def test_malformed_line_is_parse_error(self, tmp_path):
        bundle = stratified_split(make_balanced(20), seed=7)
        serialize(bundle, tmp_path / "data")
        path = tmp_path / "data" / "test.jsonl"
        content = path.read_text().splitlines()
        content[1] = "{not json"
        path.write_text("\n".join(content) + "\n")
        with pytest.raises(ParseError) as err:
            deserialize(tmp_path / "data")
        assert err.value.line_number == 2

    def test_count_mismatch_detected(self, tmp_path):
        bundle = stratified_split(make_balanced(20), seed=7)
        serialize(bundle, tmp_path / "data")
        path = tmp_path / "data" / "dev.jsonl"
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-1]) + "\n")
        with pytest.raises(SchemaError):
            deserialize(tmp_path / "data")

    def test_serialization_is_byte_stable(self, tmp_path):
        bundle = stratified_split(make_balanced(30), seed=7, domain_tag="t")
        serialize(bundle, tmp_path / "a")
        serialize(bundle, tmp_path / "b")
        for name in ("train.jsonl", "dev.jsonl", "test.jsonl", "metadata.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_unicode_survives_round_trip(self):
        from plural_you.instances import instance_from_dict

        instance = make_instance(
            "gracias, you amigo", 2, Plurality.SINGULAR,
            domain=Domain.EUROPARL, source_id="7",
            aligned_foreign_sentence="le agradezco a usted, señoría",
        )
        line = dumps_instance(instance)
        assert "señoría" in line
        assert instance_from_dict(json.loads(line)) == instance
