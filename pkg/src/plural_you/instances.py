"""Core record types and the JSONL schema every pipeline stage shares.

An instance line looks like::

    {"text": "...", "target_token_index": 3, "label": "plural",
     "domain": "twitter", "provenance": {"source_id": "...", ...}}

Optional provenance fields are omitted when absent. Key order is fixed so
that serialization is byte-stable for identical inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Iterator

from .errors import ParseError, SchemaError
from .tokenizer import tokenize


class Plurality(Enum):
    SINGULAR = "singular"
    PLURAL = "plural"


class Domain(Enum):
    TWITTER = "twitter"
    EUROPARL = "europarl"


@dataclass(frozen=True)
class Utterance:
    """A raw input text unit: a tweet or a transcript sentence."""

    id: str
    author_id: str
    text: str
    lat: float | None = None
    lon: float | None = None
    domain: Domain = Domain.TWITTER

    def __post_init__(self):
        if not self.text.strip():
            raise SchemaError("text", "empty after trimming")
        if self.lat is not None and not -90.0 <= self.lat <= 90.0:
            raise SchemaError("lat", f"{self.lat} outside [-90, 90]")
        if self.lon is not None and not -180.0 <= self.lon <= 180.0:
            raise SchemaError("lon", f"{self.lon} outside [-180, 180]")


@dataclass(frozen=True)
class Provenance:
    source_id: str
    author_id: str | None = None
    original_surface: str | None = None
    geo: tuple[float, float] | None = None  # (lat, lon)
    aligned_foreign_sentence: str | None = None


@dataclass(frozen=True)
class LabeledInstance:
    """A text with one "you" token under judgment and its plurality label."""

    text: str
    target_token_index: int
    label: Plurality
    domain: Domain
    provenance: Provenance

    def __post_init__(self):
        if not self.text.strip():
            raise SchemaError("text", "empty after trimming")
        if self.target_token_index < 0:
            raise SchemaError("target_token_index", "negative")

    def validate(self) -> None:
        """Check the invariants that require tokenizing the text."""
        tokens = tokenize(self.text)
        if self.target_token_index >= len(tokens):
            raise SchemaError(
                "target_token_index",
                f"{self.target_token_index} out of range for {len(tokens)} tokens",
            )
        target = tokens[self.target_token_index]
        if target.text.casefold() != "you":
            raise SchemaError(
                "target_token_index",
                f"token {target.text!r} at index {self.target_token_index} is not 'you'",
            )
        if self.label is Plurality.PLURAL and self.domain is Domain.TWITTER:
            surface = self.provenance.original_surface
            if surface is None or surface.casefold() == "you":
                raise SchemaError(
                    "provenance.original_surface",
                    "plural twitter instances must record the pre-mask surface",
                )

    def identity(self) -> tuple[str, str, int]:
        """Key used for partition-disjointness checks."""
        return (self.domain.value, self.provenance.source_id, self.target_token_index)


def instance_to_dict(instance: LabeledInstance) -> dict[str, Any]:
    prov = instance.provenance
    prov_obj: dict[str, Any] = {"source_id": prov.source_id}
    if prov.author_id is not None:
        prov_obj["author_id"] = prov.author_id
    if prov.original_surface is not None:
        prov_obj["original_surface"] = prov.original_surface
    if prov.geo is not None:
        prov_obj["geo"] = {"lat": prov.geo[0], "lon": prov.geo[1]}
    if prov.aligned_foreign_sentence is not None:
        prov_obj["aligned_foreign_sentence"] = prov.aligned_foreign_sentence
    return {
        "text": instance.text,
        "target_token_index": instance.target_token_index,
        "label": instance.label.value,
        "domain": instance.domain.value,
        "provenance": prov_obj,
    }


def _require(obj: dict, field: str, line_number: int | None):
    if field not in obj:
        raise SchemaError(field, "missing", line_number=line_number)
    return obj[field]


def instance_from_dict(obj: dict, line_number: int | None = None) -> LabeledInstance:
    text = _require(obj, "text", line_number)
    index = _require(obj, "target_token_index", line_number)
    label_raw = _require(obj, "label", line_number)
    domain_raw = _require(obj, "domain", line_number)
    prov_obj = _require(obj, "provenance", line_number)
    if not isinstance(text, str):
        raise SchemaError("text", "must be a string", line_number=line_number)
    if not isinstance(index, int) or isinstance(index, bool):
        raise SchemaError("target_token_index", "must be an integer", line_number=line_number)
    try:
        label = Plurality(label_raw)
    except ValueError:
        raise SchemaError("label", f"unknown value {label_raw!r}", line_number=line_number)
    try:
        domain = Domain(domain_raw)
    except ValueError:
        raise SchemaError("domain", f"unknown value {domain_raw!r}", line_number=line_number)
    if not isinstance(prov_obj, dict):
        raise SchemaError("provenance", "must be an object", line_number=line_number)
    source_id = _require(prov_obj, "source_id", line_number)
    geo = None
    if "geo" in prov_obj and prov_obj["geo"] is not None:
        geo_obj = prov_obj["geo"]
        if not isinstance(geo_obj, dict) or "lat" not in geo_obj or "lon" not in geo_obj:
            raise SchemaError("provenance.geo", "needs lat and lon", line_number=line_number)
        geo = (float(geo_obj["lat"]), float(geo_obj["lon"]))
    provenance = Provenance(
        source_id=str(source_id),
        author_id=prov_obj.get("author_id"),
        original_surface=prov_obj.get("original_surface"),
        geo=geo,
        aligned_foreign_sentence=prov_obj.get("aligned_foreign_sentence"),
    )
    return LabeledInstance(
        text=text,
        target_token_index=index,
        label=label,
        domain=domain,
        provenance=provenance,
    )


def dumps_instance(instance: LabeledInstance) -> str:
    return json.dumps(instance_to_dict(instance), ensure_ascii=False, separators=(",", ":"))


def write_instances(path: str | Path, instances: Iterable[LabeledInstance]) -> int:
    """Write one instance per line; returns the number written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(path, "w", encoding="utf-8") as f:
        for instance in instances:
            f.write(dumps_instance(instance) + "\n")
            n += 1
    return n


def iter_instances(path: str | Path) -> Iterator[LabeledInstance]:
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_number, str(exc))
            yield instance_from_dict(obj, line_number=line_number)


def read_instances(path: str | Path) -> list[LabeledInstance]:
    return list(iter_instances(path))


def utterance_to_dict(utterance: Utterance) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "id": utterance.id,
        "author_id": utterance.author_id,
        "text": utterance.text,
    }
    if utterance.lat is not None:
        obj["lat"] = utterance.lat
    if utterance.lon is not None:
        obj["lon"] = utterance.lon
    return obj


def write_utterances(path: str | Path, utterances: Iterable[Utterance]) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(path, "w", encoding="utf-8") as f:
        for utt in utterances:
            f.write(json.dumps(utterance_to_dict(utt), ensure_ascii=False, separators=(",", ":")) + "\n")
            n += 1
    return n


def read_utterances(path: str | Path, domain: Domain = Domain.TWITTER) -> list[Utterance]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_number, str(exc))
            text = _require(obj, "text", line_number)
            if not isinstance(text, str):
                raise SchemaError("text", "must be a string", line_number=line_number)
            out.append(
                Utterance(
                    id=str(_require(obj, "id", line_number)),
                    author_id=str(_require(obj, "author_id", line_number)),
                    text=text,
                    lat=obj.get("lat"),
                    lon=obj.get("lon"),
                    domain=domain,
                )
            )
    return out
