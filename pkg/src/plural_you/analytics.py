"""Corpus analyses: form histogram, per-state preference map, quality sampling.

State lookup uses bundled bounding boxes rather than polygon shapefiles; the
per-state statistic is a coarse modal preference, for which box error is
tolerable, and it keeps the package free of external geo data. Plots are
rendered to SVG with fixed hash salt and no timestamp metadata so repeated
runs produce byte-identical files.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from importlib import resources as importlib_resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigError, CoordinateError, DataError, ParseError, SchemaError, TooSmallError
from .instances import LabeledInstance, Plurality, instance_from_dict, instance_to_dict
from .twitter import DEFAULT_LEXICON, PluralFormLexicon

_SVG_HASH_SALT = "plural-you"


@dataclass(frozen=True)
class StateBox:
    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def contains(self, lat: float, lon: float) -> bool:
        return self.lat_min <= lat <= self.lat_max and self.lon_min <= lon <= self.lon_max

    def area(self) -> float:
        return (self.lat_max - self.lat_min) * (self.lon_max - self.lon_min)


class GeoStateIndex:
    """Bounding boxes for the 48 continental states plus DC."""

    _default: "GeoStateIndex | None" = None

    def __init__(self, regions: Iterable[tuple[str, Iterable[StateBox]]]):
        self.regions: list[tuple[str, tuple[StateBox, ...]]] = []
        seen = set()
        for state, boxes in regions:
            if len(state) != 2 or not state.isalpha() or not state.isupper():
                raise ConfigError(f"state code {state!r} must be two uppercase letters")
            if state in seen:
                raise ConfigError(f"duplicate state code {state!r}")
            seen.add(state)
            self.regions.append((state, tuple(boxes)))
        if not self.regions:
            raise ConfigError("state index has no regions")

    @classmethod
    def from_dict(cls, obj: dict) -> "GeoStateIndex":
        regions = []
        for entry in obj.get("regions", []):
            boxes = [StateBox(*box) for box in entry["boxes"]]
            regions.append((entry["state"], boxes))
        return cls(regions)

    @classmethod
    def from_file(cls, path: str | Path) -> "GeoStateIndex":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))

    @classmethod
    def default(cls) -> "GeoStateIndex":
        if cls._default is None:
            text = (
                importlib_resources.files("plural_you")
                .joinpath("resources/state_boxes.json")
                .read_text(encoding="utf-8")
            )
            cls._default = cls.from_dict(json.loads(text))
        return cls._default


def locate_state(lat: float, lon: float, index: GeoStateIndex | None = None) -> str | None:
    """State whose box contains the point; smallest box wins on overlap."""
    if not -90.0 <= lat <= 90.0 or not -180.0 <= lon <= 180.0:
        raise CoordinateError(f"coordinates ({lat}, {lon}) out of range")
    index = index or GeoStateIndex.default()
    best: tuple[float, str] | None = None
    for state, boxes in index.regions:
        for box in boxes:
            if box.contains(lat, lon) and (best is None or box.area() < best[0]):
                best = (box.area(), state)
    return best[1] if best else None


@dataclass
class HistogramResult:
    counts: dict[str, int]
    skipped_no_surface: int = 0
    skipped_unknown_surface: int = 0

    def total(self) -> int:
        return sum(self.counts.values())


def form_histogram(
    plural_instances: Iterable[LabeledInstance],
    lexicon: PluralFormLexicon = DEFAULT_LEXICON,
) -> HistogramResult:
    """Count plural instances per canonical lexicon form of their pre-mask surface."""
    counts: Counter[str] = Counter()
    result = HistogramResult(counts={})
    for instance in plural_instances:
        surface = instance.provenance.original_surface
        if surface is None:
            result.skipped_no_surface += 1
            continue
        canonical = lexicon.canonical_for_surface(surface)
        if canonical is None:
            result.skipped_unknown_surface += 1
            continue
        counts[canonical] += 1
    result.counts = dict(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))
    return result


def state_form_counts(
    plural_instances: Iterable[LabeledInstance],
    index: GeoStateIndex | None = None,
    lexicon: PluralFormLexicon = DEFAULT_LEXICON,
) -> dict[str, dict[str, int]]:
    """Canonical-form counts per state, over geolocated plural instances only."""
    index = index or GeoStateIndex.default()
    per_state: dict[str, Counter[str]] = {}
    for instance in plural_instances:
        geo = instance.provenance.geo
        surface = instance.provenance.original_surface
        if geo is None or surface is None:
            continue
        canonical = lexicon.canonical_for_surface(surface)
        if canonical is None:
            continue
        state = locate_state(geo[0], geo[1], index)
        if state is None:
            continue
        per_state.setdefault(state, Counter())[canonical] += 1
    return {
        state: dict(sorted(per_state[state].items(), key=lambda kv: (-kv[1], kv[0])))
        for state in sorted(per_state)
    }


def state_preference_map(
    plural_instances: Iterable[LabeledInstance],
    index: GeoStateIndex | None = None,
    lexicon: PluralFormLexicon = DEFAULT_LEXICON,
) -> dict[str, str]:
    """Modal canonical form per state with at least one state-assigned instance.

    Ties break by frequency across all state-assigned instances, then
    lexicographically, so the result depends only on geolocated instances.
    """
    counts = state_form_counts(plural_instances, index, lexicon)
    global_counts: Counter[str] = Counter()
    for state_counts in counts.values():
        global_counts.update(state_counts)
    return {
        state: min(
            state_counts, key=lambda form: (-state_counts[form], -global_counts[form], form)
        )
        for state, state_counts in counts.items()
    }


class HumanLabel(Enum):
    AGREE = "agree"
    DISAGREE = "disagree"
    AMBIGUOUS = "ambiguous"


@dataclass
class QualitySample:
    instances: list[LabeledInstance]
    human_labels: list[HumanLabel] | None = None

    @property
    def agreement_rate(self) -> float:
        return compute_agreement(self)


def sample_for_annotation(
    corpus: Sequence[LabeledInstance],
    n: int = 100,
    label_filter: Plurality | None = None,
    seed: int = 42,
) -> QualitySample:
    """Uniform seeded sample without replacement, optionally one class only."""
    if n < 1:
        raise ConfigError(f"sample size must be >= 1, got {n}")
    pool = [i for i in corpus if label_filter is None or i.label is label_filter]
    if len(pool) < n:
        wanted = label_filter.value if label_filter else "any-label"
        raise TooSmallError(f"need {n} {wanted} instances, corpus has {len(pool)}")
    rng = random.Random(seed)
    return QualitySample(instances=rng.sample(pool, n))


def compute_agreement(sample: QualitySample) -> float:
    """Fraction of instances the annotator agreed with; ambiguous counts against."""
    if sample.human_labels is None:
        raise DataError("sample has no human labels yet")
    if len(sample.human_labels) != len(sample.instances):
        raise DataError(
            f"{len(sample.human_labels)} labels for {len(sample.instances)} instances"
        )
    if not sample.instances:
        raise TooSmallError("empty sample")
    agree = sum(1 for label in sample.human_labels if label is HumanLabel.AGREE)
    return agree / len(sample.instances)


def write_annotation_file(sample: QualitySample, path: str | Path) -> int:
    """Annotation exchange file: instances with an empty human_label to fill in."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for i, instance in enumerate(sample.instances):
            obj = instance_to_dict(instance)
            label = sample.human_labels[i].value if sample.human_labels else ""
            obj["human_label"] = label
            f.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")
    return len(sample.instances)


def read_annotation_file(path: str | Path) -> QualitySample:
    """Re-ingest an annotation file; every human_label must be filled in."""
    instances = []
    labels = []
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_number, str(exc))
            raw = obj.pop("human_label", None)
            if raw is None:
                raise SchemaError("human_label", "missing", line_number=line_number)
            try:
                labels.append(HumanLabel(str(raw).strip().casefold()))
            except ValueError:
                raise SchemaError(
                    "human_label",
                    f"expected agree/disagree/ambiguous, got {raw!r}",
                    line_number=line_number,
                )
            instances.append(instance_from_dict(obj, line_number=line_number))
    return QualitySample(instances=instances, human_labels=labels)


def write_histogram_report(result: HistogramResult, out_dir: str | Path) -> dict[str, Path]:
    """TSV counts plus an SVG bar chart."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tsv = out / "histogram.tsv"
    with open(tsv, "w", encoding="utf-8") as f:
        f.write("form\tcount\n")
        for form, count in result.counts.items():
            f.write(f"{form}\t{count}\n")
    svg = out / "histogram.svg"
    _render_histogram(result, svg)
    return {"tsv": tsv, "svg": svg}


def write_state_map_report(
    preferences: dict[str, str],
    counts: dict[str, dict[str, int]],
    out_dir: str | Path,
    index: GeoStateIndex | None = None,
) -> dict[str, Path]:
    """TSV preference table plus a box-choropleth SVG."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tsv = out / "state_map.tsv"
    with open(tsv, "w", encoding="utf-8") as f:
        f.write("state\tpreferred_form\tn_instances\n")
        for state in sorted(preferences):
            total = sum(counts.get(state, {}).values())
            f.write(f"{state}\t{preferences[state]}\t{total}\n")
    svg = out / "state_map.svg"
    _render_state_map(preferences, svg, index or GeoStateIndex.default())
    return {"tsv": tsv, "svg": svg}


def _matplotlib():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = _SVG_HASH_SALT
    return plt


def _render_histogram(result: HistogramResult, path: Path) -> None:
    plt = _matplotlib()
    forms = list(result.counts)
    values = [result.counts[f] for f in forms]
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    ax.bar(range(len(forms)), values, color="#4878a8")
    ax.set_xticks(range(len(forms)))
    ax.set_xticklabels(forms, rotation=30, ha="right")
    ax.set_ylabel("instances")
    ax.set_title("Informal plural 'you' forms")
    for i, v in enumerate(values):
        ax.text(i, v, str(v), ha="center", va="bottom", fontsize=8)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)


def _render_state_map(preferences: dict[str, str], path: Path, index: GeoStateIndex) -> None:
    plt = _matplotlib()
    from matplotlib.patches import Rectangle

    palette = [
        "#4878a8", "#e1812c", "#3a923a", "#c03d3e", "#9372b2",
        "#845b53", "#d684bd", "#797979", "#a9aa35", "#6dbccc",
    ]
    forms = sorted(set(preferences.values()))
    form_color = {form: palette[i % len(palette)] for i, form in enumerate(forms)}
    fig, ax = plt.subplots(figsize=(8.0, 5.0))
    for state, boxes in index.regions:
        for box in boxes:
            color = form_color.get(preferences.get(state, ""), "#eeeeee")
            ax.add_patch(
                Rectangle(
                    (box.lon_min, box.lat_min),
                    box.lon_max - box.lon_min,
                    box.lat_max - box.lat_min,
                    facecolor=color,
                    edgecolor="white",
                    linewidth=0.6,
                )
            )
            if state in preferences:
                ax.text(
                    (box.lon_min + box.lon_max) / 2,
                    (box.lat_min + box.lat_max) / 2,
                    state,
                    ha="center",
                    va="center",
                    fontsize=6,
                )
    handles = [plt.Rectangle((0, 0), 1, 1, facecolor=form_color[f]) for f in forms]
    if handles:
        ax.legend(handles, forms, loc="lower left", fontsize=7, title="preferred form")
    ax.set_xlim(-126, -66)
    ax.set_ylim(24, 50)
    ax.set_xlabel("longitude")
    ax.set_ylabel("latitude")
    ax.set_title("Preferred plural 'you' form by state")
    fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)
