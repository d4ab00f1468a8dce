"""Label projection from Spanish onto English "you" through aligned bitext.

Spanish marks second-person plurality on the pronoun itself (ustedes,
vosotros vs. tú, usted). A sentence pair where the Spanish side has exactly
one plural pronoun and no singular one, and the English side exactly one
"you", yields a plural-labeled English instance; the mirrored profile yields
a singular one.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import AlignmentError, ConfigError, EncodingError, SchemaError
from .instances import Domain, LabeledInstance, Plurality, Provenance
from .tokenizer import tokenize


@dataclass(frozen=True)
class ParallelPair:
    line_number: int
    english: str
    spanish: str

    def __post_init__(self):
        if self.line_number < 1:
            raise SchemaError("line_number", "must be >= 1")
        if not self.english.strip():
            raise SchemaError("english", "empty after trimming")
        if not self.spanish.strip():
            raise SchemaError("spanish", "empty after trimming")


@dataclass(frozen=True)
class EsPronounLexicon:
    """Spanish second-person pronoun inventory, casefolded, accent-sensitive.

    Accents are significant on purpose: unaccented "tu" is the possessive and
    would be a guaranteed false positive. Clitics (te, os, les) are excluded
    as too ambiguous without morphological analysis.
    """

    plural_forms: frozenset[str] = frozenset({"ustedes", "vosotros", "vosotras"})
    singular_forms: frozenset[str] = frozenset({"tú", "usted"})

    def __post_init__(self):
        plural = frozenset(f.casefold() for f in self.plural_forms)
        singular = frozenset(f.casefold() for f in self.singular_forms)
        object.__setattr__(self, "plural_forms", plural)
        object.__setattr__(self, "singular_forms", singular)
        if not plural or not singular:
            raise ConfigError("pronoun lexicon needs both plural and singular forms")
        if plural & singular:
            raise ConfigError(f"pronoun sets overlap: {sorted(plural & singular)}")


DEFAULT_ES_LEXICON = EsPronounLexicon()


@dataclass(frozen=True)
class PronounProfile:
    n_plural: int
    n_singular: int


def load_parallel(
    english_source: str | Path, spanish_source: str | Path
) -> Iterator[ParallelPair]:
    """Stream line-aligned sentence pairs from two plain-text files.

    Line numbers are 1-based file positions. Pairs where either side is empty
    after trimming are skipped (their line numbers are consumed). A length
    mismatch raises AlignmentError naming both line counts; undecodable bytes
    raise EncodingError with the offending line number.
    """
    en_path, es_path = Path(english_source), Path(spanish_source)
    with open(en_path, "rb") as fe, open(es_path, "rb") as fs:
        line_number = 0
        while True:
            raw_en = fe.readline()
            raw_es = fs.readline()
            if not raw_en and not raw_es:
                return
            if not raw_en or not raw_es:
                en_count = line_number + (1 if raw_en else 0) + _count_lines(fe)
                es_count = line_number + (1 if raw_es else 0) + _count_lines(fs)
                raise AlignmentError(en_count, es_count)
            line_number += 1
            try:
                english = raw_en.decode("utf-8")
            except UnicodeDecodeError:
                raise EncodingError(str(en_path), line_number)
            try:
                spanish = raw_es.decode("utf-8")
            except UnicodeDecodeError:
                raise EncodingError(str(es_path), line_number)
            english, spanish = english.strip(), spanish.strip()
            if not english or not spanish:
                continue
            yield ParallelPair(line_number, english, spanish)


def _count_lines(handle) -> int:
    n = 0
    for _ in handle:
        n += 1
    return n


def english_you_count(sentence: str) -> int:
    """Tokens equal to "you" case-insensitively; your/yours/you're do not count."""
    if "you" not in sentence.casefold():
        return 0
    return sum(1 for t in tokenize(sentence) if t.text.casefold() == "you")


def pronoun_profile(sentence: str, lexicon: EsPronounLexicon = DEFAULT_ES_LEXICON) -> PronounProfile:
    """Whole-token counts of plural and singular Spanish pronouns."""
    folded = sentence.casefold()
    if not any(form in folded for form in lexicon.plural_forms) and not any(
        form in folded for form in lexicon.singular_forms
    ):
        return PronounProfile(0, 0)
    n_plural = n_singular = 0
    for token in tokenize(sentence):
        key = token.text.casefold()
        if key in lexicon.plural_forms:
            n_plural += 1
        elif key in lexicon.singular_forms:
            n_singular += 1
    return PronounProfile(n_plural, n_singular)


@dataclass
class EuroparlStats:
    pairs_seen: int = 0
    plural_emitted: int = 0
    singular_emitted: int = 0
    dropped: Counter = field(default_factory=Counter)

    def to_dict(self) -> dict:
        return {
            "pairs_seen": self.pairs_seen,
            "plural_emitted": self.plural_emitted,
            "singular_emitted": self.singular_emitted,
            "dropped": dict(sorted(self.dropped.items())),
        }


@dataclass
class EuroparlExtraction:
    plural: list[LabeledInstance]
    singular: list[LabeledInstance]
    stats: EuroparlStats


def extract_europarl(
    pairs: Iterable[ParallelPair],
    lexicon: EsPronounLexicon = DEFAULT_ES_LEXICON,
) -> EuroparlExtraction:
    """Project plurality labels over a stream of aligned pairs.

    Deterministic and order-preserving; pairs with any other pronoun profile
    are dropped and tallied by reason.
    """
    stats = EuroparlStats()
    plural: list[LabeledInstance] = []
    singular: list[LabeledInstance] = []
    for pair in pairs:
        stats.pairs_seen += 1
        profile = pronoun_profile(pair.spanish, lexicon)
        if profile.n_plural == 1 and profile.n_singular == 0:
            label = Plurality.PLURAL
        elif profile.n_singular == 1 and profile.n_plural == 0:
            label = Plurality.SINGULAR
        elif profile.n_plural == 0 and profile.n_singular == 0:
            stats.dropped["no_spanish_pronoun"] += 1
            continue
        elif profile.n_plural and profile.n_singular:
            stats.dropped["mixed_spanish_pronouns"] += 1
            continue
        else:
            stats.dropped["multiple_spanish_pronouns"] += 1
            continue
        if "you" not in pair.english.casefold():
            stats.dropped["english_you_count_not_one"] += 1
            continue
        you_indices = [
            i for i, t in enumerate(tokenize(pair.english)) if t.text.casefold() == "you"
        ]
        if len(you_indices) != 1:
            stats.dropped["english_you_count_not_one"] += 1
            continue
        instance = LabeledInstance(
            text=pair.english,
            target_token_index=you_indices[0],
            label=label,
            domain=Domain.EUROPARL,
            provenance=Provenance(
                source_id=str(pair.line_number),
                aligned_foreign_sentence=pair.spanish,
            ),
        )
        if label is Plurality.PLURAL:
            plural.append(instance)
            stats.plural_emitted += 1
        else:
            singular.append(instance)
            stats.singular_emitted += 1
    return EuroparlExtraction(plural=plural, singular=singular, stats=stats)
