"""Distant supervision from informal plural "you" forms on Twitter.

Users who use an unambiguous plural form (y'all, you guys, yinz, ...) at
least once are assumed to reserve bare "you" for singular reference. Their
plural-form tweets become plural instances with the form masked to a generic
"you"; their bare-"you" tweets become singular instances.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import ConfigError, InvalidMatchError
from .instances import Domain, LabeledInstance, Plurality, Provenance, Utterance
from .tokenizer import CURLY_APOSTROPHE, Token, tokenize


@dataclass(frozen=True)
class MatchPolicy:
    case_insensitive: bool = True
    apostrophe_normalization: bool = True


# Canonical form -> surface variants, each a token sequence. Bare "you all"
# is deliberately absent: "I see you all the time" makes it too ambiguous
# for word-boundary matching, and precision matters more than recall in a
# supervision source. "all y'all" stays in, both spaced and hyphenated.
DEFAULT_ENTRIES: tuple[tuple[str, tuple[tuple[str, ...], ...]], ...] = (
    ("y'all", (("y'all",), ("yall",), ("ya'll",), ("all", "y'all"), ("all-y'all",))),
    ("you guys", (("you", "guys"),)),
    ("youse", (("youse",),)),
    ("yous", (("yous",),)),
    ("yinz", (("yinz",),)),
    ("you-uns", (("you-uns",), ("youns",))),
    ("you lot", (("you", "lot"),)),
)

MAX_VARIANT_TOKENS = 3


class PluralFormLexicon:
    """Ordered inventory of informal plural "you" forms and their variants."""

    def __init__(
        self,
        entries: Iterable[tuple[str, Iterable[tuple[str, ...]]]] = DEFAULT_ENTRIES,
        match_policy: MatchPolicy = MatchPolicy(),
    ):
        self.entries: list[tuple[str, tuple[tuple[str, ...], ...]]] = []
        self.match_policy = match_policy
        seen = set()
        for canonical, variants in entries:
            if canonical in seen:
                raise ConfigError(f"duplicate canonical form {canonical!r}")
            seen.add(canonical)
            variants = tuple(tuple(v) for v in variants)
            for variant in variants:
                if not variant or len(variant) > MAX_VARIANT_TOKENS:
                    raise ConfigError(
                        f"variant {variant!r} of {canonical!r} must be 1-{MAX_VARIANT_TOKENS} tokens"
                    )
                if any(not tok for tok in variant):
                    raise ConfigError(f"variant {variant!r} of {canonical!r} has an empty token")
            self.entries.append((canonical, variants))
        if not self.entries:
            raise ConfigError("lexicon has no entries")
        # variant lookup keyed by first normalized token, longest variants
        # first, then lexicon order
        self._by_first_token: dict[str, list[tuple[tuple[str, ...], str, int, int]]] = {}
        for entry_rank, (canonical, variants) in enumerate(self.entries):
            for variant_rank, variant in enumerate(variants):
                key = tuple(self.normalize(tok) for tok in variant)
                bucket = self._by_first_token.setdefault(key[0], [])
                bucket.append((key, canonical, entry_rank, variant_rank))
        for bucket in self._by_first_token.values():
            bucket.sort(key=lambda item: (-len(item[0]), item[2], item[3]))

    def normalize(self, token_text: str) -> str:
        out = token_text
        if self.match_policy.apostrophe_normalization:
            out = out.replace(CURLY_APOSTROPHE, "'")
        if self.match_policy.case_insensitive:
            out = out.casefold()
        return out

    def canonical_forms(self) -> list[str]:
        return [canonical for canonical, _ in self.entries]

    def canonical_for_surface(self, surface: str) -> str | None:
        """Map a recorded surface (e.g. "Ya'll") back to its canonical form."""
        key = tuple(self.normalize(tok.text) for tok in tokenize(surface))
        if not key or key[0] not in self._by_first_token:
            return None
        for variant, canonical, _, _ in self._by_first_token[key[0]]:
            if variant == key:
                return canonical
        return None

    @classmethod
    def from_dict(cls, obj: dict, match_policy: MatchPolicy = MatchPolicy()) -> "PluralFormLexicon":
        entries = []
        for canonical, variants in obj.items():
            if not isinstance(variants, list):
                raise ConfigError(f"lexicon entry {canonical!r} must map to a list of variants")
            entries.append((canonical, tuple(tuple(v.split()) for v in variants)))
        return cls(entries, match_policy)

    @classmethod
    def from_file(cls, path: str | Path) -> "PluralFormLexicon":
        with open(path, encoding="utf-8") as f:
            try:
                obj = json.load(f)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"lexicon file {path}: {exc}")
        if not isinstance(obj, dict):
            raise ConfigError(f"lexicon file {path}: top level must be an object")
        return cls.from_dict(obj)

    def to_dict(self) -> dict:
        return {canonical: [" ".join(v) for v in variants] for canonical, variants in self.entries}


DEFAULT_LEXICON = PluralFormLexicon()


@dataclass(frozen=True)
class PluralMatch:
    token_span: tuple[int, int]  # inclusive token indices
    canonical_form: str
    original_surface: str


def match_plural_forms(text: str, lexicon: PluralFormLexicon = DEFAULT_LEXICON) -> list[PluralMatch]:
    """All non-overlapping lexicon matches, longest-first, left-to-right."""
    tokens = tokenize(text)
    keys = [lexicon.normalize(t.text) for t in tokens]
    matches: list[PluralMatch] = []
    i = 0
    n = len(tokens)
    while i < n:
        bucket = lexicon._by_first_token.get(keys[i])
        if bucket:
            for variant, canonical, _, _ in bucket:
                end = i + len(variant)
                if end <= n and tuple(keys[i:end]) == variant:
                    surface = text[tokens[i].start : tokens[end - 1].end]
                    matches.append(PluralMatch((i, end - 1), canonical, surface))
                    i = end
                    break
            else:
                i += 1
        else:
            i += 1
    return matches


def qualify_users(stream: Iterable[Utterance], lexicon: PluralFormLexicon = DEFAULT_LEXICON) -> set[str]:
    """Author ids with at least one tweet containing a plural-form match."""
    return {u.author_id for u in stream if match_plural_forms(u.text, lexicon)}


def mask_plural(text: str, match: PluralMatch) -> tuple[str, int, str]:
    """Replace the matched span with a generic "you".

    Returns (masked_text, target_token_index, original_surface). Splicing the
    surface back over the replacement token reconstructs the original text
    byte-for-byte.
    """
    tokens = tokenize(text)
    start_idx, end_idx = match.token_span
    if not (0 <= start_idx <= end_idx < len(tokens)):
        raise InvalidMatchError(
            f"token span {match.token_span} out of bounds for {len(tokens)} tokens"
        )
    start, end = tokens[start_idx].start, tokens[end_idx].end
    surface = text[start:end]
    if surface != match.original_surface:
        raise InvalidMatchError(
            f"match surface {match.original_surface!r} does not occur at span {match.token_span}"
        )
    replacement = "You" if surface[:1].isupper() else "you"
    masked = text[:start] + replacement + text[end:]
    target = next(i for i, t in enumerate(tokenize(masked)) if t.start == start)
    return masked, target, surface


def _bare_you_indices(tokens: list[Token], matches: list[PluralMatch]) -> list[int]:
    covered = set()
    for m in matches:
        covered.update(range(m.token_span[0], m.token_span[1] + 1))
    return [i for i, t in enumerate(tokens) if i not in covered and t.match_key() == "you"]


@dataclass
class TwitterStats:
    tweets_seen: int = 0
    qualifying_users: int = 0
    plural_emitted: int = 0
    singular_emitted: int = 0
    dropped: Counter = field(default_factory=Counter)
    seed: int = 42

    def to_dict(self) -> dict:
        return {
            "tweets_seen": self.tweets_seen,
            "qualifying_users": self.qualifying_users,
            "plural_emitted": self.plural_emitted,
            "singular_emitted": self.singular_emitted,
            "dropped": dict(sorted(self.dropped.items())),
            "seed": self.seed,
        }


@dataclass
class TwitterExtraction:
    plural: list[LabeledInstance]
    singular: list[LabeledInstance]
    stats: TwitterStats


def extract_twitter(
    stream: Iterable[Utterance],
    lexicon: PluralFormLexicon = DEFAULT_LEXICON,
    seed: int = 42,
) -> TwitterExtraction:
    """Two-pass extraction over a finite tweet stream.

    Pass one qualifies users; pass two emits one instance per tweet that has
    an unambiguous target: exactly one plural-form match and no bare "you"
    (plural, masked), or exactly one bare "you" and no match (singular).
    Everything else is dropped and tallied. Output order follows input order;
    the seed is recorded for downstream stages, no step here is stochastic.
    """
    tweets = list(stream)
    qualified = qualify_users(tweets, lexicon)
    stats = TwitterStats(seed=seed, qualifying_users=len(qualified))
    plural: list[LabeledInstance] = []
    singular: list[LabeledInstance] = []
    for tweet in tweets:
        stats.tweets_seen += 1
        if tweet.author_id not in qualified:
            stats.dropped["unqualified_author"] += 1
            continue
        tokens = tokenize(tweet.text)
        matches = match_plural_forms(tweet.text, lexicon)
        bare_you = _bare_you_indices(tokens, matches)
        geo = (tweet.lat, tweet.lon) if tweet.lat is not None and tweet.lon is not None else None
        if len(matches) == 1 and not bare_you:
            masked, target, surface = mask_plural(tweet.text, matches[0])
            plural.append(
                LabeledInstance(
                    text=masked,
                    target_token_index=target,
                    label=Plurality.PLURAL,
                    domain=Domain.TWITTER,
                    provenance=Provenance(
                        source_id=tweet.id,
                        author_id=tweet.author_id,
                        original_surface=surface,
                        geo=geo,
                    ),
                )
            )
            stats.plural_emitted += 1
        elif not matches and len(bare_you) == 1:
            singular.append(
                LabeledInstance(
                    text=tweet.text,
                    target_token_index=bare_you[0],
                    label=Plurality.SINGULAR,
                    domain=Domain.TWITTER,
                    provenance=Provenance(
                        source_id=tweet.id,
                        author_id=tweet.author_id,
                        geo=geo,
                    ),
                )
            )
            stats.singular_emitted += 1
        elif len(matches) > 1:
            stats.dropped["multiple_plural_matches"] += 1
        elif matches and bare_you:
            stats.dropped["plural_with_bare_you"] += 1
        elif len(bare_you) > 1:
            stats.dropped["multiple_bare_you"] += 1
        else:
            stats.dropped["no_target"] += 1
    return TwitterExtraction(plural=plural, singular=singular, stats=stats)
