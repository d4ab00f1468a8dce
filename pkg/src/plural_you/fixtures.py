"""Synthetic corpora with exact, recoverable ground truth.

The real tweet corpus behind the Twitter pipeline is not redistributable, so
tests and demos run on generated fixtures instead: templated users tweeting
informal plural forms (with regional preferences and geo coordinates), and
templated English/Spanish sentence pairs with planted pronouns. Every
generated item carries an out-of-band truth record saying what extraction
must do with it.

Also here: planted-cue instance generators for classifier benchmarks, where
one context token perfectly predicts the label.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

from .errors import ConfigError
from .instances import (
    Domain,
    LabeledInstance,
    Plurality,
    Provenance,
    Utterance,
    write_utterances,
)
from .europarl import ParallelPair

# Sentence templates are token lists. Plain words are one token each;
# ATTACH_PREV punctuation glues to the previous word, ATTACH_NEXT to the
# following one, so the rendered string tokenizes back to exactly this
# sequence. "{pf}" is the plural-form slot, "{es}" the Spanish pronoun slot.
_ATTACH_PREV = {".", ",", "!", "?", ";", ":"}
_ATTACH_NEXT = {"¿", "¡", "@", "#"}


def render_tokens(tokens: Sequence[str]) -> str:
    parts: list[str] = []
    prefix = ""
    for tok in tokens:
        if tok in _ATTACH_NEXT:
            prefix += tok
            continue
        if tok in _ATTACH_PREV and parts and not prefix:
            parts[-1] += tok
        else:
            parts.append(prefix + tok)
            prefix = ""
    return " ".join(parts)


@dataclass(frozen=True)
class _Surface:
    text: str
    n_tokens: int
    canonical: str


_SURFACES = {
    "y'all": _Surface("y'all", 1, "y'all"),
    "Y'all": _Surface("Y'all", 1, "y'all"),
    "yall": _Surface("yall", 1, "y'all"),
    "ya'll": _Surface("ya'll", 1, "y'all"),
    "y’all": _Surface("y’all", 1, "y'all"),
    "all y'all": _Surface("all y'all", 2, "y'all"),
    "you guys": _Surface("you guys", 2, "you guys"),
    "You guys": _Surface("You guys", 2, "you guys"),
    "youse": _Surface("youse", 1, "youse"),
    "yous": _Surface("yous", 1, "yous"),
    "yinz": _Surface("yinz", 1, "yinz"),
    "you-uns": _Surface("you-uns", 1, "you-uns"),
    "youns": _Surface("youns", 1, "you-uns"),
    "you lot": _Surface("you lot", 2, "you lot"),
}

# (center_lat, center_lon, surface pool with weights); pools drive the
# regional-preference analytics on fixture data
_STATE_PROFILES: dict[str, tuple[float, float, list[tuple[str, int]]]] = {
    "TX": (31.0, -99.0, [("y'all", 5), ("Y'all", 2), ("yall", 2), ("ya'll", 1), ("y’all", 1), ("all y'all", 1), ("you guys", 2)]),
    "LA": (31.0, -92.0, [("y'all", 6), ("yall", 2), ("Y'all", 1), ("you guys", 1)]),
    "GA": (32.6, -84.3, [("y'all", 5), ("yall", 2), ("all y'all", 1), ("you guys", 2)]),
    "AL": (32.7, -86.7, [("y'all", 6), ("ya'll", 1), ("you guys", 1)]),
    "NY": (42.9, -75.5, [("you guys", 6), ("You guys", 1), ("youse", 2), ("yous", 1)]),
    "MA": (42.35, -71.9, [("you guys", 7), ("You guys", 1), ("you lot", 1)]),
    "NJ": (40.1, -74.7, [("you guys", 5), ("youse", 3), ("yous", 1)]),
    "PA": (40.9, -77.6, [("yinz", 5), ("you-uns", 2), ("youns", 1), ("you guys", 2)]),
    "CA": (38.5, -121.3, [("you guys", 7), ("You guys", 1), ("y'all", 2)]),
    "WA": (47.4, -120.5, [("you guys", 7), ("y'all", 2)]),
    "OH": (40.3, -82.8, [("you guys", 6), ("y'all", 2), ("yinz", 1)]),
    "IL": (40.0, -89.2, [("you guys", 6), ("y'all", 3), ("you lot", 1)]),
}

# "{w}" slots draw from the word pools below, giving the corpus enough
# lexical variety that exact-duplicate texts stay rare
_TWEET_WORDS = (
    "game", "party", "show", "rodeo", "concert", "picnic", "lake", "beach",
    "mall", "diner", "bonfire", "parade", "market", "fair", "cookout", "tailgate",
)

_PLURAL_TWEET_TEMPLATES = [
    ("{pf}", "ready", "for", "the", "{w}", "tonight", "?"),
    ("i", "love", "{pf}", "!", "best", "{w}", "ever"),
    ("good", "morning", "{pf}", ",", "coffee", "is", "on", "me", "at", "the", "{w}"),
    ("hope", "{pf}", "had", "a", "great", "time", "at", "the", "{w}"),
    ("miss", "{pf}", "so", "much", "since", "the", "{w}"),
    ("{pf}", "better", "bring", "snacks", "to", "the", "{w}"),
    ("can't", "wait", "to", "see", "{pf}", "at", "the", "{w}"),
    ("thanks", "for", "everything", "{pf}", "!"),
    ("ok", "{pf}", "the", "{w}", "is", "moving", "to", "the", "{w}"),
    ("where", "are", "{pf}", "watching", "the", "{w}", "?"),
]

_SINGULAR_TWEET_TEMPLATES = [
    ("happy", "birthday", "!", "see", "you", "at", "the", "{w}"),
    ("thank", "you", "for", "the", "ride", "to", "the", "{w}"),
    ("hope", "you", "feel", "better", "before", "the", "{w}"),
    ("did", "you", "leave", "the", "{w}", "early", "?"),
    ("you", "are", "the", "best", ",", "never", "change"),
    ("when", "are", "you", "coming", "to", "the", "{w}", "?"),
    ("proud", "of", "you", "buddy"),
    ("wish", "you", "were", "here", "at", "the", "{w}"),
    ("love", "your", "photos", "from", "the", "{w}", ",", "you", "look", "great"),
    ("hey", "@", "sam", "did", "the", "{w}", "ticket", "reach", "you", "?"),
]

# (template, drop reason); {pf} slots keep the author qualified, so these go
# to dialect users; the unqualified case is built from plain users instead
_DISTRACTOR_TWEET_TEMPLATES = [
    (("{pf}", "know", "you", "are", "welcome", "here"), "plural_with_bare_you"),
    (("you", "know", "you", "want", "it"), "multiple_bare_you"),
    (("what", "a", "day", "at", "the", "beach"), "no_target"),
    (("{pf}", "and", "{pf}", "need", "to", "calm", "down"), "multiple_plural_matches"),
    (("ask", "me", "if", "you", "think", "you", "can", "win"), "multiple_bare_you"),
    (("raining", "again", ",", "staying", "in", "today"), "no_target"),
]

_UNQUALIFIED_TWEET_TEMPLATES = [
    ("are", "you", "going", "to", "the", "meeting", "?"),
    ("you", "should", "try", "the", "new", "cafe"),
    ("sent", "you", "the", "notes", "from", "class"),
]

# aligned topic nouns, English and Spanish (all masculine so the Spanish
# articles in the templates agree); one draw fills both sides of a pair
_EN_TOPICS = (
    "report", "debate", "budget", "procedure", "programme", "regulation",
    "compromise", "agreement", "calendar", "protocol", "mandate", "annex",
    "opinion", "study", "plan", "text",
)
_ES_TOPICS = (
    "informe", "debate", "presupuesto", "procedimiento", "programa", "reglamento",
    "compromiso", "acuerdo", "calendario", "protocolo", "mandato", "anexo",
    "dictamen", "estudio", "plan", "texto",
)

_PLURAL_PAIR_TEMPLATES = [
    (("i", "did", "not", "hear", "you", "during", "the", "{w}", "."),
     ("no", "los", "he", "escuchado", "a", "{es}", "durante", "el", "{w}", ".")),
    (("i", "would", "like", "to", "thank", "you", "for", "this", "{w}", "."),
     ("quisiera", "dar", "las", "gracias", "a", "{es}", "por", "este", "{w}", ".")),
    (("you", "have", "all", "received", "the", "{w}", "for", "today", "."),
     ("{es}", "han", "recibido", "el", "{w}", "de", "hoy", ".")),
    (("may", "i", "remind", "you", "that", "the", "{w}", "is", "tomorrow", "."),
     ("permítanme", "recordarles", "a", "{es}", "que", "el", "{w}", "es", "mañana", ".")),
    (("i", "urge", "you", "to", "support", "this", "{w}", "."),
     ("les", "pido", "a", "{es}", "que", "apoyen", "este", "{w}", ".")),
]

_SINGULAR_PAIR_TEMPLATES = [
    (("i", "am", "grateful", "that", "you", "raised", "this", "{w}", "."),
     ("agradezco", "que", "{es}", "haya", "planteado", "este", "{w}", ".")),
    (("madam", "president", ",", "you", "have", "the", "floor", "."),
     ("señora", "presidenta", ",", "{es}", "tiene", "la", "palabra", ".")),
    (("commissioner", ",", "you", "promised", "a", "written", "{w}", "."),
     ("comisario", ",", "{es}", "prometió", "un", "{w}", "escrito", ".")),
    (("i", "know", "that", "you", "support", "this", "{w}", "."),
     ("sé", "que", "{es}", "apoya", "este", "{w}", ".")),
]

# fixed distractor pairs: (en tokens, es tokens, drop reason)
_DISTRACTOR_PAIR_TEMPLATES = [
    (("the", "house", "approved", "the", "proposal", "without", "debate", "."),
     ("la", "cámara", "aprobó", "la", "propuesta", "sin", "debate", "."),
     "no_spanish_pronoun"),
    (("your", "report", "is", "excellent", "in", "every", "respect", "."),
     ("tu", "informe", "es", "excelente", "en", "todos", "los", "aspectos", "."),
     "no_spanish_pronoun"),
    (("i", "thank", "you", "and", "i", "thank", "the", "rapporteur", "as", "well", "."),
     ("le", "agradezco", "a", "usted", "y", "también", "agradezco", "a", "ustedes", ",", "señores", "."),
     "mixed_spanish_pronouns"),
    (("you", "and", "the", "council", "know", "the", "answer", "."),
     ("ustedes", "y", "también", "ustedes", ",", "señores", "del", "consejo", ",", "saben", "la", "respuesta", "."),
     "multiple_spanish_pronouns"),
    (("you", "know", "what", "you", "voted", "for", "."),
     ("ustedes", "saben", "lo", "que", "votaron", "."),
     "english_you_count_not_one"),
    (("the", "committee", "has", "already", "decided", "."),
     ("usted", "ya", "conoce", "la", "decisión", "."),
     "english_you_count_not_one"),
]

_ES_PRONOUN_SLOTS = {
    "plural": [("ustedes", 5), ("Ustedes", 2), ("vosotros", 2), ("vosotras", 1)],
    "singular": [("usted", 6), ("Usted", 2), ("tú", 2), ("Tú", 1)],
}


@dataclass(frozen=True)
class TweetTruth:
    tweet_id: str
    outcome: str  # "plural" | "singular" | "dropped"
    reason: str | None = None
    canonical_form: str | None = None
    surface: str | None = None
    masked_text: str | None = None
    target_token_index: int | None = None


@dataclass(frozen=True)
class PairTruth:
    line_number: int
    outcome: str
    reason: str | None = None
    target_token_index: int | None = None


@dataclass
class Fixture:
    tweets: list[Utterance]
    bitext: list[ParallelPair]
    tweet_truth: dict[str, TweetTruth]
    pair_truth: dict[int, PairTruth]


def _weighted_choice(rng: random.Random, pool: list[tuple[str, int]]) -> str:
    return rng.choices([item for item, _ in pool], weights=[w for _, w in pool], k=1)[0]


def _fill_tweet(template: Sequence[str], surface: _Surface) -> tuple[str, str | None, int | None]:
    """Render a template; returns (text, masked_text, masked_target_index)."""
    mask = "You" if surface.text[:1].isupper() else "you"
    text = render_tokens([surface.text if e == "{pf}" else e for e in template])
    if "{pf}" not in template:
        return text, None, None
    masked = render_tokens([mask if e == "{pf}" else e for e in template])
    # every pre-slot element is a single token and the mask replacement is a
    # single token, so the masked target index is the slot's element position
    return text, masked, template.index("{pf}")


def generate_tweet_fixture(
    seed: int,
    n_per_class: int,
    n_distractors: int = 0,
) -> tuple[list[Utterance], dict[str, TweetTruth]]:
    """Tweets from templated users: n plural-cue, n singular, plus distractors."""
    if n_per_class < 1:
        raise ConfigError("n_per_class must be >= 1")
    rng = random.Random(seed)
    n_dialect = max(1, min(8, (n_per_class + 2) // 3))
    states = list(_STATE_PROFILES)
    dialect_users = [
        (f"u{j:03d}", states[j % len(states)]) for j in range(n_dialect)
    ]
    plain_users = [f"u9{j:02d}" for j in range(max(1, n_dialect // 2))]
    tweets: list[tuple[str, str, str, float | None, float | None]] = []
    truth: dict[str, TweetTruth] = {}
    counter = 0

    def next_id() -> str:
        nonlocal counter
        counter += 1
        return f"t{counter:05d}"

    def geo_for(state: str) -> tuple[float | None, float | None]:
        if rng.random() < 0.15:
            return None, None
        lat, lon, _ = _STATE_PROFILES[state]
        return round(lat + rng.uniform(-0.3, 0.3), 4), round(lon + rng.uniform(-0.3, 0.3), 4)

    def fill_words(template):
        return tuple(rng.choice(_TWEET_WORDS) if e == "{w}" else e for e in template)

    for i in range(n_per_class):
        author, state = dialect_users[i % n_dialect]
        surface = _SURFACES[_weighted_choice(rng, _STATE_PROFILES[state][2])]
        template = fill_words(rng.choice(_PLURAL_TWEET_TEMPLATES))
        text, masked, target = _fill_tweet(template, surface)
        lat, lon = geo_for(state)
        tweet_id = next_id()
        tweets.append((tweet_id, author, text, lat, lon))
        truth[tweet_id] = TweetTruth(
            tweet_id=tweet_id,
            outcome="plural",
            canonical_form=surface.canonical,
            surface=surface.text,
            masked_text=masked,
            target_token_index=target,
        )

    for i in range(n_per_class):
        author, state = dialect_users[i % n_dialect]
        template = fill_words(rng.choice(_SINGULAR_TWEET_TEMPLATES))
        text = render_tokens(template)
        lat, lon = geo_for(state)
        tweet_id = next_id()
        tweets.append((tweet_id, author, text, lat, lon))
        truth[tweet_id] = TweetTruth(
            tweet_id=tweet_id,
            outcome="singular",
            target_token_index=template.index("you"),
        )

    for i in range(n_distractors):
        if i % 4 == 3:
            author = plain_users[i % len(plain_users)]
            template = _UNQUALIFIED_TWEET_TEMPLATES[i % len(_UNQUALIFIED_TWEET_TEMPLATES)]
            text, reason = render_tokens(template), "unqualified_author"
        else:
            author, state = dialect_users[i % n_dialect]
            template, reason = _DISTRACTOR_TWEET_TEMPLATES[i % len(_DISTRACTOR_TWEET_TEMPLATES)]
            surface = _SURFACES[_weighted_choice(rng, _STATE_PROFILES[state][2])]
            text, _, _ = _fill_tweet(template, surface)
        tweet_id = next_id()
        tweets.append((tweet_id, author, text, None, None))
        truth[tweet_id] = TweetTruth(tweet_id=tweet_id, outcome="dropped", reason=reason)

    rng.shuffle(tweets)
    utterances = [
        Utterance(id=i, author_id=a, text=t, lat=lat, lon=lon)
        for i, a, t, lat, lon in tweets
    ]
    return utterances, truth


def generate_bitext_fixture(
    seed: int,
    n_per_class: int,
    n_distractors: int = 0,
) -> tuple[list[ParallelPair], dict[int, PairTruth]]:
    """Aligned pairs with planted Spanish pronouns and known outcomes."""
    if n_per_class < 1:
        raise ConfigError("n_per_class must be >= 1")
    rng = random.Random(seed)
    staged: list[tuple[str, str, str, str | None, int | None]] = []

    for label, templates, slots in (
        ("plural", _PLURAL_PAIR_TEMPLATES, _ES_PRONOUN_SLOTS["plural"]),
        ("singular", _SINGULAR_PAIR_TEMPLATES, _ES_PRONOUN_SLOTS["singular"]),
    ):
        for _ in range(n_per_class):
            en_tokens, es_tokens = rng.choice(templates)
            pronoun = _weighted_choice(rng, slots)
            topic = rng.randrange(len(_EN_TOPICS))
            en = render_tokens(
                [_EN_TOPICS[topic] if t == "{w}" else t for t in en_tokens]
            )
            es = render_tokens(
                [pronoun if t == "{es}" else _ES_TOPICS[topic] if t == "{w}" else t
                 for t in es_tokens]
            )
            staged.append((en, es, label, None, list(en_tokens).index("you")))

    for i in range(n_distractors):
        en_tokens, es_tokens, reason = _DISTRACTOR_PAIR_TEMPLATES[i % len(_DISTRACTOR_PAIR_TEMPLATES)]
        staged.append((render_tokens(en_tokens), render_tokens(es_tokens), "dropped", reason, None))

    rng.shuffle(staged)
    pairs = []
    truth: dict[int, PairTruth] = {}
    for line_number, (en, es, outcome, reason, target) in enumerate(staged, start=1):
        pairs.append(ParallelPair(line_number, en, es))
        truth[line_number] = PairTruth(
            line_number=line_number,
            outcome=outcome,
            reason=reason,
            target_token_index=target,
        )
    return pairs, truth


def generate_fixture(
    seed: int,
    n_per_class: int,
    tweet_distractors: int = 0,
    pair_distractors: int = 0,
    pairs_per_class: int | None = None,
) -> Fixture:
    """Combined tweet + bitext fixture; deterministic for a given seed."""
    tweets, tweet_truth = generate_tweet_fixture(seed, n_per_class, tweet_distractors)
    pairs, pair_truth = generate_bitext_fixture(
        seed + 1, pairs_per_class if pairs_per_class is not None else n_per_class, pair_distractors
    )
    return Fixture(tweets=tweets, bitext=pairs, tweet_truth=tweet_truth, pair_truth=pair_truth)


def write_fixture(fixture: Fixture, out_dir: str | Path) -> dict[str, Path]:
    """Write tweets.jsonl, bitext.en/.es, and truth.json into a directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "tweets": out / "tweets.jsonl",
        "bitext_en": out / "bitext.en",
        "bitext_es": out / "bitext.es",
        "truth": out / "truth.json",
    }
    write_utterances(paths["tweets"], fixture.tweets)
    with open(paths["bitext_en"], "w", encoding="utf-8") as fe, open(
        paths["bitext_es"], "w", encoding="utf-8"
    ) as fs:
        for pair in fixture.bitext:
            fe.write(pair.english + "\n")
            fs.write(pair.spanish + "\n")
    truth_obj = {
        "tweets": {k: asdict(v) for k, v in sorted(fixture.tweet_truth.items())},
        "pairs": {str(k): asdict(v) for k, v in sorted(fixture.pair_truth.items())},
    }
    with open(paths["truth"], "w", encoding="utf-8") as f:
        json.dump(truth_obj, f, ensure_ascii=False, indent=2)
        f.write("\n")
    return paths


_NEUTRAL_WORDS = (
    "morning", "window", "coffee", "river", "music", "table", "garden", "paper",
    "light", "street", "cloud", "stone", "dinner", "road", "letter", "winter",
)
_FORMAL_WORDS = (
    "session", "agenda", "committee", "procedure", "amendment", "directive",
    "quorum", "rapporteur", "annex", "protocol", "mandate", "plenary",
    "subsidiarity", "budget", "presidency", "regulation",
)


def generate_planted_cue(
    seed: int,
    n_per_class: int,
    cue_plural: str = "together",
    cue_singular: str = "alone",
    vocabulary: Sequence[str] = _NEUTRAL_WORDS,
    domain: Domain = Domain.TWITTER,
    source_prefix: str = "cue",
) -> list[LabeledInstance]:
    """Instances where the token right after the target decides the label."""
    rng = random.Random(seed)
    out = []
    for i in range(2 * n_per_class):
        label = Plurality.PLURAL if i < n_per_class else Plurality.SINGULAR
        cue = cue_plural if label is Plurality.PLURAL else cue_singular
        left = rng.choices(vocabulary, k=rng.randint(1, 4))
        right = rng.choices(vocabulary, k=rng.randint(0, 3))
        tokens = left + ["you", cue] + right
        # twitter-domain plural instances must carry a pre-mask surface;
        # synthetic ones get a nominal form
        surface = "y'all" if label is Plurality.PLURAL and domain is Domain.TWITTER else None
        out.append(
            LabeledInstance(
                text=" ".join(tokens),
                target_token_index=len(left),
                label=label,
                domain=domain,
                provenance=Provenance(
                    source_id=f"{source_prefix}{i:05d}", original_surface=surface
                ),
            )
        )
    rng.shuffle(out)
    return out


def generate_domain_transfer_benchmark(
    seed: int, n_per_class: int
) -> dict[str, list[LabeledInstance]]:
    """Two planted-cue corpora with disjoint vocabularies and cue words.

    A model trained on one domain has never seen the other's features, so
    in-domain accuracy is near-perfect while cross-domain accuracy sits at
    chance: the transfer-degradation setup in miniature.
    """
    return {
        "twitter": generate_planted_cue(
            seed, n_per_class, "together", "alone", _NEUTRAL_WORDS, Domain.TWITTER, "tw"
        ),
        "europarl": generate_planted_cue(
            seed + 1, n_per_class, "collectively", "personally", _FORMAL_WORDS,
            Domain.EUROPARL, "ep"
        ),
    }
