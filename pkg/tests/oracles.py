"""Brute-force re-implementations of the extraction rules.

Deliberately independent of the package internals: tokenization is done by
hand with character classes, matching by exhaustive enumeration of all
variant spans, and filtering by plain counting. Production extraction output
must match these exactly on fixture corpora.
"""

WORD_EXTRAS = set("'-’")


def oracle_tokens(text):
    """(surface, start, end) triples; word chars are letters/digits/'/’/-."""
    out = []
    i, n = 0, len(text)

    def is_word(ch):
        return ch.isalpha() or ch.isdigit() or ch in WORD_EXTRAS

    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if is_word(ch):
            j = i + 1
            while j < n and is_word(text[j]):
                j += 1
            out.append((text[i:j], i, j))
            i = j
        else:
            out.append((ch, i, i + 1))
            i += 1
    return out


def norm(token_surface):
    return token_surface.replace("’", "'").casefold()


# flat (canonical, variant) list in lexicon order; flat rank doubles as the
# entry-then-variant tie-break
DEFAULT_VARIANTS = [
    ("y'all", ("y'all",)),
    ("y'all", ("yall",)),
    ("y'all", ("ya'll",)),
    ("y'all", ("all", "y'all")),
    ("y'all", ("all-y'all",)),
    ("you guys", ("you", "guys")),
    ("youse", ("youse",)),
    ("yous", ("yous",)),
    ("yinz", ("yinz",)),
    ("you-uns", ("you-uns",)),
    ("you-uns", ("youns",)),
    ("you lot", ("you", "lot")),
]


def oracle_matches(text):
    """Non-overlapping (start_tok, end_tok, canonical), leftmost-longest greedy."""
    tokens = oracle_tokens(text)
    keys = [norm(t[0]) for t in tokens]
    candidates = []
    for rank, (canonical, variant) in enumerate(DEFAULT_VARIANTS):
        width = len(variant)
        for start in range(len(keys) - width + 1):
            if tuple(keys[start : start + width]) == variant:
                candidates.append((start, width, rank, canonical))
    chosen = []
    taken = set()
    for start, width, _, canonical in sorted(candidates, key=lambda c: (c[0], -c[1], c[2])):
        span = set(range(start, start + width))
        if span & taken:
            continue
        taken |= span
        chosen.append((start, start + width - 1, canonical))
    return sorted(chosen)


def oracle_extract_twitter(tweets):
    """tweets: iterable of dicts with id/author_id/text.

    Returns (plural, singular) where plural entries are
    (id, masked_text, target_index, surface) and singular entries are
    (id, text, target_index).
    """
    tweets = list(tweets)
    qualifying = {t["author_id"] for t in tweets if oracle_matches(t["text"])}
    plural, singular = [], []
    for tweet in tweets:
        if tweet["author_id"] not in qualifying:
            continue
        text = tweet["text"]
        tokens = oracle_tokens(text)
        matches = oracle_matches(text)
        covered = set()
        for start, end, _ in matches:
            covered.update(range(start, end + 1))
        bare = [
            i for i, tok in enumerate(tokens) if i not in covered and norm(tok[0]) == "you"
        ]
        if len(matches) == 1 and not bare:
            start, end, _ = matches[0]
            char_start, char_end = tokens[start][1], tokens[end][2]
            surface = text[char_start:char_end]
            replacement = "You" if surface[:1].isupper() else "you"
            masked = text[:char_start] + replacement + text[char_end:]
            target = next(
                i for i, tok in enumerate(oracle_tokens(masked)) if tok[1] == char_start
            )
            plural.append((tweet["id"], masked, target, surface))
        elif not matches and len(bare) == 1:
            singular.append((tweet["id"], text, bare[0]))
    return plural, singular


ES_PLURAL = {"ustedes", "vosotros", "vosotras"}
ES_SINGULAR = {"tú", "usted"}


def oracle_extract_europarl(pairs):
    """pairs: iterable of (line_number, english, spanish).

    Returns (plural, singular) of (line_number, english, target_index, spanish).
    """
    plural, singular = [], []
    for line_number, english, spanish in pairs:
        es_keys = [norm(t[0]) for t in oracle_tokens(spanish)]
        n_plural = sum(1 for k in es_keys if k in ES_PLURAL)
        n_singular = sum(1 for k in es_keys if k in ES_SINGULAR)
        you_positions = [
            i for i, t in enumerate(oracle_tokens(english)) if norm(t[0]) == "you"
        ]
        entry = (line_number, english, you_positions[0] if you_positions else None, spanish)
        if n_plural == 1 and n_singular == 0 and len(you_positions) == 1:
            plural.append(entry)
        elif n_singular == 1 and n_plural == 0 and len(you_positions) == 1:
            singular.append(entry)
    return plural, singular
