"""Span-preserving tokenizer shared by extraction, analytics, and the classifier.

Tokens are maximal runs of Unicode letters, digits, apostrophes, and hyphens;
every other non-whitespace character becomes a standalone one-character token.
Spans always index the original string, so any token's surface can be sliced
back out of it unchanged.
"""

import re
from dataclasses import dataclass

CURLY_APOSTROPHE = "’"

# First alternative: word runs. [^\W\d_] is "Unicode letter"; digits,
# apostrophes (straight and curly), and hyphens extend the run. Second
# alternative: any other single non-space character.
_TOKEN_RE = re.compile(r"(?:[^\W\d_]|[\d'’-])+|\S")


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int

    def match_key(self) -> str:
        """Casefolded surface with curly apostrophes straightened."""
        return self.text.casefold().replace(CURLY_APOSTROPHE, "'")


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens carrying character spans into the original."""
    return [Token(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def token_strings(text: str) -> list[str]:
    """Token surfaces only, skipping the span bookkeeping."""
    return _TOKEN_RE.findall(text)
