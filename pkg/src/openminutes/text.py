"""Text normalization and tokenization shared by matching and indexing.

Both the entity-resolution path and the search index must agree on how
text is folded and split; keeping the rules in one place guarantees that.
"""

import re
import unicodedata

_WHITESPACE_RE = re.compile(r"\s+")

# Letter-like marks (ordinal indicators such as "º"/"ª", modifier letters)
# report as alphanumeric but act as separators in this corpus.
_NON_TOKEN_CATEGORIES = ("Lm", "Lo")


def strip_marks(text: str) -> str:
    """Canonical decomposition with combining marks removed."""
    decomposed = unicodedata.normalize("NFD", text)
    return "".join(c for c in decomposed if unicodedata.category(c) != "Mn")


def normalize_name(raw: str) -> str:
    """Fold a name for comparison: casefold, strip accents, collapse spaces.

    Total function; any string (including empty) is accepted. Idempotent.
    """
    folded = strip_marks(raw.casefold())
    return _WHITESPACE_RE.sub(" ", folded).strip()


def _is_token_char(c: str) -> bool:
    return c.isalnum() and unicodedata.category(c) not in _NON_TOKEN_CATEGORIES


def tokenize(text: str) -> list[str]:
    """Split text into folded tokens.

    Casefolds, strips combining marks, then splits on maximal runs of
    non-token characters. Digits are kept; no stemming or stopwords.
    """
    return [token for token, _, _ in tokenize_with_spans(text)]


def tokenize_with_spans(text: str) -> list[tuple[str, int, int]]:
    """Like :func:`tokenize` but returns ``(token, start, end)`` triples.

    Offsets are character positions into the original ``text`` so callers
    can cut display snippets around matches. Folding is applied per
    character, which keeps offsets aligned for the one-to-many casefold
    expansions (the folded token may be longer than the original span).
    """
    out: list[tuple[str, int, int]] = []
    current: list[str] = []
    start = 0
    for i, c in enumerate(text):
        if _is_token_char(c):
            if not current:
                start = i
            current.append(strip_marks(c.casefold()))
        elif current:
            out.append(("".join(current), start, i))
            current = []
    if current:
        out.append(("".join(current), start, len(text)))
    return out


def token_set(raw_name: str) -> frozenset[str]:
    """Token set used for fuzzy name similarity.

    Single-character tokens (initials, stray abbreviation letters) are
    dropped so "joao m. silva" and "joao manuel silva" compare on their
    informative tokens.
    """
    return frozenset(t for t in tokenize(normalize_name(raw_name)) if len(t) > 1)


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    """Token-set Jaccard similarity; empty-vs-anything is 0."""
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


def slugify(text: str) -> str:
    """Lowercase alphanumeric-and-hyphen key derived from display text."""
    normalized = normalize_name(text)
    slug = re.sub(r"[^a-z0-9]+", "-", normalized).strip("-")
    return slug
