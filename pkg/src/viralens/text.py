"""Verbal bag-of-words extraction from title/tag sidecar files.

Each document may carry a sidecar text file of raw tokens; tokens are
lowercased, stripped of surrounding punctuation, and kept only when they
appear in a reference dictionary, mirroring how noisy scraped text is
reduced to countable English words.
"""

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

# Punctuation stripped from token edges.  Interior characters (hyphens,
# apostrophes) are left alone so "non-profit" stays one token.
_EDGE_CHARS = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~"

SIDECAR_SUFFIX = ".tokens.txt"


@dataclass(frozen=True)
class TokenSidecar:
    doc_id: str
    tokens: tuple[str, ...]


def normalize_token(raw: str) -> str:
    """Lowercase and strip edge punctuation; may return an empty string."""
    return raw.strip().strip(_EDGE_CHARS).lower()


def tokenize(text: str) -> list[str]:
    """Split on whitespace and normalize, dropping tokens that vanish."""
    out = []
    for raw in text.split():
        tok = normalize_token(raw)
        if tok:
            out.append(tok)
    return out


def load_sidecar(path: str | Path) -> TokenSidecar:
    """Read a `<doc_id>.tokens.txt` file: one token per line, blanks skipped."""
    path = Path(path)
    doc_id = path.name
    if doc_id.endswith(SIDECAR_SUFFIX):
        doc_id = doc_id[: -len(SIDECAR_SUFFIX)]
    else:
        doc_id = path.stem
    tokens: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            tokens.extend(tokenize(line))
    return TokenSidecar(doc_id=doc_id, tokens=tuple(tokens))


def load_dictionary(path: str | Path) -> frozenset[str]:
    """Read a reference dictionary, one word per line, normalized."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = normalize_token(line)
            if word:
                words.add(word)
    if not words:
        raise ValueError(f"dictionary {path} contains no words")
    return frozenset(words)


def dictionary_filter(tokens, dictionary: frozenset[str]) -> list[str]:
    """Keep only tokens present in the dictionary, preserving order."""
    return [t for t in tokens if t in dictionary]


def build_text_bag(tokens) -> dict[str, int]:
    """Count already-filtered tokens into a sparse bag."""
    return dict(Counter(tokens))
