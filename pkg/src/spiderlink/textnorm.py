"""Text normalization and rule-based tokenization for questions and schema names.

All matching keys in the package (string linking, vector-store lookups) go
through `normalize`, so the modules agree on text identity.
"""

import re
import unicodedata

LANGUAGES = ("arabic", "english")

# Tatweel plus the Arabic combining marks (harakat, tanween, superscript alef).
_ARABIC_MARKS = re.compile("[ـً-ٰٟ]")

# Decimals are kept whole; any other punctuation becomes its own token.
_TOKEN = re.compile(r"\d+\.\d+|\w+|[^\w\s]", re.UNICODE)

_WS = re.compile(r"\s+")


def strip_arabic_marks(text: str) -> str:
    """Remove tatweel and diacritics; a no-op for non-Arabic text."""
    return _ARABIC_MARKS.sub("", text)


def normalize(text: str, language: str = "arabic") -> str:
    """Canonical form used for all matching: NFKC, casefold, collapsed whitespace.

    Arabic input additionally loses tatweel and diacritics so that vowelized
    and unvowelized spellings share one key.
    """
    if language not in LANGUAGES:
        raise ValueError(f"unknown language {language!r}, expected one of {LANGUAGES}")
    text = unicodedata.normalize("NFKC", text).casefold()
    if language == "arabic":
        text = strip_arabic_marks(text)
    return _WS.sub(" ", text).strip()


def tokenize(question: str, language: str = "arabic") -> list[str]:
    """Split a question into word and punctuation tokens.

    Whitespace-only input yields an empty list. The concatenation of the
    tokens covers every non-whitespace character of the normalized text.
    """
    return _TOKEN.findall(normalize(question, language))


def words(name: str, language: str = "english") -> list[str]:
    """Word sequence of a schema-item name: tokens minus pure punctuation."""
    return [t for t in tokenize(name, language) if any(c.isalnum() or c == "_" for c in t)]


def contains_arabic(text: str) -> bool:
    return any("؀" <= c <= "ۿ" or "ݐ" <= c <= "ݿ" for c in text)


def normalize_sql(query: str) -> str:
    """Whitespace-collapsed, case-folded SQL, leaving quoted literals untouched.

    Used to count distinct queries; not a parser.
    """
    out: list[str] = []
    i = 0
    n = len(query)
    pending_space = False
    while i < n:
        c = query[i]
        if c in "'\"":
            quote = c
            j = i + 1
            while j < n and query[j] != quote:
                j += 1
            j = min(j + 1, n)
            if pending_space and out:
                out.append(" ")
            pending_space = False
            out.append(query[i:j])
            i = j
        elif c.isspace():
            pending_space = True
            i += 1
        else:
            if pending_space and out:
                out.append(" ")
            pending_space = False
            out.append(c.casefold())
            i += 1
    return "".join(out)
