"""Deterministic text normalization, tokenization, and lemmatization.

Every downstream metric and encoder funnels strings through this module so
that reference and candidate answers are always processed identically.
Normalization is idempotent: applying a policy twice gives the same string
as applying it once.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

_ARTICLE_RE = re.compile(r"\b(?:a|an|the)\b", re.IGNORECASE)
_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class NormPolicy:
    """Switchboard of normalization steps, applied in a fixed order.

    Step order: NFC unicode normalization (always), lowercase, punctuation
    removal, lemmatization, article removal, whitespace collapsing.
    Lemmatization rejoins tokens with single spaces, so enabling it implies
    whitespace collapsing; articles are removed after lemmatization so a
    reduced token can never reintroduce one. Both constraints keep
    re-normalization a no-op.
    """

    lowercase: bool = True
    strip_articles: bool = False
    strip_punct: bool = True
    collapse_whitespace: bool = True
    lemmatize: bool = False


# Exact-match preset: lowercase, drop articles and punctuation, collapse
# whitespace. Lowercasing follows the SQuAD-style convention.
EM_POLICY = NormPolicy(
    lowercase=True,
    strip_articles=True,
    strip_punct=True,
    collapse_whitespace=True,
    lemmatize=False,
)

# Pipeline preprocessing preset: lemmatize and remove punctuation; articles
# are kept (they are informative for question phrasing), lowercase for
# stability.
PEDANTS_POLICY = NormPolicy(
    lowercase=True,
    strip_articles=False,
    strip_punct=True,
    collapse_whitespace=True,
    lemmatize=True,
)

POLICY_PRESETS: dict[str, NormPolicy] = {
    "em": EM_POLICY,
    "pedants": PEDANTS_POLICY,
}


@dataclass
class TokenBag:
    """Ordered tokens plus their multiplicities."""

    tokens: tuple[str, ...]
    counts: Counter[str]

    def __len__(self) -> int:
        return len(self.tokens)


@lru_cache(maxsize=4096)
def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


# Irregular plurals and words the suffix rules would mangle. Entries whose
# lemma would be longer than the surface form (mice -> mouse) are deliberately
# absent: lemmas never grow.
_LEMMA_EXCEPTIONS = {
    "children": "child",
    "men": "man",
    "women": "woman",
    "feet": "foot",
    "teeth": "tooth",
    "geese": "goose",
    "people": "person",
    "lives": "life",
    "leaves": "leaf",
    "wolves": "wolf",
    "knives": "knife",
    "wives": "wife",
    "halves": "half",
    "shelves": "shelf",
    "loaves": "loaf",
    "thieves": "thief",
    "movies": "movie",
    "cookies": "cookie",
    "goes": "go",
    "buses": "bus",
    "ashes": "ash",
    "crises": "crisis",
    "analyses": "analysis",
    "theses": "thesis",
    "species": "species",
    "series": "series",
    "news": "news",
}


def lemma(token: str) -> str:
    """Reduce an English plural/inflected suffix on a single token.

    Pure function of the token; deterministic and never longer than the
    input. Non-alphabetic tokens pass through unchanged.
    """
    if token in _LEMMA_EXCEPTIONS:
        return _LEMMA_EXCEPTIONS[token]
    if len(token) <= 3 or not token.isalpha():
        return token
    if token.endswith("sses"):
        return token[:-2]
    if token.endswith("ies"):
        return token[:-3] + "y" if len(token) > 4 else token[:-1]
    if token.endswith("zzes"):
        return token[:-3]
    if token.endswith(("ches", "shes", "oes")) and len(token) > 5:
        return token[:-2]
    if token.endswith("xes"):
        return token[:-2]
    if token.endswith("s") and not token.endswith(("ss", "us", "is")):
        return token[:-1]
    return token


def normalize(text: str, policy: NormPolicy) -> str:
    """Apply a normalization policy to a raw string. Total and idempotent."""
    s = unicodedata.normalize("NFC", text)
    if policy.lowercase:
        s = s.lower()
    if policy.strip_punct:
        s = "".join(ch for ch in s if not _is_punct(ch))
        # deleting characters can expose combining marks to new bases
        s = unicodedata.normalize("NFC", s)
    if policy.lemmatize:
        s = " ".join(lemma(tok) for tok in s.split())
    if policy.strip_articles:
        s = _ARTICLE_RE.sub(" ", s)
    if policy.collapse_whitespace or policy.lemmatize:
        s = _WS_RE.sub(" ", s)
    return s.strip()


def tokenize(text: str) -> TokenBag:
    """Split a normalized string on whitespace runs into a token bag."""
    tokens = tuple(text.split())
    return TokenBag(tokens=tokens, counts=Counter(tokens))


def lemmatize(bag: TokenBag) -> TokenBag:
    """Map every token in a bag through :func:`lemma`."""
    tokens = tuple(lemma(tok) for tok in bag.tokens)
    return TokenBag(tokens=tokens, counts=Counter(tokens))
