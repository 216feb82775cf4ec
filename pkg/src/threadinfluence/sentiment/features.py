"""Tokenization and the lexical feature vector for post-level sentiment.

Features follow the surface-cue design: lexicon hit ratios, emphasis
strengths, punctuation counts, and simple shape statistics.  All features
are pure functions of the post body and the lexicon set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from threadinfluence.corpus import Post
from threadinfluence.sentiment.lexicons import LexiconSet

FEATURE_NAMES: tuple[str, ...] = (
    "post_length",
    "pos",
    "neg",
    "name_mention",
    "slang",
    "pos_strength",
    "neg_strength",
    "pos_vs_neg",
    "pos_vs_neg_strength",
    "sentences",
    "avg_word_len",
    "question_marks",
    "exclamation_marks",
)

MAX_STRENGTH = 5.0

_WORD_RE = re.compile(r"\w+")
_SENTENCE_RUN_RE = re.compile(r"[.!?]+")


@dataclass(frozen=True)
class FeatureVector:
    """The 13 lexical features of one post, in FEATURE_NAMES order."""

    post_length: float
    pos: float
    neg: float
    name_mention: float
    slang: float
    pos_strength: float
    neg_strength: float
    pos_vs_neg: float
    pos_vs_neg_strength: float
    sentences: float
    avg_word_len: float
    question_marks: float
    exclamation_marks: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=float)


@lru_cache(maxsize=8)
def _token_pattern(protected: tuple[str, ...]) -> re.Pattern[str]:
    # Protected tokens (emoticons, punctuation-bearing slang) are matched as
    # units; everything else tokenizes as \w+ runs.  Longest-first keeps
    # ":-)" from being eaten by ":-".
    alternatives = [re.escape(tok) for tok in sorted(protected, key=len, reverse=True)]
    alternatives.append(r"\w+")
    return re.compile("|".join(alternatives))


def _protected_tokens(lexicons: LexiconSet) -> tuple[str, ...]:
    candidates = (
        set(lexicons.positive_emoticons)
        | set(lexicons.negative_emoticons)
        | set(lexicons.slang_terms)
    )
    # Purely alphanumeric entries already tokenize as words.
    return tuple(sorted(tok for tok in candidates if not _WORD_RE.fullmatch(tok)))


def scan_tokens(body: str, lexicons: LexiconSet) -> list[tuple[str, int]]:
    """Lowercased tokens paired with the count of '!' immediately following."""
    lowered = body.lower()
    pattern = _token_pattern(_protected_tokens(lexicons))
    out = []
    for match in pattern.finditer(lowered):
        end = match.end()
        bangs = 0
        while end + bangs < len(lowered) and lowered[end + bangs] == "!":
            bangs += 1
        out.append((match.group(), bangs))
    return out


def tokenize(body: str, lexicons: LexiconSet) -> list[str]:
    """Lowercase word tokens; listed emoticons and slang survive as units."""
    return [token for token, _ in scan_tokens(body, lexicons)]


def count_sentences(body: str) -> int:
    """Sentences delimited by terminal-punctuation runs (., !, ?).

    A trailing fragment with word characters after the last run counts as
    one more sentence; an empty body has zero.
    """
    runs = list(_SENTENCE_RUN_RE.finditer(body))
    count = len(runs)
    tail_start = runs[-1].end() if runs else 0
    if _WORD_RE.search(body, tail_start):
        count += 1
    return count


def hit_strengths(
    tokens: Sequence[str],
    lexicons: LexiconSet,
    trailing_exclamations: Sequence[int] | None = None,
) -> list[tuple[int, bool, bool, float]]:
    """Per-hit emphasis: (token index, positive?, negative?, strength).

    A lexicon hit scores 2; a booster immediately before it adds the
    booster's increment, and two or more exclamation marks attached to the
    hit add 1.  Strengths cap at 5.
    """
    if trailing_exclamations is None:
        trailing_exclamations = [0] * len(tokens)
    hits = []
    boosters = lexicons.booster_terms
    for i, token in enumerate(tokens):
        positive = token in lexicons.positive_hits
        negative = token in lexicons.negative_hits
        if not positive and not negative:
            continue
        strength = 2.0
        if i > 0 and tokens[i - 1] in boosters:
            strength += boosters[tokens[i - 1]]
        if trailing_exclamations[i] >= 2:
            strength += 1.0
        hits.append((i, positive, negative, min(strength, MAX_STRENGTH)))
    return hits


def sentiment_strength(
    tokens: Sequence[str],
    lexicons: LexiconSet,
    trailing_exclamations: Sequence[int] | None = None,
) -> tuple[float, float]:
    """(positive, negative) emphasis strengths on a 1..5 scale.

    Base strength is 1; each polarity reports the maximum per-hit strength
    from ``hit_strengths``.
    """
    pos_strength = 1.0
    neg_strength = 1.0
    for _, positive, negative, strength in hit_strengths(
        tokens, lexicons, trailing_exclamations
    ):
        if positive:
            pos_strength = max(pos_strength, strength)
        if negative:
            neg_strength = max(neg_strength, strength)
    return pos_strength, neg_strength


def features_from_text(body: str, lexicons: LexiconSet) -> FeatureVector:
    scanned = scan_tokens(body, lexicons)
    tokens = [token for token, _ in scanned]
    bangs = [b for _, b in scanned]
    n = len(tokens)

    num_pos = sum(1 for t in tokens if t in lexicons.positive_hits)
    num_neg = sum(1 for t in tokens if t in lexicons.negative_hits)
    num_name = sum(1 for t in tokens if t.startswith(lexicons.name_prefix))
    num_slang = sum(1 for t in tokens if t in lexicons.slang_terms)
    pos_strength, neg_strength = sentiment_strength(tokens, lexicons, bangs)

    return FeatureVector(
        post_length=float(n),
        pos=num_pos / n if n else 0.0,
        neg=num_neg / n if n else 0.0,
        name_mention=num_name / n if n else 0.0,
        slang=num_slang / n if n else 0.0,
        pos_strength=pos_strength,
        neg_strength=neg_strength,
        pos_vs_neg=(num_pos + 1) / (num_neg + 1),
        pos_vs_neg_strength=pos_strength / neg_strength,
        sentences=float(count_sentences(body)),
        avg_word_len=sum(len(t) for t in tokens) / n if n else 0.0,
        question_marks=float(body.count("?")),
        exclamation_marks=float(body.count("!")),
    )


def extract_features(post: Post, lexicons: LexiconSet) -> FeatureVector:
    return features_from_text(post.body, lexicons)
