"""Sentiment lexicons: term lists, boosters, and death-expression phrases.

Term and slang files hold one lowercase term per line; ``#`` starts a
comment.  Booster files hold ``term<TAB>increment`` pairs.  Death-phrase
files hold one phrase per line, matched verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

# Phrases whose presence marks a post as mentioning death.  Matching is
# case-insensitive on token boundaries; "obituar" is a prefix entry so that
# obituary/obituaries match.
DEATH_PHRASES: tuple[str, ...] = (
    "pass away",
    "passing away",
    "passed away",
    "funeral",
    "die",
    "dying",
    "death",
    "memorial",
    "is gone",
    "was gone",
    "at rest",
    "final summons",
    "room temperature",
    "at peace",
    "in peace",
    "beyond the grave",
    "beyond the veil",
    "over the big ridge",
    "the last roundup",
    "the great majority",
    "the ultimate sacrifice",
    "a last bow",
    "last breath",
    "bereavement",
    "demise",
    "obituar",
)

_POSITIVE_TERMS = """
amazing awesome beautiful blessed blessing brave bright calm care caring cheer
cheerful comfort comforting congrats congratulations courage cure cured delighted
encourage encouraged encouraging enjoy excellent excited fantastic fine fortunate
friend fun gentle glad good grateful great happy heal healing healthy helpful
hero hope hopeful hug hugs improve improved improvement inspire inspiring joy
kind laugh laughter love loved lovely lucky miracle nice optimistic peaceful
perfect positive praise pray prayer prayers proud recover recovered recovery
relief relieved remission safe smile smiling strength strong succeed success
support supportive survivor sweet thank thankful thanks thrilled triumph victory
warm welcome well win wonderful
""".split()

_NEGATIVE_TERMS = """
afraid aggressive alone angry anxiety anxious awful bad bleak cry crying death
depressed depressing depression despair devastated devastating die difficult
disappointed distress dread dying fail failed failure fear frightened grief
hard hate heartbreaking helpless hopeless horrible hurt lonely lost miserable
mourn nausea nervous pain painful panic poor problem regret rough sad scared
severe sick sore sorrow sorry struggle struggling suffer suffering tears
terrible tired tough trouble ugly unbearable unfair unfortunate upset weak
weary worry worried worse worst wrong
""".split()

_POSITIVE_EMOTICONS = (":)", ":-)", ":d", ":-d", "=)", ";)", ";-)", ":]", "<3", "^_^", ":')")

_NEGATIVE_EMOTICONS = (":(", ":-(", ":'(", "):", "d:", ":[", "=(", ":-/", ":/", ":s")

_SLANG_TERMS = (
    "lol", "lmao", "rofl", "omg", "btw", "imho", "imo", "fyi", "thx", "ty",
    "np", "idk", "tbh", "brb", "xoxo", "smh", "gl", "hth",
)

_BOOSTER_TERMS: dict[str, float] = {
    "very": 1.0,
    "really": 1.0,
    "so": 1.0,
    "truly": 1.0,
    "super": 1.0,
    "totally": 1.0,
    "deeply": 1.0,
    "extremely": 2.0,
    "incredibly": 2.0,
    "absolutely": 2.0,
}


@dataclass
class LexiconSet:
    """All lexical resources the feature extractor consumes.

    Positive and negative term sets must be disjoint.  ``name_prefix``
    identifies de-identified member mentions (tokens such as
    ``userid_1234``).  ``prefix_phrases`` lists death phrases matched as
    word prefixes rather than whole words.
    """

    positive_terms: frozenset[str]
    negative_terms: frozenset[str]
    positive_emoticons: frozenset[str]
    negative_emoticons: frozenset[str]
    slang_terms: frozenset[str]
    booster_terms: Mapping[str, float]
    death_terms: tuple[str, ...] = DEATH_PHRASES
    name_prefix: str = "userid_"
    prefix_phrases: frozenset[str] = frozenset({"obituar"})

    def __post_init__(self) -> None:
        overlap = self.positive_terms & self.negative_terms
        if overlap:
            raise ValueError(
                f"positive and negative term sets overlap: {sorted(overlap)[:5]}"
            )

    @property
    def positive_hits(self) -> frozenset[str]:
        """Tokens counting toward positive sentiment (words plus emoticons)."""
        return self.positive_terms | self.positive_emoticons

    @property
    def negative_hits(self) -> frozenset[str]:
        return self.negative_terms | self.negative_emoticons


def default_lexicons() -> LexiconSet:
    return LexiconSet(
        positive_terms=frozenset(_POSITIVE_TERMS),
        negative_terms=frozenset(_NEGATIVE_TERMS),
        positive_emoticons=frozenset(_POSITIVE_EMOTICONS),
        negative_emoticons=frozenset(_NEGATIVE_EMOTICONS),
        slang_terms=frozenset(_SLANG_TERMS),
        booster_terms=dict(_BOOSTER_TERMS),
    )


def load_terms(path: str | Path) -> frozenset[str]:
    """One term per line, lowercased; '#' starts a comment."""
    terms = set()
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            term = line.split("#", 1)[0].strip().lower()
            if term:
                terms.add(term)
    return frozenset(terms)


def load_boosters(path: str | Path) -> dict[str, float]:
    """Tab-separated ``term<TAB>increment`` pairs, lowercased."""
    boosters: dict[str, float] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            try:
                term, increment = stripped.split("\t")
                boosters[term.strip().lower()] = float(increment)
            except ValueError as exc:
                raise ValueError(f"{path}:{line_no}: expected 'term<TAB>increment'") from exc
    return boosters


def load_death_phrases(path: str | Path) -> tuple[str, ...]:
    """One phrase per line, kept verbatim (no comment handling)."""
    with open(path, encoding="utf-8") as handle:
        return tuple(line.strip() for line in handle if line.strip())


def _is_word_char(char: str) -> bool:
    return char.isalnum() or char == "_"


def death_mention(body: str, lexicons: LexiconSet) -> bool:
    """True iff any death phrase occurs in the body.

    Phrases match case-insensitively as substrings anchored on token
    boundaries, so "die" does not fire inside "dietitian".  Entries in
    ``prefix_phrases`` only need the leading boundary, letting "obituar"
    match "obituaries".
    """
    haystack = body.lower()
    for phrase in lexicons.death_terms:
        needle = phrase.lower()
        prefix_only = phrase in lexicons.prefix_phrases
        start = haystack.find(needle)
        while start != -1:
            end = start + len(needle)
            left_ok = start == 0 or not _is_word_char(haystack[start - 1])
            right_ok = prefix_only or end == len(haystack) or not _is_word_char(haystack[end])
            if left_ok and right_ok:
                return True
            start = haystack.find(needle, start + 1)
    return False
