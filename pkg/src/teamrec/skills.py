"""Skill-phrase extraction and string-similarity primitives.

Similarity is normalized Levenshtein at character level: deterministic,
dependency-free, and monotone under threshold tightening. Results are
memoized because the matchers call it for every researcher x call pair.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .corpus import Skill, _normalize_text
from .errors import TeamRecError


@dataclass(frozen=True)
class StopWordList:
    """Lowercased tokens stripped from phrase boundaries during extraction."""

    words: frozenset[str]

    def __post_init__(self) -> None:
        if not self.words:
            raise ValueError("stop-word list must be non-empty")
        if any(w != w.lower() for w in self.words):
            raise ValueError("stop words must be lowercase")

    def __contains__(self, token: str) -> bool:
        return token in self.words


def load_stopwords(path: str | Path) -> StopWordList:
    """Read a stop-word file: one token per line, UTF-8, blanks ignored."""
    tokens = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        token = line.strip().lower()
        if token:
            tokens.add(token)
    return StopWordList(frozenset(tokens))


def load_default_stopwords() -> StopWordList:
    ref = resources.files("teamrec.data").joinpath("stopwords.txt")
    tokens = {t.strip().lower() for t in ref.read_text(encoding="utf-8").splitlines() if t.strip()}
    return StopWordList(frozenset(tokens))


def ngrams(tokens: list[str] | tuple[str, ...], n: int) -> list[str]:
    """All contiguous n-token windows joined by spaces, in order, duplicates kept."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return [" ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def extract_skills(
    title: str,
    synopsis: str,
    stopwords: StopWordList,
    max_phrase_len: int = 3,
) -> set[Skill]:
    """Extract candidate skill phrases from a call's title and synopsis.

    Contiguous token phrases of length 1..max_phrase_len are generated from
    the normalized text. Phrases that begin or end with a stop word are
    dropped. Title-derived phrases are always kept; synopsis-only phrases
    must occur at least twice to count as a demanded skill.
    """
    if max_phrase_len < 1:
        raise ValueError(f"max_phrase_len must be >= 1, got {max_phrase_len}")

    title_tokens = tuple(_normalize_text(title).split())
    synopsis_tokens = tuple(_normalize_text(synopsis).split())

    def candidate_phrases(tokens: tuple[str, ...]) -> list[str]:
        phrases = []
        for n in range(1, max_phrase_len + 1):
            for phrase in ngrams(tokens, n):
                words = phrase.split()
                if words[0] in stopwords or words[-1] in stopwords:
                    continue
                phrases.append(phrase)
        return phrases

    title_phrases = candidate_phrases(title_tokens)
    synopsis_phrases = candidate_phrases(synopsis_tokens)
    frequency = Counter(title_phrases) + Counter(synopsis_phrases)

    kept = set(title_phrases)
    kept.update(p for p in synopsis_phrases if frequency[p] >= 2)
    return {Skill(text=p, tokens=tuple(p.split())) for p in kept}


def levenshtein(a: str, b: str) -> int:
    """Edit distance, two-row dynamic programming."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ch_a in enumerate(a, start=1):
        current = [i]
        for j, ch_b in enumerate(b, start=1):
            cost = 0 if ch_a == ch_b else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


@lru_cache(maxsize=1 << 20)
def _similarity_cached(a: str, b: str) -> float:
    return 1.0 - levenshtein(a, b) / max(len(a), len(b))


def similarity(pattern: str, target: str) -> float:
    """Normalized Levenshtein similarity in [0, 1], symmetric, 1 iff equal."""
    if not pattern or not target:
        raise TeamRecError("similarity requires two non-empty strings")
    if pattern > target:  # symmetric, so cache one orientation only
        pattern, target = target, pattern
    return _similarity_cached(pattern, target)


def skill_match(skill: Skill, interests: frozenset[Skill] | set[Skill], threshold: float) -> Skill | None:
    """Best interest matching `skill` at or above `threshold`, else None.

    Ties on score break by lexicographic interest text, for determinism.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    best: Skill | None = None
    best_score = -1.0
    for interest in sorted(interests, key=lambda s: s.text):
        score = similarity(skill.text, interest.text)
        if score > best_score:
            best, best_score = interest, score
    if best is not None and best_score >= threshold:
        return best
    return None
