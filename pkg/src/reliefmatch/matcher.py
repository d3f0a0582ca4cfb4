"""Rank availability posts for a need by proportion of common resources.

score = |resources(need) ∩ resources(avail)| / |resources(need)|

Needs whose extraction found no explicit resource fall back to overlap
of resource classes (covert posts carry classes but no phrases). Two
comparator baselines ship alongside: tf-idf cosine over the tweet text
and common-token overlap filtered to lexicon nouns.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .model import ExtractionResult, Post, PostKind, Status
from .textprep import TokenizedText


class EmptyNeedResources(ValueError):
    """The need has no extracted resources; use the class fallback."""


@dataclass(frozen=True)
class MatchCandidate:
    need_id: str
    avail_id: str
    score: float
    common: frozenset[str]

    def to_json(self) -> dict:
        return {
            "need_id": self.need_id,
            "avail_id": self.avail_id,
            "score": self.score,
            "common": sorted(self.common),
        }


def score_pair(need: ExtractionResult, avail: ExtractionResult) -> tuple[float, frozenset[str]]:
    """Fraction of the need's resources present in the availability."""
    if not need.resources:
        raise EmptyNeedResources("need has no extracted resources")
    common = frozenset(need.resources & avail.resources)
    return len(common) / len(need.resources), common


def score_pair_classes(need: ExtractionResult, avail: ExtractionResult) -> float:
    """Covert fallback: overlap of resource classes instead of phrases."""
    if not need.resource_classes:
        return 0.0
    return len(need.resource_classes & avail.resource_classes) / len(need.resource_classes)


def _pair_score(need: ExtractionResult, avail: ExtractionResult) -> tuple[float, frozenset[str]]:
    if need.resources:
        return score_pair(need, avail)
    return score_pair_classes(need, avail), frozenset()


def post_pair_score(need: Post, avail: Post) -> tuple[float, frozenset[str]]:
    """Score two stored posts, treating missing extraction as empty."""
    empty = ExtractionResult()
    return _pair_score(need.extraction or empty, avail.extraction or empty)


def _rank(anchor: Post, pool: list[Post], k: int, want: PostKind) -> list[MatchCandidate]:
    if k <= 0:
        return []
    scored: list[tuple[float, float, str, MatchCandidate]] = []
    for other in pool:
        if other.label is not want or other.status is not Status.ACTIVE or other.id == anchor.id:
            continue
        if want is PostKind.AVAILABILITY:
            score, common = post_pair_score(anchor, other)
            cand = MatchCandidate(anchor.id, other.id, score, common)
        else:
            score, common = post_pair_score(other, anchor)
            cand = MatchCandidate(other.id, anchor.id, score, common)
        if score <= 0.0:
            continue
        scored.append((-score, -other.created_at.timestamp(), other.id, cand))
    scored.sort(key=lambda t: (t[0], t[1], t[2]))
    return [cand for _, _, _, cand in scored[:k]]


def rank_availabilities(need: Post, pool: list[Post], k: int = 20) -> list[MatchCandidate]:
    """Top-k availabilities for a need: score desc, newest first, id asc.

    Zero-score candidates never appear; the result is a pure function
    of the pool contents, not their order.
    """
    return _rank(need, pool, k, PostKind.AVAILABILITY)


def rank_needs(avail: Post, pool: list[Post], k: int = 20) -> list[MatchCandidate]:
    """Symmetric ranking: which needs does this availability serve."""
    return _rank(avail, pool, k, PostKind.NEED)


@dataclass
class TfidfStats:
    """Document frequencies for the tf-idf comparator (tf=count, idf=ln(N/df))."""

    n_docs: int
    df: dict[str, int] = field(default_factory=dict)

    def idf(self, token: str) -> float:
        d = self.df.get(token, 1)
        return math.log(self.n_docs / d) if self.n_docs > 0 else 0.0


def build_tfidf_stats(texts: list[TokenizedText]) -> TfidfStats:
    df: Counter[str] = Counter()
    for t in texts:
        df.update(set(t.lowered()))
    return TfidfStats(n_docs=len(texts), df=dict(df))


def score_pair_tfidf(need_text: TokenizedText, avail_text: TokenizedText, stats: TfidfStats) -> float:
    """Cosine similarity of tf-idf vectors, in [0, 1]."""
    a = Counter(need_text.lowered())
    b = Counter(avail_text.lowered())
    va = {t: c * stats.idf(t) for t, c in a.items()}
    vb = {t: c * stats.idf(t) for t, c in b.items()}
    dot = sum(w * vb[t] for t, w in va.items() if t in vb)
    na = math.sqrt(sum(w * w for w in va.values()))
    nb = math.sqrt(sum(w * w for w in vb.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return max(0.0, min(1.0, dot / (na * nb)))


def score_pair_common_nouns(
    need_text: TokenizedText, avail_text: TokenizedText, lexicon_vocab: frozenset[str]
) -> float:
    """Jaccard overlap of lowercase lexicon-noun tokens (comparator)."""

    def nouns(t: TokenizedText) -> set[str]:
        return {
            tok.surface.lower()
            for tok in t.tokens
            if not tok.is_capitalized and tok.surface.lower() in lexicon_vocab
        }

    a, b = nouns(need_text), nouns(avail_text)
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)
