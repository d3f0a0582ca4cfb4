"""Field extraction from need/availability posts.

Resources come from two routes: an n-gram scan against the lexicon, and
token spans inside a 4-token window after any head-word (the shallow
stand-in for dependency-child inspection). Candidates are verified by
exact/alias lookup or normalized edit similarity, quantities attach to
the nearest preceding numeric phrase, contacts come from regexes, and
sources are the leftover capitalized runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import kernels
from .lexicons import CueLexicon, NumberWordTable, ResourceLexicon, parse_number
from .model import Contact, ContactKind, ResourceClass
from .patterns import EMAIL_RE, PHONE_SEQ_RE, is_phone
from .textprep import TokenizedText

HEAD_WINDOW = 4  # tokens after a head-word that may hold its resources
QUANTITY_SKIP = 2  # non-numeric modifier tokens to skip when looking left
DEFAULT_SIM_THRESHOLD = 0.8
MAX_PHRASE_TOKENS = 3


class CandidateOrigin(str, Enum):
    HEAD_WORD_RULE = "head_word_rule"
    LEXICON_SCAN = "lexicon_scan"


@dataclass(frozen=True)
class CandidatePhrase:
    tokens: str  # surface text, space-joined
    origin: CandidateOrigin
    position: tuple[int, int]  # inclusive token index range
    head_word: str | None = None

    def __post_init__(self) -> None:
        if self.origin is CandidateOrigin.HEAD_WORD_RULE and not self.head_word:
            raise ValueError("head-word candidates must name their head word")


def _phrase_occurrences(lowered: list[str], phrase: str) -> list[tuple[int, int]]:
    """Inclusive token spans where a (possibly multi-word) phrase occurs."""
    words = phrase.split()
    n = len(words)
    out = []
    for i in range(len(lowered) - n + 1):
        if lowered[i : i + n] == words:
            out.append((i, i + n - 1))
    return out


def candidate_resources(
    text: TokenizedText,
    cues: CueLexicon,
    lex: ResourceLexicon,
    stopwords: frozenset[str] = frozenset(),
) -> list[CandidatePhrase]:
    lowered = text.lowered()
    tokens = text.tokens
    by_span: dict[tuple[int, int], CandidatePhrase] = {}

    max_n = min(MAX_PHRASE_TOKENS, lex.max_phrase_tokens)
    for n in range(1, max_n + 1):
        for i in range(len(lowered) - n + 1):
            ngram = " ".join(lowered[i : i + n])
            if lex.canonical(ngram) is not None:
                span = (i, i + n - 1)
                by_span.setdefault(
                    span,
                    CandidatePhrase(
                        tokens=" ".join(t.surface for t in tokens[i : i + n]),
                        origin=CandidateOrigin.LEXICON_SCAN,
                        position=span,
                    ),
                )

    cue_words = cues.cue_unigrams()
    head_words = cues.head_words
    stop = stopwords

    def eligible(idx: int) -> bool:
        tok = tokens[idx]
        low = lowered[idx]
        return (
            tok.surface.isalpha()
            and not tok.is_numeric
            and low not in stop
            and low not in cue_words
        )

    for head in head_words:
        for _, h_end in _phrase_occurrences(lowered, head):
            window_end = min(len(tokens), h_end + 1 + HEAD_WINDOW)
            for i in range(h_end + 1, window_end):
                if not eligible(i):
                    continue
                for j in range(i, min(i + MAX_PHRASE_TOKENS, window_end)):
                    if not eligible(j):
                        break
                    span = (i, j)
                    by_span.setdefault(
                        span,
                        CandidatePhrase(
                            tokens=" ".join(t.surface for t in tokens[i : j + 1]),
                            origin=CandidateOrigin.HEAD_WORD_RULE,
                            position=span,
                            head_word=head,
                        ),
                    )

    return sorted(by_span.values(), key=lambda c: c.position)


def verify_resources(
    cands: list[CandidatePhrase],
    lex: ResourceLexicon,
    sim_threshold: float = DEFAULT_SIM_THRESHOLD,
) -> set[tuple[str, ResourceClass]]:
    """Accept candidates that match the lexicon exactly or near enough.

    Accepted candidates canonicalize to the matching lexicon phrase and
    carry its class.
    """
    if not (0.0 < sim_threshold <= 1.0):
        raise ValueError("sim_threshold must be in (0, 1]")
    accepted: set[tuple[str, ResourceClass]] = set()
    phrases = lex.phrases()
    for cand in cands:
        norm = " ".join(cand.tokens.lower().split())
        hit = lex.canonical(norm)
        if hit is not None:
            accepted.add(hit)
            continue
        best: tuple[float, str] | None = None
        for phrase in phrases:
            sim = kernels.similarity(norm, phrase)
            if sim >= sim_threshold and (best is None or sim > best[0] or (sim == best[0] and phrase < best[1])):
                best = (sim, phrase)
        if best is not None:
            rclass = lex.class_of(best[1])
            assert rclass is not None
            accepted.add((best[1], rclass))
    return accepted


class CovertTagger:
    """Multi-label resource-class tagger from covert cue phrases.

    ``extra_cues`` lets the pipeline fold the resource lexicon in, so a
    post naming a resource always carries at least that class.
    """

    def __init__(
        self,
        covert_cues: dict[str, frozenset[ResourceClass]],
        extra_cues: dict[str, frozenset[ResourceClass]] | None = None,
    ):
        self.cues: dict[str, frozenset[ResourceClass]] = dict(covert_cues)
        for phrase, classes in (extra_cues or {}).items():
            self.cues[phrase] = self.cues.get(phrase, frozenset()) | classes

    @classmethod
    def from_lexicons(cls, cues: CueLexicon, lex: ResourceLexicon) -> CovertTagger:
        derived: dict[str, frozenset[ResourceClass]] = {}
        for entry in lex.entries:
            derived[entry.phrase] = frozenset({entry.resource_class})
            for alias in entry.aliases:
                derived[alias] = frozenset({entry.resource_class})
        return cls(cues.covert_cues, derived)

    def tag(self, text: TokenizedText) -> tuple[set[ResourceClass], dict[ResourceClass, float]]:
        lowered = text.lowered()
        scores: dict[ResourceClass, float] = {c: 0.0 for c in ResourceClass}
        for phrase, classes in self.cues.items():
            hits = len(_phrase_occurrences(lowered, phrase))
            if hits:
                for c in classes:
                    scores[c] += hits
        return {c for c, s in scores.items() if s > 0}, scores


def tag_covert(text: TokenizedText, tagger: CovertTagger) -> set[ResourceClass]:
    classes, _ = tagger.tag(text)
    return classes


def attach_quantities(
    text: TokenizedText, resources: set[str], nums: NumberWordTable, lex: ResourceLexicon
) -> dict[str, int]:
    """Bind each resource to the numeric phrase just before its mention.

    Scans leftward from each occurrence, skipping at most QUANTITY_SKIP
    non-numeric modifier tokens ("more", "than"); the first binding for
    a resource wins.
    """
    lowered = text.lowered()
    surfaces = text.surfaces()
    out: dict[str, int] = {}

    occurrences: list[tuple[int, int, str]] = []
    for n in range(1, MAX_PHRASE_TOKENS + 1):
        for i in range(len(lowered) - n + 1):
            ngram = " ".join(lowered[i : i + n])
            hit = lex.canonical(ngram)
            if hit is not None and hit[0] in resources:
                occurrences.append((i, i + n - 1, hit[0]))
    occurrences.sort()

    for start, _end, resource in occurrences:
        if resource in out:
            continue
        idx = start - 1
        skipped = 0
        while idx >= 0 and skipped <= QUANTITY_SKIP:
            if nums.is_numeric_token(surfaces[idx]):
                parsed = parse_number(surfaces, idx, nums)
                if parsed is not None:
                    out[resource] = parsed[0]
                break
            skipped += 1
            idx -= 1
    return out


def extract_contacts(text_clean: str) -> list[Contact]:
    """Emails and (possibly X-masked) phone numbers, longest match wins."""
    found: list[tuple[int, Contact]] = []
    taken: list[tuple[int, int]] = []
    for m in EMAIL_RE.finditer(text_clean):
        found.append((m.start(), Contact(ContactKind.EMAIL, m.group())))
        taken.append((m.start(), m.end()))
    for m in PHONE_SEQ_RE.finditer(text_clean):
        if not is_phone(m.group()):
            continue
        if any(s < m.end() and m.start() < e for s, e in taken):
            continue
        found.append((m.start(), Contact(ContactKind.PHONE, m.group().strip())))
    found.sort(key=lambda t: t[0])
    out: list[Contact] = []
    for _, contact in found:
        if contact not in out:
            out.append(contact)
    return out


def extract_sources(
    text: TokenizedText,
    locations: set[str],
    resources: set[str],
    lex: ResourceLexicon,
    cues: CueLexicon,
    stopwords: frozenset[str],
) -> list[str]:
    """Capitalized runs not already consumed as locations or resources.

    Runs adjacent to a giving/requesting verb (the head-word list) come
    first. A single capitalized token opening the text only counts when
    verb-adjacent, which drops bare sentence-initial words.
    """
    lowered = text.lowered()
    tokens = text.tokens

    consumed: set[int] = set()
    location_words = set()
    for loc in locations:
        location_words.update(loc.lower().split())
    for i, low in enumerate(lowered):
        if low in location_words:
            consumed.add(i)
    for n in range(1, MAX_PHRASE_TOKENS + 1):
        for i in range(len(lowered) - n + 1):
            ngram = " ".join(lowered[i : i + n])
            hit = lex.canonical(ngram)
            if hit is not None and hit[0] in resources:
                consumed.update(range(i, i + n))

    cue_words = cues.cue_unigrams()
    head_words = {w for w in cues.head_words if " " not in w}

    runs: list[tuple[int, int]] = []
    start = None
    for i, tok in enumerate(tokens):
        usable = tok.is_capitalized and tok.surface.isalpha() and i not in consumed
        if usable and start is None:
            start = i
        elif not usable and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(tokens) - 1))

    def verb_adjacent(span: tuple[int, int]) -> bool:
        before, after = span[0] - 1, span[1] + 1
        if before >= 0 and lowered[before] in head_words:
            return True
        return after < len(lowered) and lowered[after] in head_words

    picked: list[tuple[bool, int, str]] = []
    for span in runs:
        s, e = span
        surface = " ".join(tokens[i].surface for i in range(s, e + 1))
        if s == e:
            low = lowered[s]
            if low in stopwords or low in cue_words:
                continue
            if s == 0 and not verb_adjacent(span):
                continue
        picked.append((not verb_adjacent(span), s, surface))
    picked.sort()
    return [surface for _, _, surface in picked]
