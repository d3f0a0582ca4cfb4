"""Tweet-text normalization and token segmentation.

Cleaning rules, in order:
  * email addresses and phone-number sequences (including X-masked ones)
    are protected and survive verbatim as single tokens;
  * URLs and @-mentions are removed;
  * "#" and "&" are stripped, brackets / ellipses / emoji / any
    non-printable-ASCII codepoint become spaces;
  * CamelCase words and letter-digit junctions are split ("Nepal2015"
    -> "Nepal", "2015");
  * a leading standalone "RT" token is dropped;
  * letter case is preserved (no case folding, no stemming).

Tokens remember whether they came from a hashtag so downstream location
extraction can dictionary-segment them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .patterns import EMAIL_RE, HASHTAG_RE, MENTION_RE, PHONE_SEQ_RE, URL_RE, is_phone


class EmptyAfterCleaning(ValueError):
    """Raised when nothing but removable content remains."""


@dataclass(frozen=True)
class Token:
    surface: str
    start: int  # byte offset into clean_text (clean text is ASCII)
    end: int
    is_capitalized: bool
    is_numeric: bool
    from_hashtag: bool


@dataclass(frozen=True)
class TokenizedText:
    clean_text: str
    tokens: tuple[Token, ...]

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def lowered(self) -> list[str]:
        return [t.surface.lower() for t in self.tokens]


_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")
_ALNUM_BOUNDARY = re.compile(r"(?<=[A-Za-z])(?=[0-9])|(?<=[0-9])(?=[A-Za-z])")


def split_word(word: str) -> list[str]:
    """Split CamelCase and letter-digit junctions, preserving case."""
    parts = []
    for p in _CAMEL_BOUNDARY.split(word):
        parts.extend(q for q in _ALNUM_BOUNDARY.split(p) if q)
    return parts or [word]


def _is_numeric_surface(s: str) -> bool:
    return any(c.isdigit() for c in s) and all(c.isdigit() or c == "," for c in s)


def _clean_chars(segment: str) -> str:
    """Map a raw segment to printable-ASCII word characters.

    Keeps letters, digits and whitespace; keeps ','/'.' only between
    digits (so "20,000" stays one token); deletes apostrophes inside
    words; everything else becomes a space.
    """
    out: list[str] = []
    n = len(segment)
    for i, ch in enumerate(segment):
        if ch.isascii() and (ch.isalnum() or ch.isspace()):
            out.append(ch)
        elif ch in ",.":
            prev_digit = i > 0 and segment[i - 1].isdigit()
            next_digit = i + 1 < n and segment[i + 1].isdigit()
            out.append(ch if (prev_digit and next_digit) else " ")
        elif ch in "'`’":
            continue
        else:
            out.append(" ")
    return "".join(out)


def _protected_spans(raw: str) -> list[tuple[int, int, str]]:
    """Spans of raw text that must survive cleaning verbatim."""
    spans: list[tuple[int, int, str]] = []
    for m in EMAIL_RE.finditer(raw):
        spans.append((m.start(), m.end(), m.group()))
    for m in PHONE_SEQ_RE.finditer(raw):
        if not is_phone(m.group()):
            continue
        if any(s < m.end() and m.start() < e for s, e, _ in spans):
            continue
        # trim separators the greedy match may have glued on either end
        text = m.group().strip("-() ")
        spans.append((m.start(), m.start() + len(text), text))
    spans.sort()
    return spans


def preprocess(text_raw: str) -> TokenizedText:
    """Clean and tokenize one post. Raises EmptyAfterCleaning."""
    if not text_raw:
        raise EmptyAfterCleaning("empty input text")

    pieces: list[tuple[str, bool, bool]] = []  # (surface, from_hashtag, protected)

    def eat_plain(segment: str) -> None:
        segment = URL_RE.sub(" ", segment)
        segment = MENTION_RE.sub(" ", segment)
        cursor = 0
        for m in HASHTAG_RE.finditer(segment):
            _collect(segment[cursor : m.start()], False)
            _collect(m.group(1), True)
            cursor = m.end()
        _collect(segment[cursor:], False)

    def _collect(chunk: str, from_hashtag: bool) -> None:
        for word in _clean_chars(chunk).split():
            word = word.strip(",.")
            for part in split_word(word):
                if part:
                    pieces.append((part, from_hashtag, False))

    cursor = 0
    for start, end, surface in _protected_spans(text_raw):
        eat_plain(text_raw[cursor:start])
        pieces.append((surface, False, True))
        cursor = end
    eat_plain(text_raw[cursor:])

    while pieces and pieces[0][0] == "RT" and not pieces[0][2]:
        pieces.pop(0)

    if not pieces:
        raise EmptyAfterCleaning(f"nothing left after cleaning: {text_raw!r}")

    tokens: list[Token] = []
    offset = 0
    for surface, from_hashtag, _ in pieces:
        tokens.append(
            Token(
                surface=surface,
                start=offset,
                end=offset + len(surface),
                is_capitalized=surface[0].isalpha() and surface[0].isupper(),
                is_numeric=_is_numeric_surface(surface),
                from_hashtag=from_hashtag,
            )
        )
        offset += len(surface) + 1
    clean_text = " ".join(t.surface for t in tokens)
    return TokenizedText(clean_text=clean_text, tokens=tuple(tokens))


def segment_hashtag(tag: str, wordlist: frozenset[str] | set[str]) -> list[str]:
    """Split a hashtag into words.

    CamelCase tags split at case boundaries; all-lowercase tags are
    segmented against `wordlist` with the fewest words possible (ties
    prefer the longest first word). Unsegmentable tags come back whole,
    without the leading "#".
    """
    if not tag.startswith("#"):
        raise ValueError("hashtag must start with '#'")
    body = tag.lstrip("#")
    if not body:
        return [tag]
    parts = split_word(body)
    if len(parts) > 1:
        return parts
    if body.isalpha() and body.islower():
        segmented = _segment_lowercase(body, frozenset(wordlist))
        if segmented is not None:
            return segmented
    return [body]


def _segment_lowercase(body: str, words: frozenset[str]) -> list[str] | None:
    """Minimal-word-count dictionary segmentation, longest-first tie-break."""
    n = len(body)
    best = [None] * (n + 1)  # fewest words needed to cover body[i:]
    best[n] = 0
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n + 1):
            if body[i:j] in words and best[j] is not None:
                cand = best[j] + 1
                if best[i] is None or cand < best[i]:
                    best[i] = cand
    if best[0] is None:
        return None
    out: list[str] = []
    i = 0
    while i < n:
        # among splits keeping the total minimal, take the longest word here
        for j in range(n, i, -1):
            if body[i:j] in words and best[j] is not None and best[j] + 1 == best[i]:
                out.append(body[i:j])
                i = j
                break
    return out
