"""Knowledge files every rule depends on.

Loads and validates the classed resource lexicon, the need/availability
cue lexicons, the covert-class cue lexicon, the number-word table, the
hashtag-segmentation wordlist and the stopword list.

File formats (UTF-8, "#" starts a comment line, blank lines ignored):
  resources.csv    phrase,class[,alias1;alias2...]
  cues.csv         phrase,need|avail
  covert_cues.csv  phrase,class[;class...]
  wordlist.txt     one lowercase word per line
  stopwords.txt    one lowercase word per line
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from pathlib import Path

from .model import ResourceClass


class FormatError(ValueError):
    def __init__(self, path: str, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class ConflictError(ValueError):
    def __init__(self, phrase: str, message: str):
        super().__init__(f"conflicting entry {phrase!r}: {message}")
        self.phrase = phrase


def _normalize(phrase: str) -> str:
    return " ".join(phrase.lower().split())


@dataclass(frozen=True)
class ResourceEntry:
    phrase: str
    resource_class: ResourceClass
    aliases: tuple[str, ...] = ()


class ResourceLexicon:
    """Classed resource phrases with an alias table.

    Aliases stand in for the embedding-based semantic unification used
    at full scale: any alias canonicalizes to its entry's phrase.
    """

    def __init__(self, entries: list[ResourceEntry]):
        self.entries = list(entries)
        self._by_phrase: dict[str, ResourceEntry] = {}
        self._alias_to_phrase: dict[str, str] = {}
        for e in self.entries:
            if e.phrase in self._by_phrase:
                raise ConflictError(e.phrase, "duplicate phrase")
            if e.phrase in self._alias_to_phrase:
                raise ConflictError(e.phrase, "phrase already used as an alias")
            self._by_phrase[e.phrase] = e
        for e in self.entries:
            for alias in e.aliases:
                if alias in self._by_phrase:
                    raise ConflictError(alias, "alias collides with a phrase")
                if alias in self._alias_to_phrase and self._alias_to_phrase[alias] != e.phrase:
                    raise ConflictError(alias, "alias maps to two phrases")
                self._alias_to_phrase[alias] = e.phrase
        self.max_phrase_tokens = max((len(e.phrase.split()) for e in self.entries), default=1)

    def __len__(self) -> int:
        return len(self.entries)

    def phrases(self) -> list[str]:
        return [e.phrase for e in self.entries]

    def canonical(self, text: str) -> tuple[str, ResourceClass] | None:
        """Resolve an exact phrase or alias to (canonical phrase, class)."""
        key = _normalize(text)
        phrase = self._alias_to_phrase.get(key, key)
        entry = self._by_phrase.get(phrase)
        return (entry.phrase, entry.resource_class) if entry else None

    def class_of(self, phrase: str) -> ResourceClass | None:
        entry = self._by_phrase.get(phrase)
        return entry.resource_class if entry else None

    def dump(self) -> str:
        """Serialize back to the CSV wire format (round-trips exactly)."""
        lines = ["# phrase,class[,alias1;alias2...]"]
        for e in self.entries:
            row = f"{e.phrase},{e.resource_class.value}"
            if e.aliases:
                row += "," + ";".join(e.aliases)
            lines.append(row)
        return "\n".join(lines) + "\n"


_SUFFIXES = ("s", "es", "ed", "d", "ing")


def _morph_variants(word: str) -> set[str]:
    """Plural/-ed/-ing variants of a single word (head-word expansion)."""
    out = {word}
    for suf in _SUFFIXES:
        out.add(word + suf)
    if word.endswith("e"):
        out.add(word[:-1] + "ing")
        out.add(word + "d")
    return out


@dataclass(frozen=True)
class CueLexicon:
    need_cues: frozenset[str]
    avail_cues: frozenset[str]
    covert_cues: dict[str, frozenset[ResourceClass]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        overlap = self.need_cues & self.avail_cues
        if overlap:
            raise ConflictError(sorted(overlap)[0], "cue in both need and avail lists")

    @property
    def head_words(self) -> frozenset[str]:
        """Cue phrases plus morphological variants; licenses resource candidates."""
        base = self.need_cues | self.avail_cues
        expanded: set[str] = set()
        for phrase in base:
            if " " in phrase:
                expanded.add(phrase)
            else:
                expanded |= _morph_variants(phrase)
        return frozenset(expanded)

    def cue_unigrams(self) -> frozenset[str]:
        out: set[str] = set()
        for phrase in self.need_cues | self.avail_cues:
            out.update(phrase.split())
        return frozenset(out)


_UNITS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5, "six": 6,
    "seven": 7, "eight": 8, "nine": 9,
}
_TEENS = {
    "ten": 10, "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
}
_TENS = {
    "twenty": 20, "thirty": 30, "forty": 40, "fifty": 50, "sixty": 60,
    "seventy": 70, "eighty": 80, "ninety": 90,
}
_SCALES = {"hundred": 100, "thousand": 1_000, "million": 1_000_000}


class NumberWordTable:
    """Written numbers and digit strings to non-negative integers."""

    def __init__(self) -> None:
        self.words: dict[str, int] = {**_UNITS, **_TEENS, **_TENS, **_SCALES}
        self.scales = dict(_SCALES)

    def digit_value(self, token: str) -> int | None:
        """Integer reading of a digit string, commas allowed as grouping."""
        bare = token.replace(",", "")
        if bare.isdigit() and token and token[0].isdigit() and token[-1].isdigit():
            return int(bare)
        return None

    def is_numeric_token(self, token: str) -> bool:
        low = token.lower()
        return low in self.words or self.digit_value(token) is not None

    def value_of_phrase(self, tokens: list[str]) -> int | None:
        """Compose a numeric phrase; None when the sequence is ill-formed.

        Scale words multiply the running group ("two hundred" -> 200,
        "20 thousand" -> 20000); two non-scale numbers in a row do not
        compose ("two two" is rejected).
        """
        if not tokens:
            return None
        total = 0
        current = 0
        last = "start"  # start | unit | teen | ten | digit | hundred | scale
        for tok in tokens:
            low = tok.lower()
            digit = self.digit_value(tok)
            if digit is not None:
                if last not in ("start", "scale"):
                    return None
                current += digit
                last = "digit"
            elif low == "hundred":
                if last in ("hundred", "digit"):
                    return None
                current = (current or 1) * 100
                last = "hundred"
            elif low in ("thousand", "million"):
                if last == "scale":
                    return None
                total += (current or 1) * self.scales[low]
                current = 0
                last = "scale"
            elif low in _TENS:
                if last in ("ten", "teen", "unit", "digit"):
                    return None
                current += _TENS[low]
                last = "ten"
            elif low in _TEENS:
                if last in ("ten", "teen", "unit", "digit"):
                    return None
                current += _TEENS[low]
                last = "teen"
            elif low in _UNITS:
                if last in ("teen", "unit", "digit"):
                    return None
                current += _UNITS[low]
                last = "unit"
            else:
                return None
        return total + current


def parse_number(
    tokens: list[str], at: int, table: NumberWordTable | None = None
) -> tuple[int, tuple[int, int]] | None:
    """Parse the longest numeric phrase ending at index ``at``.

    Scans leftward greedily; returns (value, (start, at)) or None when
    the token at ``at`` is not numeric.
    """
    table = table or NumberWordTable()
    if at < 0 or at >= len(tokens):
        raise IndexError(f"index {at} out of range")
    if not table.is_numeric_token(tokens[at]):
        return None
    start = at
    while start > 0 and table.is_numeric_token(tokens[start - 1]):
        start -= 1
    while start <= at:
        value = table.value_of_phrase(tokens[start : at + 1])
        if value is not None:
            return value, (start, at)
        start += 1
    return None


@dataclass(frozen=True)
class LexiconSet:
    resources: ResourceLexicon
    cues: CueLexicon
    numbers: NumberWordTable
    wordlist: frozenset[str]
    stopwords: frozenset[str]


def _data_lines(path: Path) -> list[tuple[int, str]]:
    out = []
    for i, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append((i, line))
    return out


def load_resource_lexicon(path: Path) -> ResourceLexicon:
    entries: list[ResourceEntry] = []
    lines = _data_lines(path)
    if not lines:
        warnings.warn(f"resource lexicon {path} is empty", stacklevel=2)
    for line_no, line in lines:
        parts = [p.strip() for p in line.split(",")]
        if len(parts) < 2 or len(parts) > 3:
            raise FormatError(str(path), line_no, "expected phrase,class[,aliases]")
        phrase = _normalize(parts[0])
        if not phrase or len(phrase.split()) > 3:
            raise FormatError(str(path), line_no, "phrase must be 1-3 tokens")
        try:
            rclass = ResourceClass(parts[1].lower())
        except ValueError:
            raise FormatError(str(path), line_no, f"unknown class {parts[1]!r}") from None
        aliases = ()
        if len(parts) == 3 and parts[2]:
            aliases = tuple(_normalize(a) for a in parts[2].split(";") if a.strip())
        entries.append(ResourceEntry(phrase, rclass, aliases))
    return ResourceLexicon(entries)


def load_cue_lexicon(cues_path: Path, covert_path: Path | None = None) -> CueLexicon:
    need: set[str] = set()
    avail: set[str] = set()
    lines = _data_lines(cues_path)
    if not lines:
        warnings.warn(f"cue lexicon {cues_path} is empty", stacklevel=2)
    for line_no, line in lines:
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise FormatError(str(cues_path), line_no, "expected phrase,need|avail")
        phrase = _normalize(parts[0])
        side = parts[1].lower()
        if side == "need":
            need.add(phrase)
        elif side == "avail":
            avail.add(phrase)
        else:
            raise FormatError(str(cues_path), line_no, f"side must be need|avail, got {parts[1]!r}")
    covert: dict[str, frozenset[ResourceClass]] = {}
    if covert_path is not None:
        for line_no, line in _data_lines(covert_path):
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2:
                raise FormatError(str(covert_path), line_no, "expected phrase,class[;class...]")
            phrase = _normalize(parts[0])
            try:
                classes = frozenset(ResourceClass(c.strip().lower()) for c in parts[1].split(";"))
            except ValueError:
                raise FormatError(str(covert_path), line_no, f"unknown class in {parts[1]!r}") from None
            if phrase in covert:
                raise ConflictError(phrase, "duplicate covert cue")
            covert[phrase] = classes
    return CueLexicon(frozenset(need), frozenset(avail), covert)


def load_wordfile(path: Path) -> frozenset[str]:
    return frozenset(line.lower() for _, line in _data_lines(path))


@dataclass(frozen=True)
class LexiconPaths:
    resources: Path
    cues: Path
    covert_cues: Path
    wordlist: Path
    stopwords: Path


def load_lexicons(paths: LexiconPaths) -> LexiconSet:
    for p in (paths.resources, paths.cues, paths.covert_cues, paths.wordlist, paths.stopwords):
        if not Path(p).exists():
            raise FileNotFoundError(p)
    return LexiconSet(
        resources=load_resource_lexicon(Path(paths.resources)),
        cues=load_cue_lexicon(Path(paths.cues), Path(paths.covert_cues)),
        numbers=NumberWordTable(),
        wordlist=load_wordfile(Path(paths.wordlist)),
        stopwords=load_wordfile(Path(paths.stopwords)),
    )


def data_path(name: str) -> Path:
    """Path of a packaged data file (lexicons, gazetteer, fixtures)."""
    return Path(str(importlib_resources.files("reliefmatch").joinpath("data", name)))


def default_paths() -> LexiconPaths:
    return LexiconPaths(
        resources=data_path("resources.csv"),
        cues=data_path("cues.csv"),
        covert_cues=data_path("covert_cues.csv"),
        wordlist=data_path("wordlist.txt"),
        stopwords=data_path("stopwords.txt"),
    )


def load_default() -> LexiconSet:
    return load_lexicons(default_paths())
