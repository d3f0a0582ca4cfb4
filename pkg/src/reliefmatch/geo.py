"""Location extraction and gazetteer verification.

Candidates come from segmented hashtags, capitalized-token runs and
preposition objects; a candidate survives only when the gazetteer knows
it and its coordinates fall inside the event's bounding box.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .lexicons import FormatError
from .model import VerifiedLocation
from .textprep import TokenizedText, segment_hashtag

GRANULARITIES = ("poi", "city", "region", "country")  # finest first
_GRANULARITY_RANK = {g: i for i, g in enumerate(GRANULARITIES)}

_PREPOSITIONS = frozenset({"in", "at", "near", "from", "to"})


@dataclass(frozen=True)
class GazetteerEntry:
    name: str
    lat: float
    lon: float
    granularity: str


class GazetteerSnapshot:
    def __init__(self, entries: list[GazetteerEntry], aliases: dict[str, str]):
        self.entries = {e.name: e for e in entries}
        self.aliases = dict(aliases)
        for e in self.entries.values():
            if not (-90.0 <= e.lat <= 90.0) or not (-180.0 <= e.lon <= 180.0):
                raise ValueError(f"coordinates out of range for {e.name!r}")
        for alias, target in self.aliases.items():
            if target not in self.entries:
                raise ValueError(f"alias {alias!r} points at unknown entry {target!r}")

    def __len__(self) -> int:
        return len(self.entries)

    def resolve(self, name: str) -> GazetteerEntry | None:
        key = " ".join(name.lower().split())
        return self.entries.get(self.aliases.get(key, key))


def load_gazetteer(path: Path) -> GazetteerSnapshot:
    entries: list[GazetteerEntry] = []
    aliases: dict[str, str] = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) not in (4, 5):
            raise FormatError(str(path), line_no, "expected name,lat,lon,granularity[,aliases]")
        name = " ".join(parts[0].lower().split())
        try:
            lat, lon = float(parts[1]), float(parts[2])
        except ValueError:
            raise FormatError(str(path), line_no, "lat/lon must be numbers") from None
        granularity = parts[3].lower()
        if granularity not in _GRANULARITY_RANK:
            raise FormatError(str(path), line_no, f"unknown granularity {parts[3]!r}")
        entries.append(GazetteerEntry(name, lat, lon, granularity))
        if len(parts) == 5 and parts[4]:
            for alias in parts[4].split(";"):
                aliases[" ".join(alias.lower().split())] = name
    return GazetteerSnapshot(entries, aliases)


@dataclass(frozen=True)
class EventBounds:
    event_id: str
    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def __post_init__(self) -> None:
        if not (self.lat_min < self.lat_max and self.lon_min < self.lon_max):
            raise ValueError(f"degenerate bounding box for {self.event_id!r}")

    def contains(self, lat: float, lon: float) -> bool:
        return self.lat_min <= lat <= self.lat_max and self.lon_min <= lon <= self.lon_max


def load_event_bounds(path: Path) -> EventBounds:
    d = json.loads(Path(path).read_text(encoding="utf-8"))
    lat_min, lat_max, lon_min, lon_max = d["bbox"]
    return EventBounds(d["event_id"], lat_min, lat_max, lon_min, lon_max)


def candidate_locations(text: TokenizedText, wordlist: frozenset[str] | set[str]) -> list[str]:
    """Potential place names, lowercased, first-seen order.

    Union of segmented hashtag tokens, capitalized runs (and their
    individual tokens) and tokens following {in, at, near, from, to}.
    """
    seen: dict[str, None] = {}

    def add(name: str) -> None:
        key = " ".join(name.lower().split())
        if key and key not in seen:
            seen[key] = None

    tokens = text.tokens
    for tok in tokens:
        if tok.from_hashtag:
            add(tok.surface)
            for part in segment_hashtag("#" + tok.surface.lower(), wordlist):
                add(part)

    run: list[str] = []
    for tok in tokens:
        if tok.is_capitalized:
            run.append(tok.surface)
        else:
            if run:
                _flush_run(run, add)
            run = []
    if run:
        _flush_run(run, add)

    lowered = text.lowered()
    for i, low in enumerate(lowered[:-1]):
        if low in _PREPOSITIONS:
            add(lowered[i + 1])

    return list(seen)


def _flush_run(run: list[str], add) -> None:
    if len(run) > 1:
        add(" ".join(run))
    for word in run:
        add(word)


def verify_locations(
    cands: list[str], gaz: GazetteerSnapshot, bounds: EventBounds
) -> list[VerifiedLocation]:
    """Keep candidates the gazetteer confirms inside the event bbox.

    Duplicates collapse by canonical name; output is ordered finest
    granularity first, then first-seen order.
    """
    found: dict[str, tuple[int, VerifiedLocation]] = {}
    for order, cand in enumerate(cands):
        entry = gaz.resolve(cand)
        if entry is None or not bounds.contains(entry.lat, entry.lon):
            continue
        if entry.name in found:
            continue
        found[entry.name] = (
            order,
            VerifiedLocation(
                surface=" ".join(cand.lower().split()),
                canonical=entry.name,
                lat=entry.lat,
                lon=entry.lon,
                granularity=entry.granularity,
            ),
        )
    ranked = sorted(found.values(), key=lambda t: (_GRANULARITY_RANK[t[1].granularity], t[0]))
    return [loc for _, loc in ranked]
