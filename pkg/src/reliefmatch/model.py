"""Shared domain vocabulary: posts, labels, extraction results, matches.

All types here are immutable values; mutation happens only through the
store. The JSON shapes produced by ``to_json``/``from_json`` are the
canonical wire format used by both the journal files and the REST API.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum


class PostKind(str, Enum):
    NEED = "need"
    AVAILABILITY = "availability"
    OTHER = "other"


# fixed class order used for score vectors and argmax tie-breaks
KIND_ORDER = (PostKind.NEED, PostKind.AVAILABILITY, PostKind.OTHER)


class ResourceClass(str, Enum):
    FOOD = "food"
    HEALTH = "health"
    SHELTER = "shelter"
    LOGISTICS = "logistics"


class Status(str, Enum):
    ACTIVE = "active"
    MATCHED = "matched"
    COMPLETED = "completed"


class LabelOrigin(str, Enum):
    GOLD = "gold"
    PREDICTED = "predicted"
    HUMAN_EDITED = "human-edited"


class SourceChannel(str, Enum):
    IMPORTED = "imported"
    MANUAL = "manual"


class ContactKind(str, Enum):
    PHONE = "phone"
    EMAIL = "email"


class IllegalTransition(ValueError):
    """Raised on a status change outside the allowed state machine."""


class ValidationError(ValueError):
    """A domain value violates one of its invariants."""


@dataclass(frozen=True)
class Contact:
    kind: ContactKind
    value: str

    def __post_init__(self) -> None:
        if self.kind is ContactKind.EMAIL and self.value.count("@") != 1:
            raise ValidationError(f"email must contain exactly one '@': {self.value!r}")
        if self.kind is ContactKind.PHONE:
            # masked digits (X) count toward the minimum length
            digits = sum(1 for c in self.value if c.isdigit() or c == "X")
            if digits < 7:
                raise ValidationError(f"phone needs >= 7 digit characters: {self.value!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "value": self.value}

    @classmethod
    def from_json(cls, d: dict) -> Contact:
        return cls(kind=ContactKind(d["kind"]), value=d["value"])


@dataclass(frozen=True)
class VerifiedLocation:
    surface: str
    canonical: str
    lat: float
    lon: float
    granularity: str  # country | region | city | poi

    def to_json(self) -> dict:
        return {
            "surface": self.surface,
            "canonical": self.canonical,
            "lat": self.lat,
            "lon": self.lon,
            "granularity": self.granularity,
        }

    @classmethod
    def from_json(cls, d: dict) -> VerifiedLocation:
        return cls(d["surface"], d["canonical"], float(d["lat"]), float(d["lon"]), d["granularity"])


def _normalized(resource: str) -> bool:
    return resource == " ".join(resource.split()) and resource == resource.lower() and bool(resource)


@dataclass(frozen=True)
class ExtractionResult:
    resources: frozenset[str] = frozenset()
    resource_classes: frozenset[ResourceClass] = frozenset()
    quantities: dict[str, int] = field(default_factory=dict)
    locations: tuple[VerifiedLocation, ...] = ()
    sources: tuple[str, ...] = ()
    contacts: tuple[Contact, ...] = ()

    def __post_init__(self) -> None:
        for r in self.resources:
            if not _normalized(r):
                raise ValidationError(f"resource not normalized: {r!r}")
        for key, qty in self.quantities.items():
            if key not in self.resources:
                raise ValidationError(f"quantity key {key!r} not among resources")
            if qty < 0:
                raise ValidationError(f"negative quantity for {key!r}")

    def to_json(self) -> dict:
        return {
            "resources": sorted(self.resources),
            "resource_classes": sorted(c.value for c in self.resource_classes),
            "quantities": {k: self.quantities[k] for k in sorted(self.quantities)},
            "locations": [loc.to_json() for loc in self.locations],
            "sources": list(self.sources),
            "contacts": [c.to_json() for c in self.contacts],
        }

    @classmethod
    def from_json(cls, d: dict) -> ExtractionResult:
        return cls(
            resources=frozenset(d.get("resources", [])),
            resource_classes=frozenset(ResourceClass(c) for c in d.get("resource_classes", [])),
            quantities={k: int(v) for k, v in d.get("quantities", {}).items()},
            locations=tuple(VerifiedLocation.from_json(x) for x in d.get("locations", [])),
            sources=tuple(d.get("sources", [])),
            contacts=tuple(Contact.from_json(x) for x in d.get("contacts", [])),
        )


def _iso(ts: datetime | None) -> str | None:
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z") if ts else None


def parse_ts(s: str) -> datetime:
    ts = datetime.fromisoformat(s.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


@dataclass(frozen=True)
class Post:
    id: str
    text_raw: str
    text_clean: str
    created_at: datetime
    source_channel: SourceChannel
    label: PostKind
    label_origin: LabelOrigin
    status: Status = Status.ACTIVE
    extraction: ExtractionResult | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("post id must be nonempty")
        if not self.text_raw:
            raise ValidationError("post text_raw must be nonempty")

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "text_raw": self.text_raw,
            "text_clean": self.text_clean,
            "created_at": _iso(self.created_at),
            "source_channel": self.source_channel.value,
            "label": self.label.value,
            "label_origin": self.label_origin.value,
            "status": self.status.value,
            "extraction": self.extraction.to_json() if self.extraction else None,
        }

    @classmethod
    def from_json(cls, d: dict) -> Post:
        return cls(
            id=d["id"],
            text_raw=d["text_raw"],
            text_clean=d["text_clean"],
            created_at=parse_ts(d["created_at"]),
            source_channel=SourceChannel(d["source_channel"]),
            label=PostKind(d["label"]),
            label_origin=LabelOrigin(d["label_origin"]),
            status=Status(d["status"]),
            extraction=ExtractionResult.from_json(d["extraction"]) if d.get("extraction") else None,
        )


_LEGAL_TRANSITIONS = {
    (Status.ACTIVE, Status.MATCHED),
    (Status.MATCHED, Status.COMPLETED),
    (Status.MATCHED, Status.ACTIVE),  # match discarded by a human
}


def transition_status(post: Post, to: Status) -> Post:
    """Move a post along the Active -> Matched -> Completed lifecycle.

    Completed is terminal; the only backward edge is Matched -> Active
    (discarding a wrong match). Any other pair raises IllegalTransition
    and leaves the input untouched.
    """
    if (post.status, to) not in _LEGAL_TRANSITIONS:
        raise IllegalTransition(f"{post.status.value} -> {to.value} is not allowed")
    return replace(post, status=to)


class MatchStatus(str, Enum):
    MATCHED = "matched"
    COMPLETED = "completed"


@dataclass(frozen=True)
class MatchRecord:
    id: str
    need_id: str
    avail_id: str
    score: float
    status: MatchStatus
    created_at: datetime
    completed_at: datetime | None = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.score <= 1.0):
            raise ValidationError(f"match score out of [0, 1]: {self.score}")
        if (self.status is MatchStatus.COMPLETED) != (self.completed_at is not None):
            raise ValidationError("completed_at must be set iff status is completed")

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "need_id": self.need_id,
            "avail_id": self.avail_id,
            "score": self.score,
            "status": self.status.value,
            "created_at": _iso(self.created_at),
            "completed_at": _iso(self.completed_at),
        }

    @classmethod
    def from_json(cls, d: dict) -> MatchRecord:
        return cls(
            id=d["id"],
            need_id=d["need_id"],
            avail_id=d["avail_id"],
            score=float(d["score"]),
            status=MatchStatus(d["status"]),
            created_at=parse_ts(d["created_at"]),
            completed_at=parse_ts(d["completed_at"]) if d.get("completed_at") else None,
        )
