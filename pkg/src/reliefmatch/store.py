"""Durable post/match storage over a single append-only journal file.

One JSON object per line: {"rev", "op", "payload", "ts"}. The in-memory
index is rebuilt by replaying the journal at startup, so replay from an
empty index always reproduces the exact store state. Writers serialize
behind one lock (single-writer/multi-reader); every mutation is flushed
and fsynced before it returns.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from . import matcher
from .model import (
    IllegalTransition,
    MatchRecord,
    MatchStatus,
    Post,
    PostKind,
    Status,
    ValidationError,
    transition_status,
)


class DuplicateId(ValueError):
    pass


class NotFound(KeyError):
    pass


class KindMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Page:
    items: list
    total: int
    limit: int
    offset: int
    revision: int

    def to_json(self) -> dict:
        return {
            "items": [it.to_json() for it in self.items],
            "total": self.total,
            "limit": self.limit,
            "offset": self.offset,
            "revision": self.revision,
        }


@dataclass(frozen=True)
class PostFilter:
    kind: PostKind | None = None
    status: Status | None = None
    resource: str | None = None
    text_substring: str | None = None
    limit: int = 50
    offset: int = 0


class Store:
    def __init__(self, path: str | Path, fsync: bool = True):
        self.path = Path(path)
        self.fsync = fsync
        self._lock = threading.RLock()
        self.posts: dict[str, Post] = {}
        self.matches: dict[str, MatchRecord] = {}
        self.revision = 0
        self.path.parent.mkdir(parents=True, exist_ok=True)
        if self.path.exists():
            self._replay()
        self._fh = open(self.path, "a", encoding="utf-8")

    # -- journal ---------------------------------------------------------

    def _replay(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for raw in fh:
                raw = raw.strip()
                if not raw:
                    continue
                try:
                    entry = json.loads(raw)
                except json.JSONDecodeError:
                    break  # torn tail write; everything before it is valid
                self._apply(entry["op"], entry["payload"])
                self.revision = entry["rev"]

    def _append(self, op: str, payload: dict) -> int:
        rev = self.revision + 1
        entry = {
            "rev": rev,
            "op": op,
            "payload": payload,
            "ts": datetime.now(timezone.utc).isoformat(),
        }
        self._fh.write(json.dumps(entry, sort_keys=True) + "\n")
        self._fh.flush()
        if self.fsync:
            os.fsync(self._fh.fileno())
        self._apply(op, payload)
        self.revision = rev
        return rev

    def _apply(self, op: str, payload: dict) -> None:
        if op == "put_post":
            post = Post.from_json(payload)
            self.posts[post.id] = post
        elif op == "create_match":
            record = MatchRecord.from_json(payload)
            self.matches[record.id] = record
            self.posts[record.need_id] = transition_status(self.posts[record.need_id], Status.MATCHED)
            self.posts[record.avail_id] = transition_status(self.posts[record.avail_id], Status.MATCHED)
        elif op == "complete_match":
            record = self.matches[payload["match_id"]]
            completed = replace(
                record,
                status=MatchStatus.COMPLETED,
                completed_at=datetime.fromisoformat(payload["completed_at"]),
            )
            self.matches[record.id] = completed
            self.posts[record.need_id] = transition_status(self.posts[record.need_id], Status.COMPLETED)
            self.posts[record.avail_id] = transition_status(self.posts[record.avail_id], Status.COMPLETED)
        elif op == "discard_match":
            record = self.matches.pop(payload["match_id"])
            self.posts[record.need_id] = transition_status(self.posts[record.need_id], Status.ACTIVE)
            self.posts[record.avail_id] = transition_status(self.posts[record.avail_id], Status.ACTIVE)
        else:
            raise ValueError(f"unknown journal op {op!r}")

    def close(self) -> None:
        self._fh.close()

    # -- posts -----------------------------------------------------------

    def put_post(self, post: Post) -> int:
        with self._lock:
            if post.id in self.posts:
                raise DuplicateId(post.id)
            if post.status is not Status.ACTIVE:
                raise ValidationError("new posts must be Active (matches drive other statuses)")
            return self._append("put_post", post.to_json())

    def get_post(self, post_id: str) -> Post:
        with self._lock:
            if post_id not in self.posts:
                raise NotFound(post_id)
            return self.posts[post_id]

    def query_posts(self, flt: PostFilter) -> Page:
        """Conjunctive filter, reverse chronological, stable pagination."""
        if flt.limit < 1:
            raise ValueError("limit must be >= 1")
        if flt.offset < 0:
            raise ValueError("offset must be >= 0")
        with self._lock:
            revision = self.revision
            posts = list(self.posts.values())
        selected = [p for p in posts if self._matches_filter(p, flt)]
        selected.sort(key=lambda p: (-p.created_at.timestamp(), p.id))
        window = selected[flt.offset : flt.offset + flt.limit]
        return Page(window, total=len(selected), limit=flt.limit, offset=flt.offset, revision=revision)

    @staticmethod
    def _matches_filter(p: Post, flt: PostFilter) -> bool:
        if flt.kind is not None and p.label is not flt.kind:
            return False
        if flt.status is not None and p.status is not flt.status:
            return False
        if flt.resource is not None:
            if p.extraction is None or flt.resource.lower() not in p.extraction.resources:
                return False
        if flt.text_substring is not None:
            if flt.text_substring.lower() not in p.text_raw.lower():
                return False
        return True

    def all_posts(self) -> list[Post]:
        with self._lock:
            return list(self.posts.values())

    # -- matches ---------------------------------------------------------

    def get_match(self, match_id: str) -> MatchRecord:
        with self._lock:
            if match_id not in self.matches:
                raise NotFound(match_id)
            return self.matches[match_id]

    def query_matches(self, status: MatchStatus | None = None) -> list[MatchRecord]:
        with self._lock:
            records = list(self.matches.values())
        if status is not None:
            records = [r for r in records if r.status is status]
        records.sort(key=lambda r: (-r.created_at.timestamp(), r.id))
        return records

    def create_match(self, need_id: str, avail_id: str) -> MatchRecord:
        """Pair a need with an availability; both must be Active.

        The stored score is recomputed from the two posts' resources at
        creation time. Atomic: the journal carries one entry and replay
        re-derives all three record updates from it.
        """
        with self._lock:
            need = self.posts.get(need_id)
            avail = self.posts.get(avail_id)
            if need is None:
                raise NotFound(need_id)
            if avail is None:
                raise NotFound(avail_id)
            if need.label is not PostKind.NEED:
                raise KindMismatch(f"{need_id} is {need.label.value}, expected need")
            if avail.label is not PostKind.AVAILABILITY:
                raise KindMismatch(f"{avail_id} is {avail.label.value}, expected availability")
            if need.status is not Status.ACTIVE or avail.status is not Status.ACTIVE:
                raise IllegalTransition("both posts must be Active to create a match")
            score, _common = matcher.post_pair_score(need, avail)
            record = MatchRecord(
                id=f"m-{self.revision + 1}",
                need_id=need_id,
                avail_id=avail_id,
                score=score,
                status=MatchStatus.MATCHED,
                created_at=datetime.now(timezone.utc),
            )
            self._append("create_match", record.to_json())
            return record

    def complete_match(self, match_id: str) -> MatchRecord:
        with self._lock:
            if match_id not in self.matches:
                raise NotFound(match_id)
            record = self.matches[match_id]
            if record.status is not MatchStatus.MATCHED:
                raise IllegalTransition(f"match {match_id} is {record.status.value}")
            completed_at = datetime.now(timezone.utc)
            self._append(
                "complete_match",
                {"match_id": match_id, "completed_at": completed_at.isoformat()},
            )
            return self.matches[match_id]

    def discard_match(self, match_id: str) -> int:
        with self._lock:
            if match_id not in self.matches:
                raise NotFound(match_id)
            record = self.matches[match_id]
            if record.status is not MatchStatus.MATCHED:
                raise IllegalTransition("only Matched matches can be discarded")
            return self._append("discard_match", {"match_id": match_id})

    # -- integrity -------------------------------------------------------

    def state_hash(self) -> str:
        """SHA-256 over the canonical JSON of the full store state."""
        with self._lock:
            doc = {
                "revision": self.revision,
                "posts": [self.posts[k].to_json() for k in sorted(self.posts)],
                "matches": [self.matches[k].to_json() for k in sorted(self.matches)],
            }
        return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()

    def check_invariants(self) -> None:
        """Raise ValidationError on any broken referential/status rule."""
        with self._lock:
            live_refs: dict[str, list[MatchRecord]] = {}
            for record in self.matches.values():
                for pid in (record.need_id, record.avail_id):
                    if pid not in self.posts:
                        raise ValidationError(f"match {record.id} references missing post {pid}")
                    live_refs.setdefault(pid, []).append(record)
                if self.posts[record.need_id].label is not PostKind.NEED:
                    raise ValidationError(f"match {record.id} need side is not a need")
                if self.posts[record.avail_id].label is not PostKind.AVAILABILITY:
                    raise ValidationError(f"match {record.id} avail side is not an availability")
            for post in self.posts.values():
                refs = live_refs.get(post.id, [])
                if post.status is Status.ACTIVE and refs:
                    raise ValidationError(f"active post {post.id} has live matches")
                if post.status in (Status.MATCHED, Status.COMPLETED):
                    if len(refs) != 1:
                        raise ValidationError(
                            f"post {post.id} is {post.status.value} with {len(refs)} live matches"
                        )
                    expected = MatchStatus.MATCHED if post.status is Status.MATCHED else MatchStatus.COMPLETED
                    if refs[0].status is not expected:
                        raise ValidationError(f"post {post.id} status disagrees with match {refs[0].id}")
