"""Shared regular expressions for contact and noise detection.

Both the text cleaner and the contact extractor must agree on what an
email or a phone number looks like: the cleaner protects those spans so
the extractor can still find them verbatim afterwards.
"""

from __future__ import annotations

import re

# Email: alphanumeric/._%+- local part, dotted domain with a 2+ letter TLD.
EMAIL_RE = re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}")

# Phone: runs of digits (or the mask character X) joined by single
# separator characters -, space, ( or ).  A match only counts as a phone
# when it carries at least PHONE_MIN_DIGITS digit-or-mask characters;
# shorter runs ("1400") are ordinary numbers.
PHONE_SEQ_RE = re.compile(r"[0-9X]+(?:[- ()][0-9X]+)*")
PHONE_MIN_DIGITS = 7

# URLs: http(s) schemes, www.-prefixed hosts, and bare t.co shortlinks.
URL_RE = re.compile(r"(?:https?://\S+|www\.\S+|\bt\.co/\S+)")

MENTION_RE = re.compile(r"@\w+")

HASHTAG_RE = re.compile(r"#+(\w+)")


def phone_weight(s: str) -> int:
    """Number of digit-or-mask characters in a phone candidate."""
    return sum(1 for ch in s if ch.isdigit() or ch == "X")


def is_phone(s: str) -> bool:
    return phone_weight(s) >= PHONE_MIN_DIGITS
