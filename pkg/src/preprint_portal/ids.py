"""Article identifier validation.

Two syntaxes are accepted:

* new-style ``NNNN.NNNNN``: four-digit year/month prefix followed by a
  four or five digit sequence number, e.g. ``1712.00001``
* legacy ``archive/NNNNNNN``: archive (optionally with a subject class)
  and a seven digit number, e.g. ``cs/0112017`` or ``math.GT/0309136``
"""

from __future__ import annotations

import re

from .errors import BadIdentifier

NEW_STYLE_RE = re.compile(r"^\d{2}(0[1-9]|1[0-2])\.\d{4,5}$")
LEGACY_RE = re.compile(r"^[a-z-]+(\.[A-Z]{2})?/\d{7}$")

CATEGORY_RE = re.compile(r"^[a-z-]+(\.[A-Z]{2})?$")


def is_valid_id(value: str) -> bool:
    return bool(NEW_STYLE_RE.match(value) or LEGACY_RE.match(value))


def validate_id(value: str) -> str:
    """Return ``value`` unchanged or raise :class:`BadIdentifier`."""
    if not is_valid_id(value):
        raise BadIdentifier(value)
    return value


def is_valid_category(code: str) -> bool:
    return bool(CATEGORY_RE.match(code))
