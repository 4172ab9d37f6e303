"""Incremental metadata harvesting over an OAI-PMH subset.

One harvest round per invocation: ``ListRecords`` with ``from`` set to the
cursor's last completed datestamp, then resumption tokens until the final
page. A 503 with Retry-After maps to TransientUnavailable and the caller
retries the same cursor, so every source record is yielded exactly once
per round; 5xx-free rounds advance the cursor to the round's start date.

Records arrive in the arXiv OAI metadata format. Version history is read
from explicit ``<version number="k"><date>...</date></version>`` elements
when present, otherwise synthesized from ``<created>``/``<updated>``.
"""

from __future__ import annotations

import logging
import time
import xml.etree.ElementTree as ET
from datetime import date, datetime, timezone
from typing import Callable, Optional

import requests

from .errors import (
    BadIdentifier,
    MalformedRecord,
    MissingField,
    ProtocolError,
    TokenExpired,
    TransientUnavailable,
)
from .ids import validate_id
from .models import HarvestCursor, PaperRecord, VersionInfo
from .timefmt import format_rfc3339, parse_rfc3339

logger = logging.getLogger(__name__)

ARXIV_NS = "http://arxiv.org/OAI/arXiv/"

HTTP_TIMEOUT = 30.0
DEFAULT_RETRY_AFTER = 30


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _first(elem: ET.Element, name: str) -> Optional[ET.Element]:
    for child in elem:
        if _local(child.tag) == name:
            return child
    return None


def _find_deep(elem: ET.Element, name: str) -> Optional[ET.Element]:
    for node in elem.iter():
        if _local(node.tag) == name:
            return node
    return None


def _text(elem: Optional[ET.Element]) -> str:
    return (elem.text or "") if elem is not None else ""


def _parse_version_date(text: str) -> datetime:
    text = text.strip()
    if "T" in text:
        return parse_rfc3339(text)
    return datetime.combine(date.fromisoformat(text), datetime.min.time(), timezone.utc)


def _parse_authors(container: ET.Element) -> tuple[str, ...]:
    authors_elem = _first(container, "authors")
    if authors_elem is None:
        return ()
    structured = [c for c in authors_elem if _local(c.tag) == "author"]
    if structured:
        names = []
        for author in structured:
            forenames = _text(_first(author, "forenames")).strip()
            keyname = _text(_first(author, "keyname")).strip()
            name = " ".join(part for part in (forenames, keyname) if part)
            if name:
                names.append(name)
        return tuple(names)
    raw = _text(authors_elem).strip()
    if not raw:
        return ()
    return tuple(part.strip() for part in raw.split(",") if part.strip())


def _parse_versions(container: ET.Element) -> tuple[VersionInfo, ...]:
    explicit = []
    for child in container:
        if _local(child.tag) != "version":
            continue
        number_attr = (child.get("number") or child.get("version") or "").lstrip("v")
        date_text = _text(_first(child, "date")).strip() or (child.get("date") or "")
        if not number_attr or not date_text:
            raise MalformedRecord("version element missing number or date")
        explicit.append(VersionInfo(int(number_attr), _parse_version_date(date_text)))
    if explicit:
        return tuple(sorted(explicit, key=lambda v: v.version_number))

    created = _text(_first(container, "created")).strip()
    if not created:
        return ()
    versions = [VersionInfo(1, _parse_version_date(created))]
    updated = _text(_first(container, "updated")).strip()
    if updated:
        versions.append(VersionInfo(2, _parse_version_date(updated)))
    return tuple(versions)


def _parse_record_element(record_elem: ET.Element) -> PaperRecord:
    metadata = _first(record_elem, "metadata")
    if metadata is None and _local(record_elem.tag) == "metadata":
        metadata = record_elem
    if metadata is None:
        raise MalformedRecord("record carries no metadata element")
    container = next(iter(metadata), None)
    if container is None:
        raise MalformedRecord("metadata element is empty")

    arxiv_id = _text(_first(container, "id")).strip()
    if not arxiv_id:
        raise MissingField("id")
    validate_id(arxiv_id)

    title = " ".join(_text(_first(container, "title")).split())
    if _first(container, "title") is None or not title:
        raise MissingField("title")

    categories_text = _text(_first(container, "categories")).strip()
    if not categories_text:
        raise MissingField("categories")

    versions = _parse_versions(container)
    if not versions:
        raise MissingField("versions")

    try:
        return PaperRecord(
            arxiv_id=arxiv_id,
            versions=versions,
            title=title,
            authors=_parse_authors(container),
            abstract=_text(_first(container, "abstract")),
            categories=tuple(categories_text.split()),
        )
    except ValueError as exc:
        raise MalformedRecord(str(exc)) from exc


def parse_oai_record(xml_fragment: str) -> PaperRecord:
    """Parse one ``<record>`` element into a validated PaperRecord.

    Raises MalformedRecord on unparseable XML or invariant violations,
    MissingField when id, title, categories or any version date is absent,
    and BadIdentifier when the id matches neither identifier syntax.
    """
    try:
        root = ET.fromstring(xml_fragment)
    except ET.ParseError as exc:
        raise MalformedRecord(f"unparseable XML: {exc}") from exc
    return _parse_record_element(root)


def serialize_record(record: PaperRecord) -> str:
    """Render a PaperRecord back to its source XML form (fixtures, exports)."""
    rec = ET.Element("record")
    header = ET.SubElement(rec, "header")
    ET.SubElement(header, "identifier").text = f"oai:portal:{record.arxiv_id}"
    ET.SubElement(header, "datestamp").text = record.latest_date.date().isoformat()
    metadata = ET.SubElement(rec, "metadata")
    container = ET.SubElement(metadata, "arXiv", {"xmlns": ARXIV_NS})
    ET.SubElement(container, "id").text = record.arxiv_id
    for version in record.versions:
        v = ET.SubElement(container, "version", {"number": str(version.version_number)})
        ET.SubElement(v, "date").text = format_rfc3339(version.submitted_at)
    ET.SubElement(container, "title").text = record.title
    authors = ET.SubElement(container, "authors")
    for name in record.authors:
        author = ET.SubElement(authors, "author")
        parts = name.split()
        ET.SubElement(author, "keyname").text = parts[-1]
        if len(parts) > 1:
            ET.SubElement(author, "forenames").text = " ".join(parts[:-1])
    ET.SubElement(container, "categories").text = " ".join(record.categories)
    ET.SubElement(container, "abstract").text = record.abstract
    return ET.tostring(rec, encoding="unicode")


# --- protocol client ----------------------------------------------------


def harvest_batch(
    cursor: HarvestCursor,
    endpoint: str,
    *,
    round_started: date,
    session: Optional[requests.Session] = None,
) -> tuple[list[PaperRecord], HarvestCursor]:
    """Fetch one protocol page and return its records plus the advanced cursor.

    On the final page the resumption token is cleared and the cursor's
    datestamp moves to ``round_started``. Deleted and unparseable records
    are skipped (the latter logged). Raises TransientUnavailable on 503
    with Retry-After, TokenExpired on a rejected token, and ProtocolError
    on anything else unexpected.
    """
    if cursor.resumption_token:
        params = {"verb": "ListRecords", "resumptionToken": cursor.resumption_token}
    else:
        params = {
            "verb": "ListRecords",
            "metadataPrefix": "arXiv",
            "from": cursor.last_completed_datestamp.isoformat(),
        }
    http = session or requests
    try:
        response = http.get(endpoint, params=params, timeout=HTTP_TIMEOUT)
    except requests.RequestException as exc:
        raise ProtocolError(f"request to {endpoint} failed: {exc}") from exc

    if response.status_code == 503:
        raw = response.headers.get("Retry-After", "")
        try:
            retry_after = max(0, int(raw))
        except ValueError:
            retry_after = DEFAULT_RETRY_AFTER
        raise TransientUnavailable(retry_after)
    if response.status_code != 200:
        raise ProtocolError(f"unexpected HTTP status {response.status_code}")

    try:
        root = ET.fromstring(response.content)
    except ET.ParseError as exc:
        raise ProtocolError(f"malformed envelope: {exc}") from exc

    error = _find_deep(root, "error")
    if error is not None:
        code = error.get("code", "")
        if code == "badResumptionToken":
            raise TokenExpired(_text(error) or "resumption token rejected")
        if code == "noRecordsMatch":
            return [], HarvestCursor(round_started, None, cursor.records_ingested)
        raise ProtocolError(f"endpoint error [{code}]: {_text(error)}")

    list_records = _find_deep(root, "ListRecords")
    if list_records is None:
        raise ProtocolError("envelope carries no ListRecords element")

    records: list[PaperRecord] = []
    for record_elem in list_records:
        if _local(record_elem.tag) != "record":
            continue
        header = _first(record_elem, "header")
        if header is not None and header.get("status") == "deleted":
            continue
        try:
            records.append(_parse_record_element(record_elem))
        except (MalformedRecord, MissingField, BadIdentifier) as exc:
            logger.warning("skipping unparseable record: %s", exc)

    token_elem = _find_deep(list_records, "resumptionToken")
    token = _text(token_elem).strip() or None
    ingested = cursor.records_ingested + len(records)
    if token:
        advanced = HarvestCursor(cursor.last_completed_datestamp, token, ingested)
    else:
        advanced = HarvestCursor(round_started, None, ingested)
    return records, advanced


def run_harvest_round(
    endpoint: str,
    cursor: HarvestCursor,
    handle_records: Callable[[list[PaperRecord]], None],
    *,
    round_started: Optional[date] = None,
    max_pages: Optional[int] = None,
    max_retries: int = 5,
    sleep: Callable[[float], None] = time.sleep,
    on_page: Optional[Callable[[HarvestCursor], None]] = None,
) -> HarvestCursor:
    """Drive one full harvest round, retrying transient faults.

    ``handle_records`` receives each page's records as they arrive;
    ``on_page`` (if given) receives every advanced cursor, so callers can
    persist progress. Returns the final cursor: completed, or mid-flight
    when ``max_pages`` stopped the round early.
    """
    if round_started is None:
        round_started = datetime.now(timezone.utc).date()
    if cursor.resumption_token is None:
        cursor = HarvestCursor(cursor.last_completed_datestamp, None, 0)

    pages = 0
    retries = 0
    restarted = False
    while True:
        try:
            records, cursor = harvest_batch(cursor, endpoint, round_started=round_started)
        except TransientUnavailable as exc:
            retries += 1
            if retries > max_retries:
                raise
            logger.info("endpoint busy, retrying in %ds", exc.retry_after_seconds)
            sleep(exc.retry_after_seconds)
            continue
        except TokenExpired:
            if restarted:
                raise
            logger.warning("resumption token expired, restarting round")
            restarted = True
            cursor = HarvestCursor(cursor.last_completed_datestamp, None, 0)
            continue
        retries = 0
        pages += 1
        handle_records(records)
        if on_page is not None:
            on_page(cursor)
        if cursor.resumption_token is None:
            return cursor
        if max_pages is not None and pages >= max_pages:
            return cursor
