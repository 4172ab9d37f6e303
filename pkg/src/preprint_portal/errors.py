"""Exception types shared across the portal modules."""

from __future__ import annotations


class PortalError(Exception):
    """Base class for all portal errors."""


# --- record parsing -----------------------------------------------------


class MalformedRecord(PortalError):
    """Source record is not parseable XML or violates record invariants."""


class MissingField(PortalError):
    def __init__(self, field: str):
        self.field = field
        super().__init__(f"record is missing required field: {field}")


class BadIdentifier(PortalError):
    def __init__(self, value: str):
        self.value = value
        super().__init__(f"not a valid article identifier: {value!r}")


# --- harvesting ---------------------------------------------------------


class TransientUnavailable(PortalError):
    """Endpoint answered 503; retry with the same cursor after the delay."""

    def __init__(self, retry_after_seconds: int):
        self.retry_after_seconds = retry_after_seconds
        super().__init__(f"endpoint unavailable, retry after {retry_after_seconds}s")


class TokenExpired(PortalError):
    """Resumption token rejected; restart the round from the last completed date."""


class ProtocolError(PortalError):
    """Malformed protocol envelope or unexpected endpoint behaviour."""


# --- storage / index ----------------------------------------------------


class StorageFailure(PortalError):
    """Persistence layer failed (disk error, unwritable path, ...)."""


class CorruptIndex(PortalError):
    """Persisted index failed validation; it is never silently rebuilt."""


class UnknownDocument(PortalError):
    def __init__(self, arxiv_id: str):
        self.arxiv_id = arxiv_id
        super().__init__(f"document not indexed: {arxiv_id}")


class InvalidQuery(PortalError):
    """Search query violates its bounds (pagination, field names, range)."""


# --- ranking ------------------------------------------------------------


class MissingSignal(PortalError):
    def __init__(self, arxiv_id: str, signal: str):
        self.arxiv_id = arxiv_id
        self.signal = signal
        super().__init__(f"no {signal} signal for {arxiv_id}")


# --- collections --------------------------------------------------------


class UnknownPaper(PortalError):
    def __init__(self, arxiv_id: str):
        self.arxiv_id = arxiv_id
        super().__init__(f"paper not in store: {arxiv_id}")


# --- thumbnails ---------------------------------------------------------


class EmptyInput(PortalError):
    """No page images supplied to the strip composer."""


class FetchFailed(PortalError):
    """PDF bytes could not be obtained from the configured source."""


class RasterizerFailed(PortalError):
    def __init__(self, exit_code: int, detail: str = ""):
        self.exit_code = exit_code
        msg = f"rasterizer exited with code {exit_code}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
