"""Preview strip generation for paper PDFs.

Strips tile the first pages of a paper into one PNG per the fixed layout
rule (up to 8 tiles, 240 px wide each, 2 px white separators, white
padding to the tallest tile). Rasterization is delegated to an external
tool across a process boundary; any command satisfying

    <tool> --png --width 240 --pages 1-8 <in.pdf> <outdir>

works. Generation failures are recorded per paper and never block other
jobs or hide the paper from search results.
"""

from __future__ import annotations

import io
import logging
import os
import subprocess
import tempfile
import threading
from concurrent.futures import Future, ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence, Union

from PIL import Image

from .errors import (
    EmptyInput,
    FetchFailed,
    PortalError,
    RasterizerFailed,
    StorageFailure,
)
from .models import ThumbnailStatus

logger = logging.getLogger(__name__)

TILE_WIDTH = 240
SEPARATOR = 2
MAX_PAGES = 8

RASTERIZER_TIMEOUT = 120.0

PdfSource = Union[bytes, str, Path, Callable[[], bytes]]


def compose_strip(page_images: Sequence[Image.Image]) -> bytes:
    """Tile page images left to right into one PNG strip.

    Takes the first min(8, n) pages, scales each to 240 px width keeping
    aspect, separates tiles with 2 px of white and pads shorter tiles to
    the tallest one with white. Raises EmptyInput when no pages given.
    """
    if not page_images:
        raise EmptyInput("no page images to compose")
    tiles = []
    for page in page_images[:MAX_PAGES]:
        if page.width != TILE_WIDTH:
            height = max(1, round(page.height * TILE_WIDTH / page.width))
            page = page.resize((TILE_WIDTH, height), Image.Resampling.LANCZOS)
        tiles.append(page.convert("RGB"))
    strip_height = max(tile.height for tile in tiles)
    strip_width = len(tiles) * TILE_WIDTH + (len(tiles) - 1) * SEPARATOR
    strip = Image.new("RGB", (strip_width, strip_height), "white")
    for i, tile in enumerate(tiles):
        strip.paste(tile, (i * (TILE_WIDTH + SEPARATOR), 0))
    out = io.BytesIO()
    strip.save(out, format="PNG")
    return out.getvalue()


def _load_pdf(source: PdfSource) -> bytes:
    if isinstance(source, bytes):
        return source
    if callable(source):
        try:
            return source()
        except Exception as exc:
            raise FetchFailed(f"pdf source failed: {exc}") from exc
    try:
        return Path(source).read_bytes()
    except OSError as exc:
        raise FetchFailed(f"cannot read {source}: {exc}") from exc


class ThumbnailGenerator:
    """Renders and tracks one preview strip per paper.

    ``rasterizer`` is the argv prefix of the external tool; the contract
    arguments are appended per job. Strips land at
    ``<thumbs_dir>/<arxiv_id>.png`` (legacy ids introduce a subdirectory).
    A bounded pool runs jobs, with at most one in flight per paper.
    """

    def __init__(
        self,
        thumbs_dir: Union[str, Path],
        rasterizer: Sequence[str],
        *,
        max_workers: int = 2,
    ) -> None:
        if not rasterizer:
            raise ValueError("rasterizer command must not be empty")
        self.thumbs_dir = Path(thumbs_dir)
        self.rasterizer = tuple(rasterizer)
        self._statuses: dict[str, ThumbnailStatus] = {}
        self._inflight: dict[str, "Future[ThumbnailStatus]"] = {}
        self._lock = threading.Lock()
        self._pool = ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="thumbs")

    def strip_path(self, arxiv_id: str) -> Path:
        return self.thumbs_dir / f"{arxiv_id}.png"

    def status(self, arxiv_id: str) -> ThumbnailStatus:
        with self._lock:
            known = self._statuses.get(arxiv_id)
        if known is not None:
            return known
        path = self.strip_path(arxiv_id)
        if path.exists():
            mtime = datetime.fromtimestamp(path.stat().st_mtime, timezone.utc)
            return ThumbnailStatus.done(mtime.replace(microsecond=0))
        return ThumbnailStatus.pending()

    def generate(self, arxiv_id: str, pdf_source: PdfSource) -> ThumbnailStatus:
        """Produce the strip for one paper, synchronously.

        Already-generated strips are left untouched. Failures come back as
        a Failed status with the reason; they are never raised, so one bad
        PDF cannot take down a batch.
        """
        target = self.strip_path(arxiv_id)
        if target.exists():
            status = self.status(arxiv_id)
            if status.state == "done":
                return status
        with self._lock:
            self._statuses[arxiv_id] = ThumbnailStatus.pending()
        try:
            png = self._render(arxiv_id, pdf_source)
            self._persist(target, png)
            status = ThumbnailStatus.done(datetime.now(timezone.utc).replace(microsecond=0))
        except PortalError as exc:
            logger.warning("thumbnail for %s failed: %s", arxiv_id, exc)
            status = ThumbnailStatus.failed(str(exc))
        with self._lock:
            self._statuses[arxiv_id] = status
        return status

    def submit(self, arxiv_id: str, pdf_source: PdfSource) -> "Future[ThumbnailStatus]":
        """Queue generation on the worker pool, deduplicating in-flight ids."""
        with self._lock:
            existing = self._inflight.get(arxiv_id)
            if existing is not None:
                return existing
            future = self._pool.submit(self.generate, arxiv_id, pdf_source)
            self._inflight[arxiv_id] = future
        future.add_done_callback(lambda _: self._clear_inflight(arxiv_id))
        return future

    def shutdown(self) -> None:
        self._pool.shutdown(wait=True)

    def _clear_inflight(self, arxiv_id: str) -> None:
        with self._lock:
            self._inflight.pop(arxiv_id, None)

    def _render(self, arxiv_id: str, pdf_source: PdfSource) -> bytes:
        pdf_bytes = _load_pdf(pdf_source)
        with tempfile.TemporaryDirectory(prefix="thumbs-") as workdir:
            pdf_path = Path(workdir) / "in.pdf"
            pdf_path.write_bytes(pdf_bytes)
            pages_dir = Path(workdir) / "pages"
            pages_dir.mkdir()
            argv = [
                *self.rasterizer,
                "--png",
                "--width",
                str(TILE_WIDTH),
                "--pages",
                f"1-{MAX_PAGES}",
                str(pdf_path),
                str(pages_dir),
            ]
            try:
                proc = subprocess.run(
                    argv, capture_output=True, text=True, timeout=RASTERIZER_TIMEOUT
                )
            except subprocess.TimeoutExpired as exc:
                raise RasterizerFailed(-1, "timed out") from exc
            except OSError as exc:
                raise RasterizerFailed(-1, str(exc)) from exc
            if proc.returncode != 0:
                detail = (proc.stderr or proc.stdout).strip().splitlines()
                raise RasterizerFailed(proc.returncode, detail[-1] if detail else "")
            page_files = sorted(pages_dir.glob("*.png"))
            if not page_files:
                raise RasterizerFailed(0, "produced no pages")
            pages = [Image.open(path) for path in page_files]
            try:
                return compose_strip(pages)
            finally:
                for page in pages:
                    page.close()

    def _persist(self, target: Path, png: bytes) -> None:
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            tmp = target.with_suffix(".png.tmp")
            tmp.write_bytes(png)
            os.replace(tmp, target)
        except OSError as exc:
            raise StorageFailure(f"cannot write {target}: {exc}") from exc
