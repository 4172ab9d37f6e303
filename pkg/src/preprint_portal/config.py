"""Service configuration.

One JSON file with flat keys; unknown keys are rejected so typos surface
at startup instead of silently falling back to defaults.

Documented keys:
    host                listen address (default 127.0.0.1)
    port                listen port (default 8571)
    data_dir            directory holding stores, index, cursor, thumbs
    rasterizer          argv prefix of the PDF rasterizer tool ([] disables
                        thumbnail generation)
    harvest_endpoint    OAI-PMH endpoint URL for `portal harvest`
    per_page_default    page size when the request names none
    per_page_max        upper bound accepted for per_page
    mention_links_cap   max tweet links in a paper detail response
    pdf_base_url        upstream base for canonical PDF links
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Union


@dataclass
class PortalConfig:
    host: str = "127.0.0.1"
    port: int = 8571
    data_dir: str = "data"
    rasterizer: tuple[str, ...] = ()
    harvest_endpoint: str = ""
    per_page_default: int = 20
    per_page_max: int = 100
    mention_links_cap: int = 10
    pdf_base_url: str = "https://arxiv.org/pdf"

    def __post_init__(self):
        self.rasterizer = tuple(self.rasterizer)
        if not 0 < self.port < 65536:
            raise ValueError(f"port out of range: {self.port}")
        if self.per_page_max < 1:
            raise ValueError("per_page_max must be >= 1")
        if not 1 <= self.per_page_default <= self.per_page_max:
            raise ValueError("per_page_default must be in [1, per_page_max]")
        if self.mention_links_cap < 1:
            raise ValueError("mention_links_cap must be >= 1")

    def to_dict(self) -> dict:
        data = asdict(self)
        data["rasterizer"] = list(self.rasterizer)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "PortalConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "PortalConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
