"""
Deterministic CSV/JSON artifact writing with embedded provenance.
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, List, Sequence

import numpy as np

from ..core.config import get_settings
from ..schemas.common import ArtifactMeta

logger = logging.getLogger(__name__)


def artifact_meta(config_sha256: str) -> ArtifactMeta:
    settings = get_settings()
    return ArtifactMeta(
        tool=settings.app_name, version=settings.app_version, config_sha256=config_sha256
    )


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV text with floats written at full precision."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buffer.getvalue()


class ArtifactWriter:
    """Writes artifacts into one output directory, each stamped with ``meta``."""

    def __init__(self, out_dir: Path, meta: ArtifactMeta):
        self.out_dir = Path(out_dir)
        self.meta = meta
        self.written: List[Path] = []

    def _path(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        self.written.append(path)
        return path

    def write_csv(self, name: str, body: str) -> Path:
        header = (
            f"# tool={self.meta.tool} version={self.meta.version}\n"
            f"# config_sha256={self.meta.config_sha256}\n"
        )
        path = self._path(name)
        path.write_text(header + body, encoding="utf-8")
        logger.debug(f"Wrote {path}")
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        document = {"meta": self.meta.model_dump(), "data": payload}
        path = self._path(name)
        path.write_text(
            json.dumps(document, sort_keys=True, indent=2, allow_nan=True) + "\n",
            encoding="utf-8",
        )
        logger.debug(f"Wrote {path}")
        return path
