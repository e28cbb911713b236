"""Saved report storage.

Reports are plain JSON files inside ``DATA_ROOT``::

    DATA_ROOT/
        reports/
            <name>.json

Names are flat; anything that could escape the reports directory is refused.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..core.config import DATA_ROOT

logger = logging.getLogger(__name__)


class ReportStorageError(RuntimeError):
    """Raised when report storage operations fail."""


@dataclass(frozen=True)
class ReportPaths:
    """Filesystem locations for a single saved report."""

    name: str
    root: Path
    report_path: Path

    def as_dict(self) -> Dict[str, str]:
        return {"name": self.name, "root": str(self.root), "report_path": str(self.report_path)}


def _assert_safe_name(name: str) -> str:
    normalised = (name or "").strip()
    if normalised.endswith(".json"):
        normalised = normalised[: -len(".json")]
    if not normalised:
        raise ReportStorageError("report name cannot be empty")
    if any(sep in normalised for sep in ("/", "\\")):
        raise ReportStorageError("report name must not contain path separators")
    if normalised in {".", ".."} or normalised.startswith("."):
        raise ReportStorageError("report name cannot start with '.'")
    return normalised


def ensure_reports_root(data_root: Optional[Path] = None) -> Path:
    """Guarantee that ``DATA_ROOT/reports`` exists."""

    reports_dir = (data_root or DATA_ROOT) / "reports"
    reports_dir.mkdir(parents=True, exist_ok=True)
    return reports_dir


def get_report_paths(name: str, data_root: Optional[Path] = None) -> ReportPaths:
    """Return report paths without touching the filesystem."""

    safe_name = _assert_safe_name(name)
    root = (data_root or DATA_ROOT) / "reports"
    return ReportPaths(name=safe_name, root=root, report_path=root / f"{safe_name}.json")


def dump_report(payload: Dict[str, Any]) -> str:
    """Canonical JSON text: two-space indent, UTF-8 glyphs kept, trailing newline."""
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def save_report(name: str, payload: Dict[str, Any], data_root: Optional[Path] = None) -> Path:
    paths = get_report_paths(name, data_root)
    ensure_reports_root(data_root)
    try:
        paths.report_path.write_text(dump_report(payload), encoding="utf-8")
    except OSError as exc:
        raise ReportStorageError(f"cannot write report {paths.report_path}: {exc}") from exc
    logger.info("Saved report %s to %s", paths.name, paths.report_path)
    return paths.report_path


def load_report(name: str, data_root: Optional[Path] = None) -> Dict[str, Any]:
    paths = get_report_paths(name, data_root)
    if not paths.report_path.is_file():
        raise ReportStorageError(f"no saved report named {paths.name!r}")
    try:
        return json.loads(paths.report_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ReportStorageError(f"cannot read report {paths.report_path}: {exc}") from exc


def list_reports(data_root: Optional[Path] = None) -> List[str]:
    root = (data_root or DATA_ROOT) / "reports"
    if not root.is_dir():
        return []
    return sorted(path.stem for path in root.glob("*.json"))
