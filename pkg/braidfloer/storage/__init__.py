"""Helpers for managing saved reports on disk."""

from .reports import (
    ReportPaths,
    ReportStorageError,
    dump_report,
    ensure_reports_root,
    get_report_paths,
    list_reports,
    load_report,
    save_report,
)

__all__ = [
    "ReportPaths",
    "ReportStorageError",
    "dump_report",
    "ensure_reports_root",
    "get_report_paths",
    "list_reports",
    "load_report",
    "save_report",
]
