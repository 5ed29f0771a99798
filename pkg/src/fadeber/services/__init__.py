"""
Service layer for report output.

Contains:
- Report targets (stream, file) and CSV rendering
"""

from .report_output import FileTarget, ReportTarget, StreamTarget, open_target, render_csv

__all__ = [
    "FileTarget",
    "ReportTarget",
    "StreamTarget",
    "open_target",
    "render_csv",
]
