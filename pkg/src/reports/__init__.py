"""Text, CSV and markdown rendering of pipeline reports."""

from .renderers import nist_rows, render_csv, render_report_markdown, render_text
from .template_manager import TemplateManager

__all__ = ["TemplateManager", "nist_rows", "render_csv", "render_report_markdown", "render_text"]
