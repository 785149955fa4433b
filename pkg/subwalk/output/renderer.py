"""
Text rendering of report summaries.

This module handles Jinja template loading and rendering.
"""

import logging
import os
from typing import Any, Dict, Optional

from jinja2 import Environment, FileSystemLoader, StrictUndefined

logger = logging.getLogger(__name__)


def _fmt(value: Any, spec: str = ".4g") -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return format(value, spec)
    return str(value)


class SummaryRenderer:
    """Renderer for the plain-text report summary."""

    def __init__(self, template_dir: Optional[str] = None):
        """
        Initialize summary renderer.

        Args:
            template_dir: Directory containing templates
        """
        if template_dir is None:
            template_dir = os.path.join(os.path.dirname(__file__), "templates")

        logger.debug(f"Using template directory: {template_dir}")

        self.env = Environment(
            loader=FileSystemLoader(template_dir),
            undefined=StrictUndefined,
            keep_trailing_newline=True,
            trim_blocks=True,
            lstrip_blocks=True,
        )
        self.env.filters["fmt"] = _fmt
        self.summary_template = self.env.get_template("summary.txt.j2")

    def render_summary(self, context: Dict[str, Any]) -> str:
        """
        Render the summary table.

        Args:
            context: Template context with ``criteria`` rows and run metadata

        Returns:
            Rendered text
        """
        text = self.summary_template.render(**context)
        logger.debug(f"Rendered summary with {len(context.get('criteria', []))} criteria")
        return str(text)

    def write_summary(self, path: str, context: Dict[str, Any]) -> str:
        """Render the summary into a file."""
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.render_summary(context))
        return path
