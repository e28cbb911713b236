"""Text rendering of command payloads with the bundled jinja2 templates."""

from __future__ import annotations

import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence

from jinja2 import Environment, FileSystemLoader, StrictUndefined, TemplateNotFound

from .config import TEMPLATES_DIR
from .floer_fix_solver import format_pi

logger = logging.getLogger(__name__)


def _fraction_pi(value: Mapping[str, int]) -> str:
    return format_pi(Fraction(value["num"], value["den"]))


def _cycle(cycle: Sequence[int]) -> str:
    return "(" + " ".join(str(i) for i in cycle) + ")"


def _angle(value: float) -> str:
    return f"{value:.6f}"


class ReportRenderer:
    """Renders the JSON-ready payload of a command as human-readable text.

    Text and JSON output share one payload, so both views always show the
    same numbers.
    """

    def __init__(self, templates_dir: Optional[Path] = None):
        self.templates_dir = templates_dir or TEMPLATES_DIR
        self.env = Environment(
            loader=FileSystemLoader(str(self.templates_dir)),
            undefined=StrictUndefined,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
            autoescape=False,
        )
        self.env.filters["fraction_pi"] = _fraction_pi
        self.env.filters["cycle"] = _cycle
        self.env.filters["angle"] = _angle

    def render(self, command: str, payload: Dict[str, Any]) -> str:
        try:
            template = self.env.get_template(f"{command}.txt.j2")
        except TemplateNotFound as exc:
            raise LookupError(f"no text template for command {command!r}") from exc
        logger.debug("Rendering %s with %s", command, template.filename)
        return template.render(**payload)
