"""
Report envelopes (JSON) and human-readable summaries (Jinja2 templates).
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Optional

from jinja2 import Environment, PackageLoader, StrictUndefined, TemplateNotFound

from milnorkit.core.constants import APP_NAME
from milnorkit.core.models import JobConfig
from milnorkit.utils.serialization import dump_json


class ReportService:
    """Builds, renders and writes command reports."""

    def __init__(self, version: str, logger: Optional[logging.Logger] = None):
        self.version = version
        self.logger = logger or logging.getLogger(__name__)
        self.env = Environment(
            loader=PackageLoader("milnorkit", "templates"),
            undefined=StrictUndefined,
            keep_trailing_newline=True,
            trim_blocks=True,
            lstrip_blocks=True,
        )

    def build(self, job: JobConfig, result: Dict[str, Any], precision: Optional[Dict[str, Any]] = None,
              provenance: Optional[Dict[str, str]] = None) -> Dict[str, Any]:
        return {
            "tool": APP_NAME,
            "version": self.version,
            "command": job.command,
            "config": job.echo(),
            "precision": precision or {},
            "provenance": provenance or {},
            "result": result,
        }

    @staticmethod
    def to_json(report: Dict[str, Any]) -> str:
        return dump_json(report)

    def write(self, report: Dict[str, Any], output: Optional[str]) -> Optional[Path]:
        """Write the report to output; None means the caller prints it."""
        if not output:
            return None
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json(report), encoding="utf-8")
        self.logger.info(f"Report written to {path}")
        return path

    def summary(self, report: Dict[str, Any]) -> str:
        """Plain-text summary of a report, one template per command."""
        name = f"{report['command']}.txt.j2"
        try:
            template = self.env.get_template(name)
        except TemplateNotFound:
            template = self.env.get_template("generic.txt.j2")
        return template.render(**report)
