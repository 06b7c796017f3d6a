"""
Configuration persistence manager for milnorkit.json and the job settings derived from it.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, fields
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from milnorkit.core.constants import DEFAULT_CONFIG_FILE, THREADS_ENV_VAR
from milnorkit.core.exceptions import InputError
from milnorkit.core.models import AppConfig, JobConfig
from milnorkit.core.validators import JobConfigValidator


class ConfigManager:
    """Manages persistent settings stored in milnorkit.json."""

    def __init__(self, config_file: str | Path | None = None, environ: Optional[Mapping[str, str]] = None):
        self.config_file = Path(config_file) if config_file else Path(DEFAULT_CONFIG_FILE)
        self.environ = os.environ if environ is None else environ
        self.logger = logging.getLogger(__name__)

    # ------------------------------------------------------------------
    # Internal helpers
    # ------------------------------------------------------------------
    def _ensure_structure(self, data: Dict[str, Any]) -> Dict[str, Any]:
        data.setdefault("app_settings", {})
        return data

    def _load_file_data(self) -> Dict[str, Any]:
        if not self.config_file.exists():
            return self._ensure_structure({})

        try:
            with open(self.config_file, "r", encoding="utf-8") as f:
                content = json.load(f)
        except json.JSONDecodeError as error:
            raise InputError(f"malformed configuration file '{self.config_file}': {error.msg}",
                             line=error.lineno) from error
        if not isinstance(content, dict):
            raise InputError(f"configuration file '{self.config_file}' must hold an object")
        return self._ensure_structure(content)

    def _write_file_data(self, data: Dict[str, Any]) -> bool:
        try:
            with open(self.config_file, "w", encoding="utf-8") as f:
                json.dump(data, f, indent=2, ensure_ascii=False)
            return True
        except OSError as error:
            self.logger.error(f"Failed to write config file '{self.config_file}': {error}")
            return False

    # ------------------------------------------------------------------
    # Application configuration
    # ------------------------------------------------------------------
    def load_config(self) -> AppConfig:
        """
        Settings from the file over the built-in defaults, then the environment.

        Raises:
            InputError: the file is malformed or holds unknown/invalid settings.
        """
        settings = self._load_file_data().get("app_settings", {})
        errors = JobConfigValidator.validate_settings(settings)
        if errors:
            raise InputError("; ".join(errors), field="app_settings")
        config = AppConfig(**settings)

        threads = self.environ.get(THREADS_ENV_VAR)
        if threads:
            try:
                config.threads = max(1, int(threads))
            except ValueError as error:
                raise InputError(f"{THREADS_ENV_VAR} must be an integer, got '{threads}'") from error
        return config

    def save_config(self, config: AppConfig) -> bool:
        data = self._load_file_data()
        data["app_settings"] = asdict(config)
        return self._write_file_data(data)

    # ------------------------------------------------------------------
    # Jobs
    # ------------------------------------------------------------------
    def build_job(self, command: str, overrides: Dict[str, Any]) -> JobConfig:
        """
        Merge CLI overrides (None means unset) over the loaded settings.

        Raises:
            InputError: the merged job fails validation.
        """
        config = self.load_config()
        shared = {f.name for f in fields(JobConfig)} & {f.name for f in fields(AppConfig)}
        values: Dict[str, Any] = {name: getattr(config, name) for name in shared}
        for key, value in overrides.items():
            if value is not None:
                values[key] = value
        job = JobConfig(command=command, **values)
        errors = JobConfigValidator.validate_job(job)
        if errors:
            raise InputError("; ".join(errors))
        self.logger.info(f"Job '{command}' configured from {self.config_file if self.config_file.exists() else 'defaults'}")
        return job
