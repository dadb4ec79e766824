import logging
import platform
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from groups.tietze import TietzeSettings
from pipeline.models import PipelineSettings

logger = logging.getLogger(__name__)

ORDERINGS = ("lex", "revlex", "random")


class ConfigLoader:
    def __init__(self, config_dir: str = "config", config_file: Optional[str] = None):
        self.config_dir = Path(config_dir)
        self.config_file = Path(config_file) if config_file else None
        self.config: Dict[str, Any] = {}
        self._load_config()

    def _load_config(self):
        """Load configuration, preferring a platform-specific file."""
        if self.config_file is not None:
            if not self.config_file.exists():
                raise FileNotFoundError(f"Configuration file not found: {self.config_file}")
            config_file = self.config_file
        else:
            system = platform.system().lower()
            platform_config = self.config_dir / f"config.{system}.yaml"
            default_config = self.config_dir / "config.yaml"

            if platform_config.exists():
                config_file = platform_config
                logger.info(f"Loading platform-specific config: {platform_config}")
            elif default_config.exists():
                config_file = default_config
                logger.info(f"Loading default config: {default_config}")
            else:
                raise FileNotFoundError(
                    f"No configuration file found. Expected one of: {platform_config}, {default_config}"
                )

        try:
            with open(config_file, "r", encoding="utf-8") as f:
                self.config = yaml.safe_load(f) or {}
        except Exception as e:
            raise RuntimeError(f"Failed to load configuration from {config_file}: {e}")

        self._validate_config()
        logger.info(f"Configuration loaded successfully from {config_file}")

    def _validate_config(self):
        """Validate essential configuration values."""
        required_sections = ["pipeline", "tietze", "classify", "cache", "results"]
        for section in required_sections:
            if section not in self.config:
                raise ValueError(f"Missing required configuration section: {section}")

        ordering = self.get("pipeline.ordering", "lex")
        if ordering not in ORDERINGS:
            raise ValueError(f"Invalid pipeline.ordering: {ordering}")
        for retry in self.get("pipeline.retry_orderings", []) or []:
            if retry not in ORDERINGS:
                raise ValueError(f"Invalid pipeline.retry_orderings entry: {retry}")

        n_start = self.get("classify.n_start", 2)
        n_max = self.get("classify.n_max", 7)
        if not isinstance(n_start, int) or n_start < 1:
            raise ValueError("classify.n_start must be a positive integer")
        if not isinstance(n_max, int) or n_max < n_start:
            raise ValueError("classify.n_max must be an integer >= classify.n_start")

        if "dir" not in self.config["results"]:
            raise ValueError("Missing results.dir in configuration")

        logger.debug("Configuration validation passed")

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value using dot notation (e.g., 'classify.n_max')."""
        keys = key.split(".")
        value = self.config

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def get_pipeline_config(self) -> Dict[str, Any]:
        return self.config.get("pipeline", {})

    def get_tietze_config(self) -> Dict[str, Any]:
        return self.config.get("tietze", {})

    def get_classify_config(self) -> Dict[str, Any]:
        return self.config.get("classify", {})

    def get_cache_config(self) -> Dict[str, Any]:
        return self.config.get("cache", {})

    def get_results_config(self) -> Dict[str, Any]:
        return self.config.get("results", {})

    def get_redundancy_config(self) -> Dict[str, Any]:
        return self.config.get("redundancy", {}) or {}

    def get_knots_config(self) -> Dict[str, Any]:
        return self.config.get("knots", {}) or {}

    def get_logging_config(self) -> Dict[str, Any]:
        return self.config.get("logging", {}) or {}

    def get_api_config(self) -> Dict[str, Any]:
        return self.config.get("api", {}) or {}

    def tietze_settings(self) -> TietzeSettings:
        return TietzeSettings(**self.get_tietze_config())

    def pipeline_settings(self) -> PipelineSettings:
        """Settings object handed to the algorithms, so they never need a loader."""
        return PipelineSettings(
            **self.get_pipeline_config(),
            tietze=self.tietze_settings(),
            pad=self.get("knots.pad", 2),
        )
