"""
Logging for hardydiv runs.

Interactive runs (HARDYDIV_ENV=local) log human-readable lines to stderr.
Batch sweeps (any other environment) switch the console handler to the JSON
formatter so one run produces one parseable line per event.
"""

import logging
import logging.config
import sys
from pathlib import Path
from typing import Any, Optional

import yaml

from hardydiv.core.config import Settings, find_project_root, get_settings

LINE_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
JSON_FORMAT = '{"time": "%(asctime)s", "level": "%(levelname)s", "logger": "%(name)s", "message": "%(message)s"}'


def _default_config_path() -> Optional[Path]:
    root = find_project_root()
    return root / "config" / "logging.yaml" if root else None


def _for_environment(config: dict[str, Any], settings: Settings) -> dict[str, Any]:
    console = config.get("handlers", {}).get("console")
    if console is not None and not settings.is_local:
        console["formatter"] = "json"
    for handler in config.get("handlers", {}).values():
        if "filename" in handler:
            Path(handler["filename"]).parent.mkdir(parents=True, exist_ok=True)
    return config


def setup_logging(
    log_level: Optional[str] = None,
    config_path: Optional[str] = None,
    settings: Optional[Settings] = None,
) -> None:
    """
    Configure the `hardydiv` logger tree.

    Args:
        log_level: Overrides Settings.log_level (the CLI passes DEBUG for -v).
        config_path: dictConfig YAML; defaults to config/logging.yaml.
        settings: Runtime settings; defaults to get_settings().
    """
    settings = settings or get_settings()
    level = (log_level or settings.log_level).upper()
    path = Path(config_path) if config_path else _default_config_path()

    if path is not None and path.exists():
        with open(path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f)
        logging.config.dictConfig(_for_environment(config, settings))
    else:
        logging.basicConfig(
            level=getattr(logging, level),
            format=LINE_FORMAT if settings.is_local else JSON_FORMAT,
            datefmt="%Y-%m-%d %H:%M:%S",
            handlers=[logging.StreamHandler(sys.stderr)],
        )

    logging.getLogger("hardydiv").setLevel(getattr(logging, level))


def get_logger(name: str) -> logging.Logger:
    """Logger under the `hardydiv.` namespace."""
    if not name.startswith("hardydiv"):
        name = f"hardydiv.{name}"
    return logging.getLogger(name)


class LoggerMixin:
    """Gives a class a `logger` named after its subpackage and class, e.g. hardydiv.commands.HardyCommand."""

    @property
    def logger(self) -> logging.Logger:
        if not hasattr(self, "_logger"):
            module = type(self).__module__
            package = module.split(".")[1] + "." if module.startswith("hardydiv.") else ""
            self._logger = get_logger(f"{package}{type(self).__name__}")
        return self._logger
