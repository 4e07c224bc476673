"""
Configuration management for hardydiv.

Supports:
- Environment / .env file for runtime settings (log level, workers, output paths)
- YAML config for numerical defaults
- JSON run configs mirroring the CLI flags
"""

import copy
import hashlib
import json
import os
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from hardydiv.core.errors import ConfigurationError


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # ==============================================
    # Environment
    # ==============================================
    hardydiv_env: str = Field(default="local", description="Environment: local/batch")
    log_level: str = Field(default="INFO")

    # ==============================================
    # Runtime Config
    # ==============================================
    workers: int = Field(default=4, ge=1, description="Concurrent sweep rows")
    output_dir: str = Field(default="data/reports")
    factorization_cache_size: int = Field(default=32, ge=1)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        v = v.upper()
        if v not in valid_levels:
            raise ValueError(f"Invalid log level: {v}. Must be one of {valid_levels}")
        return v

    @property
    def is_local(self) -> bool:
        return self.hardydiv_env == "local"


class ConfigLoader:
    """Loads Settings for the configured environment."""

    def __init__(self, env: Optional[str] = None):
        self.env = env or os.getenv("HARDYDIV_ENV", "local")

    def load(self) -> Settings:
        """Load settings based on environment."""
        # batch runs read the same sources; only the log format differs
        return Settings()


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    loader = ConfigLoader()
    return loader.load()


# Used when config/config.yaml is not shipped alongside the package.
DEFAULTS: dict[str, Any] = {
    "hardy": {
        "n": 100_000,
        "tol_growth": 1e-3,
        "empirical_budget": 60,
        "empirical_start_shift": 0.01,
    },
    "weights": {"i_max": 40, "log_stabilization": 1e-6, "tail_fit_points": 4},
    "geometry": {"boundary_tol": 1e-12, "segment_points": 256, "samples": 10_000},
    "decomposition": {"subdomains": 6, "resolution": 64, "ramp": "log"},
    "solver": {
        "tol": 1e-10,
        "inner_tol": 1e-12,
        "inner": "direct",
        "max_iter": 5000,
        "stagnation_window": 200,
    },
    "reproduce": {
        "test_function": "dipole",
        "corollary1": {
            "gamma": 2.0,
            "betas": [0.0, -1.0, -1.4],
            "blowup_j": [1, 2, 3, 4, 5, 6, 7, 8],
        },
        "corollary2": {"gamma": 2.0, "alphas": [-2.0, -1.0, 0.0, 1.0, 2.0]},
    },
}


def find_project_root() -> Optional[Path]:
    """Nearest ancestor of this package holding pyproject.toml, if any."""
    for parent in Path(__file__).resolve().parents:
        if (parent / "pyproject.toml").exists():
            return parent
    return None


def _merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


@lru_cache()
def load_yaml_config(config_path: Optional[str] = None) -> dict[str, Any]:
    """
    Load YAML configuration file merged over DEFAULTS.

    Args:
        config_path: Path to config file. Defaults to config/config.yaml

    Returns:
        Configuration dictionary
    """
    if config_path is None:
        root = find_project_root()
        if root is None:
            return copy.deepcopy(DEFAULTS)
        config_path = str(root / "config" / "config.yaml")

    path = Path(config_path)
    if not path.exists():
        if config_path.endswith("config/config.yaml"):
            return copy.deepcopy(DEFAULTS)
        raise ConfigurationError(f"Config file not found: {config_path}")

    with open(path, "r", encoding="utf-8") as f:
        loaded = yaml.safe_load(f) or {}
    return _merge(DEFAULTS, loaded)


def config_value(config: dict[str, Any], dotted: str) -> Any:
    """Read a nested config value, e.g. ``config_value(cfg, "solver.tol")``."""
    node: Any = config
    for part in dotted.split("."):
        node = node[part]
    return node


# ==============================================
# Run configuration
# ==============================================


class Command(str, Enum):
    """CLI commands."""
    HARDY = "hardy"
    WEIGHTS = "weights"
    GEOMETRY = "geometry"
    DECOMPOSE = "decompose"
    DIVSOLVE = "divsolve"
    REPRODUCE = "reproduce"


class RunConfig(BaseModel):
    """
    Validated description of one run.

    Built from YAML defaults, then an optional JSON document, then explicit flags.
    Identical configs produce identical run ids and report bytes.
    """

    model_config = {"extra": "forbid", "frozen": True}

    command: Command
    gamma: float = Field(default=2.0, ge=1.0)
    p: float = Field(default=2.0, gt=1.0)
    beta: Optional[float] = None
    alpha: Optional[float] = None
    n: int = Field(default=100_000, ge=1)
    subdomains: int = Field(default=6, ge=2)
    resolution: int = Field(default=64, ge=16)
    tol: float = Field(default=1e-10, gt=0.0)
    seed: int = 0
    out: Optional[str] = None
    corollary: int = Field(default=1, ge=1, le=2)
    betas: list[float] = Field(default_factory=list)
    alphas: list[float] = Field(default_factory=list)
    weight_csv: Optional[str] = None
    test_function: str = "dipole"

    @field_validator("resolution")
    @classmethod
    def validate_resolution(cls, v: int) -> int:
        if v % 2:
            raise ValueError("resolution must be even")
        return v

    @model_validator(mode="after")
    def check_weight_choice(self) -> "RunConfig":
        if self.beta is not None and self.alpha is not None:
            raise ValueError("pass either beta or alpha, not both")
        return self

    @classmethod
    def build(
        cls,
        command: str,
        *,
        config_file: Optional[str] = None,
        overrides: Optional[dict[str, Any]] = None,
        yaml_config: Optional[dict[str, Any]] = None,
    ) -> "RunConfig":
        """Layer YAML defaults, a JSON config file and explicit overrides."""
        cfg = yaml_config or load_yaml_config()
        values: dict[str, Any] = {
            "command": command,
            "n": config_value(cfg, "hardy.n"),
            "subdomains": config_value(cfg, "decomposition.subdomains"),
            "resolution": config_value(cfg, "decomposition.resolution"),
            "tol": config_value(cfg, "solver.tol"),
            "test_function": config_value(cfg, "reproduce.test_function"),
        }
        if config_file is not None:
            path = Path(config_file)
            if not path.exists():
                raise ConfigurationError(f"Run config not found: {config_file}")
            try:
                document = json.loads(path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as e:
                raise ConfigurationError(
                    f"Run config is not valid JSON: {e}", details={"path": config_file}
                ) from e
            if not isinstance(document, dict):
                raise ConfigurationError("Run config must be a JSON object")
            document.pop("command", None)
            values.update(document)
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigurationError(
                "Invalid run configuration",
                details={"errors": [err["msg"] for err in e.errors()]},
            ) from e

    def canonical_json(self) -> str:
        """Canonical JSON form (sorted keys, no output path)."""
        data = self.model_dump(mode="json", exclude={"out"})
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    @property
    def run_id(self) -> str:
        digest = hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()
        return f"run_{digest[:16]}"
