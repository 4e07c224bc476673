"""Core utilities: config, logging, errors, caching."""

from hardydiv.core.cache import FactorizationCache, get_factorization_cache, make_cache_key
from hardydiv.core.config import (
    Command,
    RunConfig,
    Settings,
    config_value,
    get_settings,
    load_yaml_config,
)
from hardydiv.core.errors import (
    ConfigurationError,
    ConvergenceError,
    DataError,
    DegenerateInputError,
    DomainError,
    HardyDivError,
    InadmissibleParameterError,
    InvariantViolationError,
    PreconditionError,
    ShapeError,
    TailMassError,
)
from hardydiv.core.logging import LoggerMixin, get_logger, setup_logging

__all__ = [
    "Command",
    "ConfigurationError",
    "ConvergenceError",
    "DataError",
    "DegenerateInputError",
    "DomainError",
    "FactorizationCache",
    "HardyDivError",
    "InadmissibleParameterError",
    "InvariantViolationError",
    "LoggerMixin",
    "PreconditionError",
    "RunConfig",
    "Settings",
    "ShapeError",
    "TailMassError",
    "config_value",
    "get_factorization_cache",
    "get_logger",
    "get_settings",
    "load_yaml_config",
    "make_cache_key",
    "setup_logging",
]
