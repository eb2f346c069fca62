"""Concept co-occurrence networks stratified by journal impact tier."""

from idrnet.errors import (
    ConfigError,
    DataError,
    DisconnectedError,
    IdrError,
    NumericError,
    UndefinedMetricError,
)
from idrnet.network import Network

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DataError",
    "DisconnectedError",
    "IdrError",
    "Network",
    "NumericError",
    "UndefinedMetricError",
    "__version__",
]
