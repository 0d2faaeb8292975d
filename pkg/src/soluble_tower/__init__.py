"""Exact computational algebra for a tower of finite soluble groups."""

from .config import ConfigError, TowerConfig, load_config, parse_config
from .encoding import DecodeError, decode, encode, format_element
from .fields import Field
from .tower import GroupElement, LevelVector, Tower, TowerError

__all__ = [
    "ConfigError",
    "DecodeError",
    "Field",
    "GroupElement",
    "LevelVector",
    "Tower",
    "TowerConfig",
    "TowerError",
    "decode",
    "encode",
    "format_element",
    "load_config",
    "parse_config",
]
