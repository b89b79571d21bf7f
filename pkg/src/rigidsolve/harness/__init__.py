"""CLI, file formats, and Monte Carlo experiments."""

from .sysfile import SystemFileError, parse_system, serialize_system  # noqa: F401
