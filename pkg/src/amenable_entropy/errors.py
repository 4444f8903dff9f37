"""Shared exception types."""

from __future__ import annotations

__all__ = ["BudgetExceededError", "WindowError", "ConfigError", "CoverError"]


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration would exceed the configured atom/candidate budget."""


class WindowError(ValueError):
    """Raised when a pattern does not carry the cells an operation needs."""


class ConfigError(ValueError):
    """Raised for malformed experiment configuration."""


class CoverError(RuntimeError):
    """Raised when a target set cannot be covered by the supplied ball family."""
