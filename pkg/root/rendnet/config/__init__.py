"""
Configuration management for the application.
Provides centralized settings and environment variable handling.
"""

from .settings import (
    Settings,
    RuntimeSettings,
    DataSettings,
    get_settings,
)
