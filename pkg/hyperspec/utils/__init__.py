"""
Utility modules for configuration, logging and report output.
"""

from .config import ExperimentConfig, LoggingConfig
from .config_manager import ConfigManager
from .logger import setup_logging
from .map_renderer import ClassificationMap, class_color, palette
from .report_generator import ReportGenerator

__all__ = [
    "ExperimentConfig",
    "LoggingConfig",
    "ConfigManager",
    "setup_logging",
    "ClassificationMap",
    "class_color",
    "palette",
    "ReportGenerator",
]
