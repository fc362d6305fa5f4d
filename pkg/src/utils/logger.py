"""
ThermoCheck Logger Setup
Centralized logging configuration
"""

import logging
import logging.handlers
import os
from pathlib import Path
from typing import Any, Dict

from dotenv import load_dotenv

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LEVEL_ENV = "THERMOCHECK_LOG_LEVEL"

CHECK_LOGGERS = ("src.transforms", "src.convexity", "src.stability", "src.euler", "src.core")


def resolve_level(config: Dict[str, Any]) -> int:
    """Log level: environment (.env honoured) wins over the config file"""
    load_dotenv()
    level = os.getenv(LEVEL_ENV) or config.get("level", "INFO")
    return getattr(logging, str(level).upper(), logging.INFO)


def setup_logging(config: Dict[str, Any]) -> int:
    """Setup logging configuration, returns the numeric level in effect"""

    format_str = config.get("format", DEFAULT_FORMAT)
    log_file = config.get("file")
    numeric_level = resolve_level(config)

    formatter = logging.Formatter(format_str)

    # Setup root logger
    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)
    root_logger.handlers.clear()

    # Console handler
    console_handler = logging.StreamHandler()
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    # File handler with rotation, only when a file is configured
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5,
            encoding="utf-8",
        )
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    # numpy RuntimeWarnings (overflow in a probe etc.) end up in the same log
    logging.captureWarnings(True)

    for name in CHECK_LOGGERS:
        logging.getLogger(name).setLevel(numeric_level)

    return numeric_level


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance"""
    return logging.getLogger(name)
