import logging
import os
import sys
from logging.handlers import RotatingFileHandler

from dotenv import load_dotenv

load_dotenv()

app_name = os.getenv("APP_NAME", "hgs-hopf")
log_file_name = os.getenv("LOG_FILE", "hgs_hopf.log")
log_level_name = os.getenv("LOG_LEVEL", "INFO")


def setup_logger(name=app_name, log_file=log_file_name, level=logging.INFO):
    """
    Create the toolkit logger.

    Features:
    - Console output on stderr (stdout carries JSON/CSV reports)
    - File logging with rotation, skipped when log_file is empty
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Clear any existing handlers
    logger.handlers.clear()
    logger.propagate = False

    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"
    )

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)

        file_handler = RotatingFileHandler(
            log_file, maxBytes=10 * 1024 * 1024, backupCount=5  # 10MB
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


# logger instance
configured_logger = setup_logger(level=getattr(logging, log_level_name.upper(), logging.INFO))
