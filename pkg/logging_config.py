import logging
import os
from logging.handlers import RotatingFileHandler

from config import Config

LOGGER_NAME = 'ontology_integrator'


def get_logger(module):
    """Child logger of the package logger, e.g. ontology_integrator.reasoner."""
    return logging.getLogger(f'{LOGGER_NAME}.{module}')


def setup_logger(level=None, log_dir=None, to_file=None):
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level or Config.LOG_LEVEL)

    # Configure handlers once; later calls only adjust the level
    if logger.handlers:
        return logger

    log_format = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(log_format)
    logger.addHandler(console_handler)

    if to_file if to_file is not None else Config.LOG_TO_FILE:
        log_dir = log_dir or Config.LOG_DIR
        # Create logs directory if it doesn't exist
        if not os.path.exists(log_dir):
            os.makedirs(log_dir)
        file_handler = RotatingFileHandler(
            os.path.join(log_dir, f'{LOGGER_NAME}.log'),
            maxBytes=Config.LOG_MAX_BYTES,
            backupCount=Config.LOG_BACKUP_COUNT
        )
        file_handler.setFormatter(log_format)
        logger.addHandler(file_handler)

    return logger
