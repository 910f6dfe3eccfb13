"""
Logging setup for the command line front end. Library modules only create their ``logging.getLogger(__name__)``.
"""

import logging

LOG_FORMAT = '%(asctime)s %(levelname)-7s %(name)s: %(message)s'
"""The format of the log records written on the standard error"""


def configure_logging(level='WARNING'):
    """
    Attach a stream handler to the ``hkl`` logger

    :param level: A logging level name or number
    :type level: str or int, optional
    :return: logging.Logger - The package logger
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    logger = logging.getLogger('hkl')
    logger.setLevel(level)
    if not any(getattr(h, '_hkl', False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._hkl = True
        logger.addHandler(handler)
    return logger
