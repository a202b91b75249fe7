# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

import configparser
import logging
import os
import time
from logging.config import fileConfig
from pathlib import Path
from typing import Optional

DEFAULT_HANDLER_CONSOLE = {
    'class': 'logging.StreamHandler',
    'level': 'WARNING',
    'formatter': 'console',
    'args': 'sys.stderr,',
}

DEFAULT_HANDLER_FILE = {
    'class': 'handlers.WatchedFileHandler',
    'level': 'WARNING',
    'formatter': 'file',
    'args': '("/dev/null", "a")',
}

DEFAULT_HANDLERS = {'keys': 'console,file'}
DEFAULT_FORMATTERS = {'keys': 'console,file'}
DEFAULT_FORMATTER_FILE = {
    'format': f'METACONFLICT[{os.getpid()}] %(asctime)s: %(levelname)s: '
    '(%(name)s) %(message)s',
    'datefmt': '',
}
DEFAULT_FORMATTER_CONSOLE = {
    'format': '%(levelname)s: (%(name)s) %(message)s',
    'datefmt': '',
}
DEFAULT_LOGGERS = {'keys': 'root'}
DEFAULT_ROOT_LOGGER = {
    'level': 'NOTSET',
    'handlers': 'console',
    'propagate': '0',
}


def init_logging(
    log_level: str,
    *,
    log_file: Optional[str] = None,
    log_config: Optional[str] = None,
) -> None:
    """Configure logging to standard error and optionally a log file.

    Standard output is left to the reports.
    """
    config = configparser.ConfigParser(interpolation=None)
    config['handlers'] = DEFAULT_HANDLERS
    config['formatters'] = DEFAULT_FORMATTERS
    config['formatter_file'] = DEFAULT_FORMATTER_FILE
    config['formatter_console'] = DEFAULT_FORMATTER_CONSOLE
    config['handler_console'] = DEFAULT_HANDLER_CONSOLE
    config['handler_file'] = DEFAULT_HANDLER_FILE
    config['loggers'] = DEFAULT_LOGGERS
    config['logger_root'] = DEFAULT_ROOT_LOGGER

    if log_file:
        config['logger_root']['handlers'] = 'console,file'
        config['handler_file']['args'] = f"({log_file!r}, 'a')"

    config['handler_file']['level'] = log_level
    config['handler_console']['level'] = log_level

    if log_config:
        log_config_path = Path(log_config).expanduser()
        if log_config_path.exists():
            config.read(log_config_path)

    fileConfig(config, disable_existing_loggers=False)
    logging.Formatter.converter = time.gmtime
