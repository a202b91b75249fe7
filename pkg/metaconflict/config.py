# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

"""
Module to store metaconflict configuration settings
"""

import configparser
import logging

from pathlib import Path
from typing import Dict

logger = logging.getLogger(__name__)


class Config:
    def __init__(self, section: str = 'metaconflict') -> None:
        self._section = section
        self._config = {}  # type: Dict[str, str]

    def load(self, filepath: Path) -> None:
        path = filepath.expanduser()
        parser = configparser.ConfigParser()

        with path.open(encoding='utf-8') as f:
            parser.read_file(f)

        if parser.has_section(self._section):
            self._config.update(parser.items(self._section))

    def defaults(self) -> Dict[str, str]:
        """Settings as argument defaults, with dashes turned into
        underscores."""
        return {
            key.replace('-', '_'): value for key, value in self._config.items()
        }
