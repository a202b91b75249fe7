# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

import time
import logging

from typing import Callable, Optional

from metaconflict.errors import MetaconflictError


logger = logging.getLogger(__name__)


class TimerError(MetaconflictError):
    """Timer errors"""


class Timer:
    """Measures the duration of a pipeline stage and logs it."""

    def __init__(
        self,
        name: Optional[str] = None,
        text: str = "{}: Elapsed time: {:0.4f} seconds",
        logger: Optional[  # pylint: disable=redefined-outer-name
            Callable[[str], None]
        ] = logger.debug,
    ):
        self._start_time = None
        self._name = name
        self._text = text
        self._logger = logger
        self.duration = None  # type: Optional[float]

    def __enter__(self) -> "Timer":
        self.start()
        return self

    def __exit__(self, exc_type, exc_value, exc_tb):
        self.stop()

    def start(self) -> None:
        """Start a new timer"""
        self._start_time = time.perf_counter()

    def stop(self) -> float:
        if self._start_time is None:
            raise TimerError('Timer is not running.')

        self.duration = time.perf_counter() - self._start_time
        self._start_time = None

        if self._logger:
            self._logger(self._text.format(self._name, self.duration))

        return self.duration
