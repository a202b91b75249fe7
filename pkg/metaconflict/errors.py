# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

"""Module for metaconflict errors"""

EXIT_INPUT_ERROR = 2
EXIT_SIZE_LIMIT = 3


class MetaconflictError(Exception):
    """Base error class for all metaconflict related errors

    The status is the exit status used by the command line front end.
    """

    status = 1

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class InputError(MetaconflictError):
    """Raised if an input value, matrix, partition or instance file is
    invalid

    Derives from :py:class:`MetaconflictError`
    """

    status = EXIT_INPUT_ERROR


class SizeLimitError(MetaconflictError):
    """Raised if a documented size limit is exceeded

    Derives from :py:class:`MetaconflictError`
    """

    status = EXIT_SIZE_LIMIT

    def __init__(self, what: str, size: int, limit: int) -> None:
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(str(self))

    def __str__(self) -> str:
        return f"{self.what}: size {self.size} exceeds limit {self.limit}"
