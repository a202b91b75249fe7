# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

"""Clustering of belief functions by metaconflict minimization."""

from .__version__ import __version__
