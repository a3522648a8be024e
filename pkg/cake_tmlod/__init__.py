# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Cake TMLoD: Thue–Morse level-of-distribution library and experiment CLI."""

__version__ = "0.1.0"
