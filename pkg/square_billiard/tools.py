#!/usr/bin/python
# coding: utf-8 -*-

"""Module for tools related to sqb"""

from square_billiard.defaults import FLOAT_DIGITS


def exc_to_str(exception: Exception) -> str:
    """
    Helper function to parse Exceptions
    """
    return (
        f"{type(exception).__name__}{f' ({str(exception)})' if str(exception) else ''}"
    )


def fmt_float(value: float) -> str:
    """Render a float with 17 significant digits (lossless for doubles)."""
    return f"{value:.{FLOAT_DIGITS}g}"
