#!/usr/bin/python
# coding: utf-8 -*-

"""Entry point for ``python -m square_billiard.cli``."""

from __future__ import annotations

from .cli import cli

if __name__ == "__main__":
    cli()
