#!/usr/bin/python
# coding: utf-8 -*-

"""Command line of the square billiard explorer."""
