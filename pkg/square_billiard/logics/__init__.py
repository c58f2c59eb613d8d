#!/usr/bin/python
# coding: utf-8 -*-

"""Numerical logic of the square billiard: maps, invariant structures, orbits and scans."""
