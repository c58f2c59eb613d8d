#!/usr/bin/python
# coding: utf-8 -*-

"""Pydantic data models for square_billiard."""
