#!/usr/bin/env python
"""
Setup script for subwalk.

This script is used to install subwalk in development mode.
"""

from setuptools import setup

if __name__ == "__main__":
    setup()
