#!/usr/bin/env python3
"""Localisation workbench runner script.

This script is a wrapper around the locbench package.
"""

from locbench.cli import main

if __name__ == "__main__":
    main()
