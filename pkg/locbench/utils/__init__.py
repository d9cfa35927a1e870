"""Utility modules for the localisation workbench."""
