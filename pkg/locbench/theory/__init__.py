"""Localisation models, hypothesis checks and the implication audit."""
