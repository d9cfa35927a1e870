"""Finite categories, functors, slices and their connectivity."""
