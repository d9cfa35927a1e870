"""Finite-category localisation workbench.

This package builds localisations of finite categories at classes of
morphisms, checks the hypotheses under which a functor between two
localisation setups induces an equivalence, and audits the implications
between those hypotheses on generated setups.
"""

from .workbench import LocalisationWorkbench

__version__ = "0.1.0"
__all__ = ["LocalisationWorkbench"]
