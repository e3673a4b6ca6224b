"""Workbench for building preposition sense dictionaries from annotated
corpora: instance extraction, sense inventories, tagging, realization
analysis, rule-based disambiguation, and a definition digraph."""

__version__ = "0.1.0"
