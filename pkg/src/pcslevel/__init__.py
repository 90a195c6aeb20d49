"""Levels of arithmetic subgroups of SL(n, Z) and Sp(n, Z), density testing
with a known transvection, and exceptional prime sets."""

__version__ = "0.1.0"
